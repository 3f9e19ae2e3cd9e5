// End-to-end acceptance suite. Prints one line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cli/matrix_io.hpp"
#include "convdistill/convdistill.hpp"
#include "process_util.hpp"
#include "test_support.hpp"

namespace convdistill {
namespace {

using testing::conditioned_input;
using testing::isolate_feature;
using testing::random_complex;
using testing::random_real;
using testing::relative_frobenius;
using testing::run_command;
using testing::ScratchDir;

const std::string kCli = CONVDISTILL_CLI_PATH;

enum class Status { Pass, Fail, Skip };

struct Outcome {
  Status status;
  std::string detail;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2e", v);
  return buf;
}

Outcome verdict(bool ok, const std::string& detail) {
  return {ok ? Status::Pass : Status::Fail, detail};
}

// 1. parallel_dft_2d vs the definitional 2-D DFT.
Outcome oracle_equivalence() {
  constexpr double kTol = 1e-10;
  const std::vector<std::size_t> workers{1, 2, 3, 4, 7, 8};
  std::vector<std::unique_ptr<WorkerPool>> pools;
  for (auto p : workers) pools.push_back(std::make_unique<WorkerPool>(p));

  std::vector<std::pair<std::size_t, std::size_t>> shapes{
      {1, 1}, {1, 64}, {64, 1}, {2, 3}, {7, 13}, {31, 37}, {61, 17}, {53, 64}, {64, 64}, {59, 59}};
  std::mt19937_64 rng(1001);
  std::uniform_int_distribution<std::size_t> dim(1, 64);
  while (shapes.size() < 110) shapes.emplace_back(dim(rng), dim(rng));

  double worst = 0.0;
  std::size_t checks = 0;
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    const auto x = random_complex(shapes[i].first, shapes[i].second, rng);
    for (auto norm : {Normalization::Unnormalized, Normalization::Unitary}) {
      const auto oracle = dft_2d_direct(x, norm);
      for (auto& pool : pools) {
        worst = std::max(worst, max_relative_error(parallel_dft_2d(x, norm, *pool), oracle));
        ++checks;
      }
    }
  }
  return verdict(worst <= kTol, std::to_string(shapes.size()) + " matrices, " +
                                    std::to_string(checks) + " checks, max rel err " + sci(worst) +
                                    " (tol 1e-10)");
}

// 2. F(x (*) k) == F(x) o F(k), and the sqrt(MN) factor for unitary transforms.
Outcome convolution_theorem() {
  constexpr double kTol = 1e-10;
  constexpr std::size_t kSize = 16;
  WorkerPool pool(4);
  std::mt19937_64 rng(2002);
  double worst = 0.0;
  double worst_unitary = 0.0;
  const double root = std::sqrt(static_cast<double>(kSize * kSize));
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = random_complex(kSize, kSize, rng);
    const auto k = random_complex(kSize, kSize, rng);
    const auto conv = circular_convolve_direct(x, k);
    const auto u = Normalization::Unnormalized;
    worst = std::max(worst, max_relative_error(parallel_dft_2d(conv, u, pool),
                                               hadamard(parallel_dft_2d(x, u, pool),
                                                        parallel_dft_2d(k, u, pool))));
    const auto n = Normalization::Unitary;
    const auto product = hadamard(parallel_dft_2d(x, n, pool), parallel_dft_2d(k, n, pool));
    worst_unitary = std::max(
        worst_unitary, max_relative_error(parallel_dft_2d(conv, n, pool), Complex(root) * product));
  }
  return verdict(worst <= kTol && worst_unitary <= kTol,
                 "100 pairs 16x16, unnormalized err " + sci(worst) + ", unitary with sqrt(MN)=16 err " +
                     sci(worst_unitary) + " (tol 1e-10)");
}

// 3. Exact kernel recovery, single pair and five-pair batch.
Outcome kernel_recovery() {
  constexpr double kTol = 1e-8;
  WorkerPool pool(4);
  std::mt19937_64 rng(3003);
  std::uniform_int_distribution<std::size_t> dim(2, 32);
  double worst_single = 0.0;
  double worst_batch = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = trial == 0 ? 32 : dim(rng);
    const std::size_t n = trial == 0 ? 32 : dim(rng);
    const auto k_true = random_real(m, n, rng);

    const auto x = conditioned_input(m, n, rng);
    const auto model = solve_kernel(x, circular_convolve_direct(x, k_true), 0.0, pool);
    worst_single = std::max(worst_single, relative_frobenius(model.kernel, k_true));

    std::vector<TrainingPair> pairs;
    for (int i = 0; i < 5; ++i) {
      auto xi = conditioned_input(m, n, rng);
      auto yi = circular_convolve_direct(xi, k_true);
      pairs.push_back({std::move(xi), std::move(yi)});
    }
    const auto batch = solve_kernel_batch(TrainingSet(std::move(pairs)), 0.0, pool);
    worst_batch = std::max(worst_batch, relative_frobenius(batch.kernel, k_true));
  }
  return verdict(worst_single <= kTol && worst_batch <= kTol,
                 "100 trials up to 32x32, single " + sci(worst_single) + ", batch(5) " +
                     sci(worst_batch) + " (tol 1e-8)");
}

// 4. Occlusion linearity and completeness on exact surrogates.
Outcome interpretation_invariants() {
  constexpr double kTol = 1e-9;
  WorkerPool pool(3);
  std::mt19937_64 rng(4004);
  std::uniform_int_distribution<std::size_t> dim(2, 16);
  std::uniform_int_distribution<std::size_t> block(1, 5);
  double worst_linearity = 0.0;
  double worst_completeness = 0.0;
  std::size_t features = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = dim(rng);
    const std::size_t n = dim(rng);
    const auto x = random_real(m, n, rng);
    const DistilledModel model{random_real(m, n, rng)};
    const auto y = circular_convolve_direct(x, model.kernel);
    const auto seg = trial % 3 == 0   ? FeatureSegmentation::block_grid(m, n, block(rng), block(rng))
                     : trial % 3 == 1 ? FeatureSegmentation::columns(m, n)
                                      : FeatureSegmentation::rows(m, n);
    const auto map = contribution_map(x, y, model, seg, pool);
    ComplexMatrix total(m, n);
    for (const auto& f : map.features) {
      const auto expected = circular_convolve_direct(isolate_feature(x, seg, f.feature_id),
                                                     model.kernel);
      worst_linearity = std::max(worst_linearity, max_relative_error(f.contribution, expected));
      total = total + f.contribution;
      ++features;
    }
    worst_completeness = std::max(worst_completeness, max_relative_error(total, y));
  }
  return verdict(worst_linearity <= kTol && worst_completeness <= kTol,
                 "50 cases (block/cols/rows), " + std::to_string(features) +
                     " features, linearity " + sci(worst_linearity) + ", completeness " +
                     sci(worst_completeness) + " (tol 1e-9)");
}

// 5. Bit-identical repeated runs.
Outcome determinism() {
  std::mt19937_64 rng(5005);
  const auto x = random_complex(37, 29, rng);
  const auto xs = conditioned_input(24, 20, rng);
  const auto ys = circular_convolve_direct(xs, random_real(24, 20, rng));
  bool ok = true;
  for (std::size_t p : {1, 2, 3, 4, 7, 8}) {
    for (auto norm : {Normalization::Unnormalized, Normalization::Unitary}) {
      WorkerPool first(p);
      WorkerPool second(p);
      ok &= parallel_dft_2d(x, norm, first) == parallel_dft_2d(x, norm, second);
      ok &= parallel_dft_2d(x, norm, first) == parallel_dft_2d(x, norm, first);
    }
    WorkerPool pool(p);
    ok &= solve_kernel(xs, ys, 0.0, pool).kernel == solve_kernel(xs, ys, 0.0, pool).kernel;
    ok &= solve_kernel(xs, ys, Regularization::automatic(), pool).kernel ==
          solve_kernel(xs, ys, Regularization::automatic(), pool).kernel;
  }
  return verdict(ok, "parallel_dft_2d and solve_kernel, p in {1,2,3,4,7,8}, bitwise comparison");
}

struct BenchLine {
  std::size_t size;
  std::string method;
  std::string wall_ms;
  std::string error;
};

std::vector<BenchLine> parse_bench(const std::string& csv) {
  std::vector<BenchLine> out;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::istringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) f.push_back(field);
    if (f.size() == 5) out.push_back({std::stoul(f[0]), f[1], f[3], f[4]});
  }
  return out;
}

const BenchLine* find_line(const std::vector<BenchLine>& lines, std::size_t size,
                           const std::string& method) {
  for (const auto& l : lines) {
    if (l.size == size && l.method == method) return &l;
  }
  return nullptr;
}

// 6. Desk-scale scalability through the bench command.
std::vector<Outcome> scalability() {
  ScratchDir dir("convdistill_acceptance_bench");
  const auto report = dir.file("report.csv");
  const auto run = run_command(kCli + " bench --sizes 256,1024 --cores 1,8 --out " + report);
  if (run.exit_code != 0) {
    return {{Status::Fail, "bench exited with " + std::to_string(run.exit_code)}, {Status::Fail, ""}};
  }
  const auto lines = parse_bench(io::read_file(report));

  std::vector<Outcome> outcomes;
  const auto* direct = find_line(lines, 256, "direct");
  const auto* serial = find_line(lines, 256, "two-stage-serial");
  bool errors_ok = true;
  for (const auto& l : lines) {
    if (l.method != "direct" && l.size <= 256) errors_ok &= std::stod(l.error) <= 1e-9;
  }
  if (!direct || !serial) {
    outcomes.push_back({Status::Fail, "missing 256x256 rows"});
  } else {
    const double ratio = std::stod(direct->wall_ms) / std::stod(serial->wall_ms);
    outcomes.push_back(verdict(ratio >= 10.0 && errors_ok,
                               "256x256 direct " + direct->wall_ms + " ms vs two-stage-serial " +
                                   serial->wall_ms + " ms, speedup " + sci(ratio) +
                                   " (need >= 10x); fast-method errors <= 1e-9: " +
                                   (errors_ok ? "yes" : "no")));
  }

  const auto* p1 = find_line(lines, 1024, "parallel-p1");
  const auto* p8 = find_line(lines, 1024, "parallel-p8");
  if (!p1 || !p8) {
    outcomes.push_back({Status::Fail, "missing 1024x1024 rows"});
    return outcomes;
  }
  const double speedup = std::stod(p1->wall_ms) / std::stod(p8->wall_ms);
  const unsigned threads = std::thread::hardware_concurrency();
  const std::string measured = "1024x1024 p1 " + p1->wall_ms + " ms vs p8 " + p8->wall_ms +
                               " ms, speedup " + sci(speedup) + " (need >= 3x)";
  if (threads < 8) {
    outcomes.push_back({Status::Skip, measured + "; applies only with >= 8 hardware threads, this "
                                                 "machine reports " +
                                          std::to_string(threads)});
  } else {
    outcomes.push_back(verdict(speedup >= 3.0, measured));
  }
  return outcomes;
}

// 7. CLI worked examples, byte-level formats and exit codes.
Outcome cli_contract() {
  ScratchDir dir("convdistill_acceptance_cli");
  std::vector<std::string> failures;
  const auto check = [&](bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  };
  const auto cli = [&](const std::string& args) { return run_command(kCli + " " + args); };

  // fft: 1x1 "5" -> CDM with 5+0j, byte for byte.
  io::write_file(dir.file("five.csv"), "5\n");
  check(cli("fft " + dir.file("five.csv") + " " + dir.file("five.cdm") + " --norm unnorm").exit_code == 0,
        "fft 1x1 exit");
  const std::string five_bytes = std::string("CDM1") + std::string("\x01\0\0\0\0\0\0\0", 8) +
                                 std::string("\x01\0\0\0\0\0\0\0", 8) +
                                 std::string("\0\0\0\0\0\0\x14\x40", 8) + std::string(8, '\0');
  check(io::read_file(dir.file("five.cdm")) == five_bytes, "fft 1x1 CDM bytes");

  // fft: 4x1 column -> [10, -2+2j, -2, -2-2j].
  io::write_file(dir.file("col.csv"), "1\n2\n3\n4\n");
  check(cli("fft " + dir.file("col.csv") + " " + dir.file("col.cdm") + " --cores 4").exit_code == 0,
        "fft 4x1 exit");
  const auto col_bytes = io::read_file(dir.file("col.cdm"));
  check(col_bytes.substr(0, 20) == std::string("CDM1") + std::string("\x04\0\0\0\0\0\0\0", 8) +
                                       std::string("\x01\0\0\0\0\0\0\0", 8),
        "fft 4x1 CDM header");
  const auto spectrum = io::decode_cdm(col_bytes);
  check(max_abs_diff(spectrum, ComplexMatrix(4, 1, {10, Complex(-2, 2), -2, Complex(-2, -2)})) <= 1e-12,
        "fft 4x1 values");

  // fft --inverse restores the input.
  check(cli("fft " + dir.file("col.cdm") + " " + dir.file("back.cdm") + " --inverse").exit_code == 0,
        "fft inverse exit");
  check(max_relative_error(io::read_matrix(dir.file("back.cdm")), io::read_matrix(dir.file("col.csv"))) <=
            1e-10,
        "fft inverse round trip");

  // distill: delta input -> kernel equals y; sidecar records lambda, dims, fit_error.
  std::mt19937_64 rng(7007);
  const auto m = random_real(5, 4, rng);
  io::write_cdm(dir.file("delta.cdm"), testing::delta(5, 4));
  io::write_cdm(dir.file("m.cdm"), m);
  check(cli("distill --x " + dir.file("delta.cdm") + " --y " + dir.file("m.cdm") + " --lambda 0 --out " +
            dir.file("k.cdm"))
                .exit_code == 0,
        "distill delta exit");
  check(max_relative_error(io::read_matrix(dir.file("k.cdm")), m) <= 1e-12, "distill delta kernel");
  const auto sidecar = io::read_file(dir.file("k.cdm.txt"));
  check(sidecar.find("rows=5\ncols=4\n") != std::string::npos && sidecar.find("lambda=0\n") != std::string::npos &&
            sidecar.find("fit_error=") != std::string::npos,
        "distill sidecar fields");

  // distill: consistent synthetic pair -> fit_error <= 1e-8.
  const auto x = conditioned_input(6, 6, rng);
  const auto k_true = random_real(6, 6, rng);
  io::write_cdm(dir.file("x.cdm"), x);
  io::write_cdm(dir.file("y.cdm"), circular_convolve_direct(x, k_true));
  check(cli("distill --x " + dir.file("x.cdm") + " --y " + dir.file("y.cdm") + " --lambda 0 --out " +
            dir.file("kx.cdm"))
                .exit_code == 0,
        "distill synthetic exit");
  const auto side = io::read_file(dir.file("kx.cdm.txt"));
  const auto at = side.find("fit_error=");
  check(at != std::string::npos && std::stod(side.substr(at + 10)) <= 1e-8, "distill fit_error");

  // distill: constant input has zero spectral bins -> exit 4.
  io::write_file(dir.file("const.csv"), "2,2,2\n2,2,2\n");
  io::write_file(dir.file("any.csv"), "1,0,3\n0,5,1\n");
  check(cli("distill --x " + dir.file("const.csv") + " --y " + dir.file("any.csv") + " --lambda 0 --out " +
            dir.file("kc.cdm"))
                .exit_code == 4,
        "distill singular exit 4");

  // explain: exact model, cols -> completeness reported within 1e-9.
  const auto r = cli("explain --x " + dir.file("x.cdm") + " --y " + dir.file("y.cdm") + " --model " +
                     dir.file("kx.cdm") + " --seg cols --out-prefix " + dir.file("cols"));
  const auto res_at = r.output.find("completeness_residual=");
  check(r.exit_code == 0 && res_at != std::string::npos &&
            std::stod(r.output.substr(res_at + 22)) <= 1e-9,
        "explain completeness");

  // explain: zero x with an exact model -> all-zero PGM.
  io::write_file(dir.file("zero.csv"), "0,0,0\n0,0,0\n");
  io::write_file(dir.file("kernel.csv"), "1,2,0\n0,1,1\n");
  check(cli("explain --x " + dir.file("zero.csv") + " --y " + dir.file("zero.csv") + " --model " +
            dir.file("kernel.csv") + " --seg cols --out-prefix " + dir.file("zero"))
                .exit_code == 0,
        "explain zero exit");
  check(io::read_file(dir.file("zero.heatmap.pgm")) == "P2\n3 1\n255\n0 0 0\n", "explain zero PGM bytes");

  // explain: block:1,1 on 2x2 -> 4 features.
  io::write_file(dir.file("x22.csv"), "1,2\n3,4\n");
  io::write_file(dir.file("k22.csv"), "1,0\n0,0\n");
  check(cli("explain --x " + dir.file("x22.csv") + " --y " + dir.file("x22.csv") + " --model " +
            dir.file("k22.csv") + " --seg block:1,1 --out-prefix " + dir.file("b11"))
                .exit_code == 0,
        "explain block exit");
  const auto weights = io::read_file(dir.file("b11.weights.csv"));
  check(weights == "feature_id,weight,rank\n0,1,4\n1,2,3\n2,3,2\n3,4,1\n", "explain block weights CSV");
  check(io::read_file(dir.file("b11.heatmap.pgm")) == "P2\n2 2\n255\n64 128\n191 255\n",
        "explain block PGM bytes");

  // Remaining exit codes.
  io::write_file(dir.file("bad.csv"), "1,x\n");
  check(cli("fft " + dir.file("bad.csv") + " " + dir.file("o.cdm")).exit_code == 2, "exit 2 on parse");
  check(cli("explain --x " + dir.file("x22.csv") + " --y " + dir.file("x.cdm") + " --model " +
            dir.file("k22.csv") + " --out-prefix " + dir.file("mm"))
                .exit_code == 3,
        "exit 3 on dimension mismatch");

  std::string detail = "fft/distill/explain worked examples, CDM + PGM bytes, exit codes 0/2/3/4";
  if (!failures.empty()) {
    detail = "failed:";
    for (const auto& f : failures) detail += " [" + f + "]";
  }
  return verdict(failures.empty(), detail);
}

}  // namespace
}  // namespace convdistill

int main() {
  using namespace convdistill;
  struct Criterion {
    std::string id;
    std::string name;
    std::function<std::vector<Outcome>()> run;
  };
  const auto one = [](Outcome (*f)()) { return [f] { return std::vector<Outcome>{f()}; }; };
  const std::vector<Criterion> criteria{
      {"AC1", "oracle equivalence", one(oracle_equivalence)},
      {"AC2", "convolution theorem", one(convolution_theorem)},
      {"AC3", "kernel recovery", one(kernel_recovery)},
      {"AC4", "interpretation invariants", one(interpretation_invariants)},
      {"AC5", "determinism", one(determinism)},
      {"AC6", "scalability (serial vs direct | p8 vs p1)", scalability},
      {"AC7", "CLI contract", one(cli_contract)},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<Outcome> outcomes;
    try {
      outcomes = c.run();
    } catch (const std::exception& e) {
      outcomes = {{Status::Fail, std::string("exception: ") + e.what()}};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      const auto& o = outcomes[i];
      const char* tag = o.status == Status::Pass ? "PASS" : o.status == Status::Fail ? "FAIL" : "SKIP";
      if (o.status == Status::Fail) ++failed;
      std::cout << "[" << tag << "] " << c.id << (outcomes.size() > 1 ? std::string(1, 'a' + i) : "")
                << " " << c.name << ": " << o.detail;
      if (i + 1 == outcomes.size()) std::printf(" (%.1f s)", secs);
      std::cout << std::endl;
    }
  }
  std::cout << (failed ? "acceptance: FAILED (" + std::to_string(failed) + ")" : "acceptance: all criteria passed or not applicable")
            << std::endl;
  return failed ? 1 : 0;
}
