#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <sstream>
#include <thread>

#include "convdistill/numeric.hpp"
#include "convdistill/runtime.hpp"
#include "matrix_io.hpp"

namespace convdistill::cli {

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch:
    case ErrorCode::Format:
    case ErrorCode::EmptyInput:
    case ErrorCode::SegmentationMismatch:
    case ErrorCode::UnknownFeature:
    case ErrorCode::UnsupportedSegmentation:
      return kExitFormat;
    case ErrorCode::DivisionNearZero:
    case ErrorCode::NotReal:
      return kExitIllConditioned;
    case ErrorCode::InvalidArgument:
    case ErrorCode::NonFinite:
    case ErrorCode::Parse:
    case ErrorCode::Io:
      return kExitParse;
  }
  return kExitParse;
}

std::size_t default_cores() {
  if (const char* env = std::getenv("CONVDISTILL_CORES"); env && *env) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0' || v == 0) {
      throw Error(ErrorCode::InvalidArgument,
                  std::string("CONVDISTILL_CORES must be a positive integer, got '") + env + "'");
    }
    return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void run_fft(const FftOptions& options) {
  const auto x = io::read_matrix(options.input);
  WorkerPool pool(options.cores);
  const auto direction = options.inverse ? Direction::Inverse : Direction::Forward;
  io::write_cdm(options.output, parallel_dft_2d(x, options.norm, pool, direction));
}

Regularization parse_lambda(const std::string& text) {
  if (text == "auto") return Regularization::automatic();
  double v = 0.0;
  std::size_t used = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) {
    throw Error(ErrorCode::InvalidArgument, "--lambda expects a number or 'auto', got '" + text + "'");
  }
  return Regularization(v);
}

DistillReport run_distill(const DistillOptions& options) {
  if (options.x.size() != options.y.size()) {
    throw Error(ErrorCode::DimensionMismatch, "got " + std::to_string(options.x.size()) +
                                                  " --x files but " +
                                                  std::to_string(options.y.size()) + " --y files");
  }
  if (options.x.empty()) throw Error(ErrorCode::EmptyInput, "no training pairs given");
  std::vector<TrainingPair> pairs;
  for (std::size_t i = 0; i < options.x.size(); ++i) {
    pairs.push_back({io::read_matrix(options.x[i]), io::read_matrix(options.y[i])});
  }
  const TrainingSet set(std::move(pairs));
  WorkerPool pool(options.cores);
  const auto model = solve_kernel_batch(set, options.lambda, pool);
  const double error = fit_error(model, set, pool);

  io::write_cdm(options.out, model.kernel);
  DistillReport report{set.rows(), set.cols(), set.size(), model.lambda, error, options.out + ".txt"};
  std::ostringstream sidecar;
  sidecar << "rows=" << report.rows << '\n'
          << "cols=" << report.cols << '\n'
          << "pairs=" << report.pairs << '\n'
          << "lambda=" << io::format_double(report.lambda) << '\n'
          << "normalization=unnormalized\n"
          << "fit_error=" << io::format_double(report.fit_error) << '\n';
  io::write_file(report.sidecar_path, sidecar.str());
  return report;
}

namespace {

bool parse_positive(std::string_view text, std::size_t& value) {
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc() && ptr == text.data() + text.size() && value > 0;
}

}  // namespace

FeatureSegmentation parse_segmentation(const std::string& spec, std::size_t rows,
                                       std::size_t cols) {
  if (spec == "cols") return FeatureSegmentation::columns(rows, cols);
  if (spec == "rows") return FeatureSegmentation::rows(rows, cols);
  if (spec.rfind("block:", 0) == 0) {
    const std::string_view dims = std::string_view(spec).substr(6);
    const auto comma = dims.find(',');
    std::size_t br = 0;
    std::size_t bc = 0;
    if (comma != std::string_view::npos && parse_positive(dims.substr(0, comma), br) &&
        parse_positive(dims.substr(comma + 1), bc)) {
      return FeatureSegmentation::block_grid(rows, cols, br, bc);
    }
  }
  throw Error(ErrorCode::InvalidArgument,
              "--seg expects block:R,C (positive integers), cols or rows; got '" + spec + "'");
}

std::string encode_weights_csv(const ContributionMap& map) {
  const auto ranking = rank_features(map);
  std::vector<std::size_t> rank(map.features.size());
  for (std::size_t i = 0; i < ranking.size(); ++i) rank[ranking[i].first] = i + 1;
  std::string out = "feature_id,weight,rank\n";
  for (const auto& f : map.features) {
    out += std::to_string(f.feature_id) + "," + io::format_double(f.weight) + "," +
           std::to_string(rank[f.feature_id]) + "\n";
  }
  return out;
}

ExplainReport run_explain(const ExplainOptions& options) {
  const auto x = io::read_matrix(options.x);
  const auto y = io::read_matrix(options.y);
  DistilledModel model{io::read_matrix(options.model)};
  if (!x.same_shape(y) || !x.same_shape(model.kernel)) {
    throw Error(ErrorCode::DimensionMismatch, "x is " + shape_string(x) + ", y is " +
                                                  shape_string(y) + ", kernel is " +
                                                  shape_string(model.kernel));
  }
  const auto seg = parse_segmentation(options.segmentation, x.rows(), x.cols());
  WorkerPool pool(options.cores);
  const auto map = contribution_map(x, y, model, seg, pool);

  ComplexMatrix total(x.rows(), x.cols());
  for (const auto& f : map.features) total = total + f.contribution;
  const double scale = frobenius_norm(y);
  const double residual = scale > 0.0 ? frobenius_norm(total - y) / scale
                                      : frobenius_norm(total);

  ExplainReport report{map.features.size(), residual, options.out_prefix + ".weights.csv",
                       options.out_prefix + ".heatmap.pgm", rank_features(map)};
  io::write_file(report.weights_path, encode_weights_csv(map));
  io::write_file(report.heatmap_path, io::encode_pgm(heatmap(map)));
  return report;
}

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
double time_ms(std::size_t repeats, F&& f) {
  double best = 0.0;
  for (std::size_t r = 0; r < std::max<std::size_t>(1, repeats); ++r) {
    const auto start = Clock::now();
    f();
    const double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    best = r == 0 ? ms : std::min(best, ms);
  }
  return best;
}

}  // namespace

std::vector<BenchRow> run_bench(const BenchOptions& options) {
  if (options.sizes.empty() || options.cores.empty()) {
    throw Error(ErrorCode::InvalidArgument, "bench needs at least one size and one core count");
  }
  for (auto s : options.sizes) {
    if (s < 2) throw Error(ErrorCode::InvalidArgument, "bench sizes must be at least 2");
  }
  for (auto p : options.cores) {
    if (p == 0) throw Error(ErrorCode::InvalidArgument, "bench core counts must be positive");
  }
  constexpr auto norm = Normalization::Unnormalized;
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);

  std::vector<BenchRow> rows;
  for (const std::size_t size : options.sizes) {
    ComplexMatrix x(size, size);
    for (auto& v : x.values()) v = Complex(dist(rng), dist(rng));

    std::optional<ComplexMatrix> reference;
    if (size <= kDirectCutoff) {
      const double ms = time_ms(1, [&] { reference = dft_2d_direct(x, norm); });
      rows.push_back({size, "direct", 1, ms, 0.0});
    } else {
      rows.push_back({size, "direct", 1, std::nullopt, std::nullopt});
    }
    const auto error_of = [&](const ComplexMatrix& got) -> std::optional<double> {
      if (!reference) return std::nullopt;
      return max_relative_error(got, *reference);
    };

    std::optional<ComplexMatrix> serial;
    const double serial_ms = time_ms(options.repeats, [&] { serial = dft_2d_two_stage(x, norm); });
    rows.push_back({size, "two-stage-serial", 1, serial_ms, error_of(*serial)});

    for (const std::size_t p : options.cores) {
      WorkerPool pool(p);
      std::optional<ComplexMatrix> parallel;
      const double ms = time_ms(options.repeats, [&] { parallel = parallel_dft_2d(x, norm, pool); });
      rows.push_back({size, "parallel-p" + std::to_string(p), p, ms, error_of(*parallel)});
    }
  }
  if (!options.out.empty()) io::write_file(options.out, encode_bench_csv(rows));
  return rows;
}

std::string encode_bench_csv(const std::vector<BenchRow>& rows) {
  std::string out = "size,method,workers,wall_ms,max_rel_error\n";
  char buf[64];
  for (const auto& r : rows) {
    out += std::to_string(r.size) + "," + r.method + "," + std::to_string(r.workers) + ",";
    if (r.wall_ms) {
      std::snprintf(buf, sizeof(buf), "%.3f", *r.wall_ms);
      out += buf;
    } else {
      out += "n/a";
    }
    out += ",";
    if (r.max_rel_error) {
      std::snprintf(buf, sizeof(buf), "%.3e", *r.max_rel_error);
      out += buf;
    } else {
      out += "n/a";
    }
    out += "\n";
  }
  return out;
}

}  // namespace convdistill::cli
