#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli/commands.hpp"
#include "cli/matrix_io.hpp"
#include "convdistill/numeric.hpp"

namespace {

using namespace convdistill;

int report_error(const Error& e) {
  std::cerr << "convdistill: " << e.what() << " [" << to_string(e.code()) << "]\n";
  if (e.code() == ErrorCode::DivisionNearZero) {
    std::cerr << "hint: the input spectrum has (near-)zero bins; retry with --lambda auto or a "
                 "positive --lambda\n";
  }
  return cli::exit_code_for(e.code());
}

void run_convert(const std::string& input, const std::string& output, bool project_real) {
  const auto m = io::read_matrix(input);
  const bool as_csv = output.size() >= 4 && output.substr(output.size() - 4) == ".csv";
  if (!as_csv) {
    io::write_cdm(output, m);
    return;
  }
  RealMatrix real(m.rows(), m.cols());
  if (project_real) {
    real = real_kernel(DistilledModel{m});
  } else {
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m.values()[i].imag() != 0.0) {
        throw Error(ErrorCode::NotReal,
                    "matrix has imaginary parts; CSV holds reals only (use --real to project)");
      }
      real.values()[i] = m.values()[i].real();
    }
  }
  io::write_file(output, io::encode_csv(real));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convolution-surrogate distillation and occlusion explanations"};
  app.require_subcommand(1);

  std::size_t cores = 0;
  const auto add_cores = [&](CLI::App* sub) {
    sub->add_option("--cores", cores, "Worker count (default: $CONVDISTILL_CORES or all threads)")
        ->check(CLI::PositiveNumber);
  };

  cli::FftOptions fft;
  std::string fft_norm = "unnorm";
  auto* fft_cmd = app.add_subcommand("fft", "2-D DFT of a CSV/CDM matrix, written as CDM");
  fft_cmd->add_option("input", fft.input, "Input matrix (CSV or CDM)")->required();
  fft_cmd->add_option("output", fft.output, "Output CDM path")->required();
  fft_cmd->add_option("--norm", fft_norm, "unitary or unnorm")
      ->check(CLI::IsMember({"unitary", "unnorm"}));
  fft_cmd->add_flag("--inverse", fft.inverse, "Inverse transform");
  add_cores(fft_cmd);

  cli::DistillOptions distill;
  std::string lambda_text = "0";
  auto* distill_cmd = app.add_subcommand("distill", "Fit a convolution kernel to (x, y) pairs");
  distill_cmd->add_option("--x", distill.x, "Input matrices")->required();
  distill_cmd->add_option("--y", distill.y, "Output matrices, paired with --x")->required();
  distill_cmd->add_option("--lambda", lambda_text, "Regularization strength or 'auto'");
  distill_cmd->add_option("--out", distill.out, "Kernel output path (CDM)")->required();
  add_cores(distill_cmd);

  cli::ExplainOptions explain;
  auto* explain_cmd = app.add_subcommand("explain", "Occlusion contribution factors per feature");
  explain_cmd->add_option("--x", explain.x, "Input matrix")->required();
  explain_cmd->add_option("--y", explain.y, "Reference output matrix")->required();
  explain_cmd->add_option("--model", explain.model, "Kernel (CDM or CSV)")->required();
  explain_cmd->add_option("--seg", explain.segmentation, "block:R,C | cols | rows");
  explain_cmd->add_option("--out-prefix", explain.out_prefix, "Prefix for output files")
      ->required();
  add_cores(explain_cmd);

  cli::BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "Direct vs two-stage vs parallel 2-D DFT timings");
  bench_cmd->add_option("--sizes", bench.sizes, "Square sizes, e.g. 64,256")
      ->delimiter(',')
      ->required();
  bench_cmd->add_option("--cores", bench.cores, "Worker counts, e.g. 1,8")
      ->delimiter(',')
      ->required();
  bench_cmd->add_option("--out", bench.out, "Report CSV path")->required();
  bench_cmd->add_option("--seed", bench.seed, "Random seed");
  bench_cmd->add_option("--repeats", bench.repeats, "Timed repetitions (best is kept)")
      ->check(CLI::PositiveNumber);

  std::string convert_in;
  std::string convert_out;
  bool convert_real = false;
  auto* convert_cmd = app.add_subcommand("convert", "Convert between CSV and CDM (by extension)");
  convert_cmd->add_option("input", convert_in)->required();
  convert_cmd->add_option("output", convert_out)->required();
  convert_cmd->add_flag("--real", convert_real, "Project nearly-real data onto the reals");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitParse;
  }

  try {
    const std::size_t workers = cores ? cores : cli::default_cores();
    if (*fft_cmd) {
      fft.norm = fft_norm == "unitary" ? Normalization::Unitary : Normalization::Unnormalized;
      fft.cores = workers;
      cli::run_fft(fft);
    } else if (*distill_cmd) {
      distill.lambda = cli::parse_lambda(lambda_text);
      distill.cores = workers;
      const auto r = cli::run_distill(distill);
      std::cout << "kernel " << r.rows << "x" << r.cols << " from " << r.pairs
                << " pair(s), lambda=" << io::format_double(r.lambda)
                << ", fit_error=" << io::format_double(r.fit_error) << "\n";
    } else if (*explain_cmd) {
      explain.cores = workers;
      const auto r = cli::run_explain(explain);
      std::cout << r.features << " features, completeness_residual="
                << io::format_double(r.completeness_residual)
                << (r.completeness_residual <= cli::kCompletenessTolerance
                        ? " (contributions sum to y)"
                        : " (model is not exact for this pair)")
                << "\n";
      const std::size_t shown = std::min<std::size_t>(5, r.ranking.size());
      for (std::size_t i = 0; i < shown; ++i) {
        std::cout << "  #" << i + 1 << " feature " << r.ranking[i].first
                  << " weight=" << io::format_double(r.ranking[i].second) << "\n";
      }
    } else if (*bench_cmd) {
      std::cout << cli::encode_bench_csv(cli::run_bench(bench));
    } else if (*convert_cmd) {
      run_convert(convert_in, convert_out, convert_real);
    }
  } catch (const Error& e) {
    return report_error(e);
  } catch (const std::exception& e) {
    std::cerr << "convdistill: " << e.what() << "\n";
    return 1;
  }
  return cli::kExitOk;
}
