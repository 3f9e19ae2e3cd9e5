#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "convdistill/distill.hpp"
#include "convdistill/errors.hpp"
#include "convdistill/explain.hpp"
#include "convdistill/fourier.hpp"

namespace convdistill::cli {

// Stable process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;
inline constexpr int kExitFormat = 3;
inline constexpr int kExitIllConditioned = 4;

int exit_code_for(ErrorCode code) noexcept;

/// Worker count used when --cores is absent: $CONVDISTILL_CORES if set,
/// otherwise the hardware concurrency.
std::size_t default_cores();

struct FftOptions {
  std::string input;
  std::string output;
  Normalization norm = Normalization::Unnormalized;
  std::size_t cores = 1;
  bool inverse = false;
};

void run_fft(const FftOptions& options);

struct DistillOptions {
  std::vector<std::string> x;
  std::vector<std::string> y;
  Regularization lambda = Regularization(0.0);
  std::size_t cores = 1;
  std::string out;
};

struct DistillReport {
  std::size_t rows;
  std::size_t cols;
  std::size_t pairs;
  double lambda;
  double fit_error;
  std::string sidecar_path;
};

/// Writes the kernel to `out` (CDM) and a key=value sidecar to `out` + ".txt".
DistillReport run_distill(const DistillOptions& options);

Regularization parse_lambda(const std::string& text);

/// "block:R,C", "cols" or "rows".
FeatureSegmentation parse_segmentation(const std::string& spec, std::size_t rows, std::size_t cols);

struct ExplainOptions {
  std::string x;
  std::string y;
  std::string model;
  std::string segmentation = "cols";
  std::size_t cores = 1;
  std::string out_prefix;
};

struct ExplainReport {
  std::size_t features;
  double completeness_residual;  // |sum of contributions - y| / |y|
  std::string weights_path;
  std::string heatmap_path;
  std::vector<std::pair<FeatureId, double>> ranking;
};

inline constexpr double kCompletenessTolerance = 1e-9;

/// Writes `<prefix>.weights.csv` (feature_id,weight,rank) and
/// `<prefix>.heatmap.pgm`.
ExplainReport run_explain(const ExplainOptions& options);

std::string encode_weights_csv(const ContributionMap& map);

struct BenchOptions {
  std::vector<std::size_t> sizes;
  std::vector<std::size_t> cores;
  std::string out;
  std::uint64_t seed = 42;
  std::size_t repeats = 1;
};

// Largest size for which the O(M^2 N^2) definitional transform is run.
inline constexpr std::size_t kDirectCutoff = 256;

struct BenchRow {
  std::size_t size;
  std::string method;  // direct, two-stage-serial, parallel-p<N>
  std::size_t workers;
  std::optional<double> wall_ms;
  std::optional<double> max_rel_error;  // against direct
};

std::vector<BenchRow> run_bench(const BenchOptions& options);
std::string encode_bench_csv(const std::vector<BenchRow>& rows);

}  // namespace convdistill::cli
