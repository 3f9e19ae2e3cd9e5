#pragma once

#include <span>
#include <utility>
#include <vector>

#include "convdistill/fourier.hpp"
#include "convdistill/matrix.hpp"
#include "convdistill/worker_pool.hpp"

namespace convdistill {

/// Regularization strength for the kernel solver: a fixed lambda >= 0, or
/// "auto", which resolves to kAutoLambdaFactor times the mean per-bin power of
/// the input spectra.
class Regularization {
 public:
  static constexpr double kAutoLambdaFactor = 1e-6;

  Regularization(double lambda);  // NOLINT(google-explicit-constructor)
  static Regularization automatic() noexcept { return Regularization(); }

  bool is_auto() const noexcept { return auto_; }
  double value() const noexcept { return value_; }

 private:
  Regularization() = default;
  bool auto_ = true;
  double value_ = 0.0;
};

/// One-layer circular-convolution surrogate: predict(x) = x (*) kernel.
struct DistilledModel {
  ComplexMatrix kernel;
  double lambda = 0.0;
  Normalization norm = Normalization::Unnormalized;
};

struct TrainingPair {
  ComplexMatrix x;
  ComplexMatrix y;
};

/// Nonempty set of input/output pairs sharing one shape.
class TrainingSet {
 public:
  explicit TrainingSet(std::vector<TrainingPair> pairs);

  std::span<const TrainingPair> pairs() const noexcept { return pairs_; }
  std::size_t size() const noexcept { return pairs_.size(); }
  std::size_t rows() const noexcept { return pairs_.front().x.rows(); }
  std::size_t cols() const noexcept { return pairs_.front().x.cols(); }

 private:
  std::vector<TrainingPair> pairs_;
};

/// K = F^-1( F(y) conj(F(x)) / (|F(x)|^2 + lambda) ). With lambda == 0 this is
/// the exact quotient F(y) / F(x) and fails with DivisionNearZero on a
/// vanishing spectral bin.
DistilledModel solve_kernel(const ComplexMatrix& x, const ComplexMatrix& y,
                            Regularization lambda, WorkerPool& pool);

/// Closed-form minimizer of sum_i |x_i (*) K - y_i|^2 + lambda |K|^2, solved
/// independently per frequency bin. A singleton set gives exactly the
/// solve_kernel result.
DistilledModel solve_kernel_batch(const TrainingSet& set, Regularization lambda, WorkerPool& pool);

ComplexMatrix forward(const DistilledModel& model, const ComplexMatrix& x, WorkerPool& pool);

/// sqrt( sum_i |forward(x_i) - y_i|_F^2 / sum_i |y_i|_F^2 )
double fit_error(const DistilledModel& model, const TrainingSet& set, WorkerPool& pool);

inline constexpr double kRealProjectionTolerance = 1e-8;

/// Real part of the kernel. Throws NotReal if any imaginary part exceeds
/// kRealProjectionTolerance * max|real part|.
RealMatrix real_kernel(const DistilledModel& model);

}  // namespace convdistill
