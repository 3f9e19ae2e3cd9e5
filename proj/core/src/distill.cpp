#include "convdistill/distill.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "convdistill/numeric.hpp"
#include "convdistill/runtime.hpp"

namespace convdistill {

namespace {

constexpr auto kSolveNorm = Normalization::Unnormalized;

double resolve(Regularization lambda, const RealMatrix& power) {
  if (!lambda.is_auto()) return lambda.value();
  double sum = 0.0;
  for (double v : power.values()) sum += v;
  return Regularization::kAutoLambdaFactor * sum / static_cast<double>(power.size());
}

void require_same_shape(const char* op, const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.same_shape(b)) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(op) + ": " + shape_string(a) + " vs " + shape_string(b));
  }
}

}  // namespace

Regularization::Regularization(double lambda) : auto_(false), value_(lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::InvalidArgument, "lambda must be a finite nonnegative number");
  }
}

TrainingSet::TrainingSet(std::vector<TrainingPair> pairs) : pairs_(std::move(pairs)) {
  if (pairs_.empty()) throw Error(ErrorCode::EmptyInput, "training set has no pairs");
  const auto& ref = pairs_.front().x;
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    if (!pairs_[i].x.same_shape(ref) || !pairs_[i].y.same_shape(ref)) {
      throw Error(ErrorCode::DimensionMismatch,
                  "training pair " + std::to_string(i) + " is " + shape_string(pairs_[i].x) +
                      " -> " + shape_string(pairs_[i].y) + ", expected " + shape_string(ref));
    }
  }
}

DistilledModel solve_kernel(const ComplexMatrix& x, const ComplexMatrix& y,
                            Regularization lambda, WorkerPool& pool) {
  require_same_shape("solve_kernel", x, y);
  const auto fx = parallel_dft_2d(x, kSolveNorm, pool);
  const auto fy = parallel_dft_2d(y, kSolveNorm, pool);
  const double resolved = resolve(lambda, abs2(fx));
  const auto spectrum = hadamard_div_regularized(fy, fx, resolved);
  return {parallel_idft_2d(spectrum, kSolveNorm, pool), resolved, kSolveNorm};
}

DistilledModel solve_kernel_batch(const TrainingSet& set, Regularization lambda, WorkerPool& pool) {
  std::vector<ComplexMatrix> signals;
  signals.reserve(2 * set.size());
  for (const auto& pair : set.pairs()) {
    signals.push_back(pair.x);
    signals.push_back(pair.y);
  }
  const auto spectra = parallel_batch_dft(signals, kSolveNorm, pool);

  std::vector<ComplexMatrix> cross;
  std::vector<RealMatrix> power;
  cross.reserve(set.size());
  power.reserve(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto& fx = spectra[2 * i];
    const auto& fy = spectra[2 * i + 1];
    cross.push_back(hadamard(fy, conj(fx)));
    power.push_back(abs2(fx));
  }
  const auto total_cross = reduce_sum(cross);
  const auto total_power = reduce_sum(power);
  const double resolved = resolve(lambda, total_power);
  const auto spectrum = divide_by_power(total_cross, total_power, resolved);
  return {parallel_idft_2d(spectrum, kSolveNorm, pool), resolved, kSolveNorm};
}

ComplexMatrix forward(const DistilledModel& model, const ComplexMatrix& x, WorkerPool& pool) {
  require_same_shape("forward", x, model.kernel);
  const std::vector<ComplexMatrix> inputs{x, model.kernel};
  const auto spectra = parallel_batch_dft(inputs, kSolveNorm, pool);
  return parallel_idft_2d(hadamard(spectra[0], spectra[1]), kSolveNorm, pool);
}

double fit_error(const DistilledModel& model, const TrainingSet& set, WorkerPool& pool) {
  double residual = 0.0;
  double reference = 0.0;
  for (const auto& pair : set.pairs()) {
    const double r = frobenius_norm(forward(model, pair.x, pool) - pair.y);
    const double y = frobenius_norm(pair.y);
    residual += r * r;
    reference += y * y;
  }
  if (reference == 0.0) {
    throw Error(ErrorCode::DivisionNearZero, "fit_error: every reference output is zero");
  }
  return std::sqrt(residual / reference);
}

RealMatrix real_kernel(const DistilledModel& model) {
  const auto& k = model.kernel;
  double max_real = 0.0;
  double max_imag = 0.0;
  for (const auto& v : k.values()) {
    max_real = std::max(max_real, std::abs(v.real()));
    max_imag = std::max(max_imag, std::abs(v.imag()));
  }
  if (max_imag > kRealProjectionTolerance * max_real) {
    throw Error(ErrorCode::NotReal, "kernel has imaginary parts up to " + std::to_string(max_imag) +
                                        " against real parts up to " + std::to_string(max_real));
  }
  RealMatrix out(k.rows(), k.cols());
  for (std::size_t i = 0; i < out.size(); ++i) out.values()[i] = k.values()[i].real();
  return out;
}

}  // namespace convdistill
