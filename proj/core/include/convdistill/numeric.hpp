#pragma once

#include <cstddef>

#include "convdistill/matrix.hpp"
#include "convdistill/worker_pool.hpp"

namespace convdistill {

/// Tile shape for block matrix multiplication. The same tiling is applied to
/// every operand: rows are cut every `block_rows`, columns (and therefore the
/// shared inner dimension) every `block_cols`. Edge tiles may be smaller.
struct BlockPartition {
  std::size_t block_rows = 64;
  std::size_t block_cols = 64;
};

// Relative distance below which a denominator counts as zero when no
// regularization is applied: |den| < kNearZeroRelative * max|den|.
inline constexpr double kNearZeroRelative = 1e-12;

ComplexMatrix matmul_naive(const ComplexMatrix& a, const ComplexMatrix& b);

/// Block product computed one output tile per task on the pool. Partial tile
/// products are accumulated in ascending inner-block order, so the result does
/// not depend on scheduling.
ComplexMatrix block_matmul(const ComplexMatrix& a, const ComplexMatrix& b,
                           const BlockPartition& partition, WorkerPool& pool);

ComplexMatrix hadamard(const ComplexMatrix& a, const ComplexMatrix& b);

/// num * conj(den) / (|den|^2 + lambda), elementwise.
///
/// With lambda == 0 this is plain elementwise division; it throws
/// DivisionNearZero if any |den| falls below kNearZeroRelative * max|den|.
ComplexMatrix hadamard_div_regularized(const ComplexMatrix& num, const ComplexMatrix& den,
                                       double lambda);

/// cross / (power + lambda), elementwise. This is the quotient step shared by
/// hadamard_div_regularized (cross = num*conj(den), power = |den|^2) and the
/// aggregated multi-pair solver. The near-zero test is applied to sqrt(power).
ComplexMatrix divide_by_power(const ComplexMatrix& cross, const RealMatrix& power, double lambda);

ComplexMatrix conj(const ComplexMatrix& m);
RealMatrix abs2(const ComplexMatrix& m);

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, const ComplexMatrix& m);

double frobenius_norm(const ComplexMatrix& m);
double max_abs(const ComplexMatrix& m);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// max|actual - expected| / max|expected|; falls back to the absolute
/// difference when `expected` is identically zero.
double max_relative_error(const ComplexMatrix& actual, const ComplexMatrix& expected);

}  // namespace convdistill
