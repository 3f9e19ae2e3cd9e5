#include "convdistill/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "kernels.hpp"

namespace convdistill {

namespace {

void require_same_shape(const char* op, const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.same_shape(b)) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(op) + ": " + shape_string(a) + " vs " + shape_string(b));
  }
}

void require_conformable(const char* op, const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(op) + ": cannot multiply " + shape_string(a) + " by " + shape_string(b));
  }
}

template <typename F>
ComplexMatrix zip(const ComplexMatrix& a, const ComplexMatrix& b, F f) {
  ComplexMatrix out(a.rows(), a.cols());
  auto av = a.values();
  auto bv = b.values();
  auto ov = out.values();
  for (std::size_t i = 0; i < ov.size(); ++i) ov[i] = f(av[i], bv[i]);
  return out;
}

}  // namespace

ComplexMatrix matmul_naive(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_conformable("matmul_naive", a, b);
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      Complex acc{};
      for (std::size_t t = 0; t < a.cols(); ++t) acc += a(i, t) * b(t, j);
      out(i, j) = acc;
    }
  }
  return out;
}

ComplexMatrix block_matmul(const ComplexMatrix& a, const ComplexMatrix& b,
                           const BlockPartition& partition, WorkerPool& pool) {
  require_conformable("block_matmul", a, b);
  if (partition.block_rows == 0 || partition.block_cols == 0) {
    throw Error(ErrorCode::InvalidArgument, "block dimensions must be at least 1");
  }
  const std::size_t br = partition.block_rows;
  const std::size_t bc = partition.block_cols;
  const std::size_t row_blocks = (a.rows() + br - 1) / br;
  const std::size_t col_blocks = (b.cols() + bc - 1) / bc;
  const std::size_t inner_blocks = (a.cols() + bc - 1) / bc;
  const std::size_t tiles = row_blocks * col_blocks;

  ComplexMatrix out(a.rows(), b.cols());
  const std::size_t workers = pool.size();
  pool.run([&](std::size_t worker) {
    for (std::size_t tile = worker; tile < tiles; tile += workers) {
      const std::size_t ib = tile / col_blocks;
      const std::size_t jb = tile % col_blocks;
      const detail::Range rows{ib * br, std::min((ib + 1) * br, a.rows())};
      const detail::Range cols{jb * bc, std::min((jb + 1) * bc, b.cols())};
      Complex* dst = out.data() + rows.begin * out.cols() + cols.begin;
      for (std::size_t kb = 0; kb < inner_blocks; ++kb) {
        const detail::Range inner{kb * bc, std::min((kb + 1) * bc, a.cols())};
        detail::accumulate_product(a, b, rows, cols, inner, dst, out.cols());
      }
    }
  });
  return out;
}

ComplexMatrix hadamard(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape("hadamard", a, b);
  return zip(a, b, [](Complex x, Complex y) { return x * y; });
}

ComplexMatrix divide_by_power(const ComplexMatrix& cross, const RealMatrix& power, double lambda) {
  if (cross.rows() != power.rows() || cross.cols() != power.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                "divide_by_power: " + shape_string(cross) + " vs " + shape_string(power));
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::InvalidArgument, "lambda must be a finite nonnegative number");
  }
  auto pv = power.values();
  if (lambda == 0.0) {
    const double max_power = *std::max_element(pv.begin(), pv.end());
    const double floor = kNearZeroRelative * kNearZeroRelative * max_power;
    for (std::size_t i = 0; i < pv.size(); ++i) {
      if (max_power == 0.0 || pv[i] < floor) {
        throw Error(ErrorCode::DivisionNearZero,
                    "denominator near zero at (" + std::to_string(i / power.cols()) + ", " +
                        std::to_string(i % power.cols()) +
                        "); the unregularized quotient is ill-posed, use lambda > 0");
      }
    }
  }
  ComplexMatrix out(cross.rows(), cross.cols());
  auto cv = cross.values();
  auto ov = out.values();
  for (std::size_t i = 0; i < ov.size(); ++i) ov[i] = cv[i] / (pv[i] + lambda);
  return out;
}

ComplexMatrix hadamard_div_regularized(const ComplexMatrix& num, const ComplexMatrix& den,
                                       double lambda) {
  require_same_shape("hadamard_div_regularized", num, den);
  return divide_by_power(hadamard(num, conj(den)), abs2(den), lambda);
}

ComplexMatrix conj(const ComplexMatrix& m) {
  ComplexMatrix out(m.rows(), m.cols());
  auto mv = m.values();
  auto ov = out.values();
  for (std::size_t i = 0; i < ov.size(); ++i) ov[i] = std::conj(mv[i]);
  return out;
}

RealMatrix abs2(const ComplexMatrix& m) {
  RealMatrix out(m.rows(), m.cols());
  auto mv = m.values();
  auto ov = out.values();
  for (std::size_t i = 0; i < ov.size(); ++i) ov[i] = std::norm(mv[i]);
  return out;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape("add", a, b);
  return zip(a, b, [](Complex x, Complex y) { return x + y; });
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape("subtract", a, b);
  return zip(a, b, [](Complex x, Complex y) { return x - y; });
}

ComplexMatrix operator*(Complex s, const ComplexMatrix& m) {
  ComplexMatrix out(m.rows(), m.cols());
  auto mv = m.values();
  auto ov = out.values();
  for (std::size_t i = 0; i < ov.size(); ++i) ov[i] = s * mv[i];
  return out;
}

double frobenius_norm(const ComplexMatrix& m) {
  double sum = 0.0;
  for (const auto& v : m.values()) sum += std::norm(v);
  return std::sqrt(sum);
}

double max_abs(const ComplexMatrix& m) {
  double best = 0.0;
  for (const auto& v : m.values()) best = std::max(best, std::abs(v));
  return best;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape("max_abs_diff", a, b);
  double best = 0.0;
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) best = std::max(best, std::abs(av[i] - bv[i]));
  return best;
}

double max_relative_error(const ComplexMatrix& actual, const ComplexMatrix& expected) {
  const double diff = max_abs_diff(actual, expected);
  const double scale = max_abs(expected);
  return scale > 0.0 ? diff / scale : diff;
}

}  // namespace convdistill
