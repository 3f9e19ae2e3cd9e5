#include "convdistill/fourier.hpp"

#include <string>

#include "convdistill/numeric.hpp"
#include "fourier_detail.hpp"
#include "kernels.hpp"

namespace convdistill {

FourierMatrix fourier_matrix(std::size_t order, Normalization norm, Direction direction) {
  if (order == 0) throw Error(ErrorCode::InvalidArgument, "Fourier matrix order must be positive");
  const double scale = detail::stage_scale(order, norm, direction);
  const double sign = detail::direction_sign(direction);
  ComplexMatrix w(order, order);
  for (std::size_t m = 0; m < order; ++m) {
    for (std::size_t k = 0; k < order; ++k) {
      w(m, k) = scale * detail::unit_root((m * k) % order, order, sign);
    }
  }
  return {order, norm, direction, std::move(w)};
}

std::vector<Complex> dft_1d_direct(std::span<const Complex> x, Normalization norm) {
  const std::size_t n = x.size();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "dft_1d_direct: empty input");
  const double scale = detail::stage_scale(n, norm, Direction::Forward);
  std::vector<Complex> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc{};
    for (std::size_t m = 0; m < n; ++m) acc += x[m] * detail::unit_root((m * k) % n, n, -1.0);
    out[k] = scale * acc;
  }
  return out;
}

ComplexMatrix dft_2d_direct(const ComplexMatrix& x, Normalization norm) {
  const std::size_t rows = x.rows();
  const std::size_t cols = x.cols();
  std::vector<Complex> row_roots(rows);
  std::vector<Complex> col_roots(cols);
  for (std::size_t i = 0; i < rows; ++i) row_roots[i] = detail::unit_root(i, rows, -1.0);
  for (std::size_t i = 0; i < cols; ++i) col_roots[i] = detail::unit_root(i, cols, -1.0);
  const double scale = detail::stage_scale(rows, norm, Direction::Forward) *
                       detail::stage_scale(cols, norm, Direction::Forward);

  ComplexMatrix out(rows, cols);
  for (std::size_t k = 0; k < rows; ++k) {
    for (std::size_t l = 0; l < cols; ++l) {
      Complex acc{};
      std::size_t row_phase = 0;  // (m * k) mod rows
      for (std::size_t m = 0; m < rows; ++m) {
        Complex inner{};
        std::size_t col_phase = 0;  // (n * l) mod cols
        const auto xrow = x.row(m);
        for (std::size_t n = 0; n < cols; ++n) {
          inner += xrow[n] * col_roots[col_phase];
          col_phase += l;
          if (col_phase >= cols) col_phase -= cols;
        }
        acc += inner * row_roots[row_phase];
        row_phase += k;
        if (row_phase >= rows) row_phase -= rows;
      }
      out(k, l) = scale * acc;
    }
  }
  return out;
}

ComplexMatrix dft_rows(const ComplexMatrix& x, Normalization norm, Direction direction) {
  const auto w = fourier_matrix(x.rows(), norm, direction);
  ComplexMatrix out(x.rows(), x.cols());
  detail::accumulate_product(w.entries, x, {0, x.rows()}, {0, x.cols()}, {0, x.rows()},
                             out.data(), out.cols());
  return out;
}

ComplexMatrix dft_cols(const ComplexMatrix& x, Normalization norm, Direction direction) {
  const auto w = fourier_matrix(x.cols(), norm, direction);
  ComplexMatrix out(x.rows(), x.cols());
  detail::accumulate_product(x, w.entries, {0, x.rows()}, {0, x.cols()}, {0, x.cols()},
                             out.data(), out.cols());
  return out;
}

ComplexMatrix dft_2d_two_stage(const ComplexMatrix& x, Normalization norm) {
  return dft_cols(dft_rows(x, norm), norm);
}

ComplexMatrix idft_2d(const ComplexMatrix& spectrum, Normalization norm) {
  return dft_cols(dft_rows(spectrum, norm, Direction::Inverse), norm, Direction::Inverse);
}

ComplexMatrix circular_convolve_direct(const ComplexMatrix& x, const ComplexMatrix& k) {
  if (!x.same_shape(k)) {
    throw Error(ErrorCode::DimensionMismatch,
                "circular_convolve_direct: " + shape_string(x) + " vs " + shape_string(k));
  }
  const std::size_t rows = x.rows();
  const std::size_t cols = x.cols();
  ComplexMatrix y(rows, cols);
  for (std::size_t a = 0; a < rows; ++a) {
    for (std::size_t b = 0; b < cols; ++b) {
      Complex acc{};
      for (std::size_t m = 0; m < rows; ++m) {
        const std::size_t km = (a + rows - m) % rows;
        for (std::size_t n = 0; n < cols; ++n) {
          acc += x(m, n) * k(km, (b + cols - n) % cols);
        }
      }
      y(a, b) = acc;
    }
  }
  return y;
}

ComplexMatrix circular_convolve_fft(const ComplexMatrix& x, const ComplexMatrix& k) {
  if (!x.same_shape(k)) {
    throw Error(ErrorCode::DimensionMismatch,
                "circular_convolve_fft: " + shape_string(x) + " vs " + shape_string(k));
  }
  const auto norm = Normalization::Unnormalized;
  return idft_2d(hadamard(dft_2d_two_stage(x, norm), dft_2d_two_stage(k, norm)), norm);
}

}  // namespace convdistill
