#pragma once

#include <algorithm>
#include <cstddef>

#include "convdistill/matrix.hpp"

namespace convdistill::detail {

struct Range {
  std::size_t begin;
  std::size_t end;
  std::size_t size() const noexcept { return end - begin; }
  bool empty() const noexcept { return end <= begin; }
};

// out[(i - rows.begin) * out_stride + (j - cols.begin)] += sum_{t in inner} a(i,t) * b(t,j)
//
// Every output element accumulates its terms in ascending t, whatever the
// tiling, so any partition of (rows, cols) gives bit-identical values.
inline void accumulate_product(const ComplexMatrix& a, const ComplexMatrix& b, Range rows,
                               Range cols, Range inner, Complex* out, std::size_t out_stride) {
  constexpr std::size_t kRowTile = 8;
  constexpr std::size_t kColTile = 256;
  const std::size_t a_stride = a.cols();
  const std::size_t b_stride = b.cols();
  const Complex* a_data = a.data();
  const Complex* b_data = b.data();

  for (std::size_t j0 = cols.begin; j0 < cols.end; j0 += kColTile) {
    const std::size_t j1 = std::min(j0 + kColTile, cols.end);
    for (std::size_t i0 = rows.begin; i0 < rows.end; i0 += kRowTile) {
      const std::size_t i1 = std::min(i0 + kRowTile, rows.end);
      for (std::size_t t = inner.begin; t < inner.end; ++t) {
        const Complex* b_row = b_data + t * b_stride;
        for (std::size_t i = i0; i < i1; ++i) {
          const double ar = a_data[i * a_stride + t].real();
          const double ai = a_data[i * a_stride + t].imag();
          Complex* o = out + (i - rows.begin) * out_stride;
          for (std::size_t j = j0; j < j1; ++j) {
            const double br = b_row[j].real();
            const double bi = b_row[j].imag();
            Complex& dst = o[j - cols.begin];
            dst = Complex(dst.real() + (ar * br - ai * bi), dst.imag() + (ar * bi + ai * br));
          }
        }
      }
    }
  }
}

}  // namespace convdistill::detail
