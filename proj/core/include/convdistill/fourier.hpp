#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "convdistill/matrix.hpp"

namespace convdistill {

/// Scaling convention of a transform.
///
/// Unitary applies 1/sqrt(M) per 1-D stage, so 1/sqrt(MN) for a 2-D transform.
/// Unnormalized applies no factor on the forward transform and 1/M per stage on
/// the inverse; the convolution theorem is exact only in this convention, so
/// every solver and convolution path uses it.
enum class Normalization { Unnormalized, Unitary };

enum class Direction { Forward, Inverse };

struct FourierMatrix {
  std::size_t order;
  Normalization norm;
  Direction direction;
  ComplexMatrix entries;
};

/// entry[m,k] = scale * exp(-+j 2 pi m k / M). The sign is negative for the
/// forward transform. Quarter-turn phases are produced exactly.
FourierMatrix fourier_matrix(std::size_t order, Normalization norm,
                             Direction direction = Direction::Forward);

// Definitional O(M^2) and O(M^2 N^2) sums. Kept deliberately naive: these are
// the reference the fast paths are tested against.
std::vector<Complex> dft_1d_direct(std::span<const Complex> x, Normalization norm);
ComplexMatrix dft_2d_direct(const ComplexMatrix& x, Normalization norm);

/// W_M * x: transforms along the row index, each column independently.
ComplexMatrix dft_rows(const ComplexMatrix& x, Normalization norm,
                       Direction direction = Direction::Forward);

/// x * W_N: transforms along the column index, each row independently.
ComplexMatrix dft_cols(const ComplexMatrix& x, Normalization norm,
                       Direction direction = Direction::Forward);

/// (W_M * x) * W_N
ComplexMatrix dft_2d_two_stage(const ComplexMatrix& x, Normalization norm);

/// Inverse of dft_2d_two_stage under the same normalization.
ComplexMatrix idft_2d(const ComplexMatrix& spectrum, Normalization norm);

/// y[a,b] = sum_{m,n} x[m,n] * k[(a-m) mod M, (b-n) mod N]
ComplexMatrix circular_convolve_direct(const ComplexMatrix& x, const ComplexMatrix& k);

/// Same result through the convolution theorem with unnormalized transforms.
ComplexMatrix circular_convolve_fft(const ComplexMatrix& x, const ComplexMatrix& k);

}  // namespace convdistill
