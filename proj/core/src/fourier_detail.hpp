#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>

#include "convdistill/fourier.hpp"

namespace convdistill::detail {

// exp(sign * j 2 pi residue / order) for residue in [0, order).
inline Complex unit_root(std::size_t residue, std::size_t order, double sign) {
  if ((4 * residue) % order == 0) {
    switch ((4 * residue) / order) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, sign};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -sign};
    }
  }
  const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>(residue) /
                       static_cast<double>(order);
  return {std::cos(angle), std::sin(angle)};
}

inline double stage_scale(std::size_t order, Normalization norm, Direction direction) {
  if (norm == Normalization::Unitary) return 1.0 / std::sqrt(static_cast<double>(order));
  return direction == Direction::Forward ? 1.0 : 1.0 / static_cast<double>(order);
}

inline double direction_sign(Direction direction) {
  return direction == Direction::Forward ? -1.0 : 1.0;
}

}  // namespace convdistill::detail
