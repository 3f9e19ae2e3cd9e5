#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "convdistill/fourier.hpp"
#include "convdistill/matrix.hpp"
#include "convdistill/worker_pool.hpp"

namespace convdistill {

/// Which index a shard slices: a Rows shard owns a contiguous range of rows,
/// a Columns shard a contiguous range of columns.
enum class Axis { Rows, Columns };

struct Shard {
  std::size_t source_id;
  Axis axis;
  std::size_t start;
  std::size_t count;  // may be 0 when there are more workers than lines
  std::size_t worker;

  friend bool operator==(const Shard&, const Shard&) = default;
};

/// Bookkeeping for one decomposition step: which worker owns which slice of
/// which source. Reassembly walks `shards` in order.
struct DistributionTable {
  std::vector<Shard> shards;

  void append(const DistributionTable& other);
  std::size_t max_count() const noexcept;
  /// True iff the (source_id, axis) shards are pairwise disjoint and cover [0, extent).
  bool covers_exactly(std::size_t source_id, Axis axis, std::size_t extent) const;
};

/// Cuts [0, extent) into `workers` contiguous shards. The first extent % workers
/// shards get ceil(extent/workers) items, the rest floor(extent/workers).
/// Shard i goes to worker (i + source_id) % workers so that small sources in a
/// batch do not all land on worker 0.
DistributionTable plan_split(std::size_t extent, std::size_t workers, Axis axis,
                             std::size_t source_id = 0);

/// Two-phase row-column 2-D DFT on the pool.
///
/// Phase one computes W_M * x: the columns of x are split across workers and
/// each worker runs complete 1-D transforms on its columns. After a barrier
/// and an in-order merge, phase two computes X' * W_N with the rows of X'
/// split across workers. Each output element is accumulated in the same order
/// for every worker count, so results are bit-identical to dft_2d_two_stage.
ComplexMatrix parallel_dft_2d(const ComplexMatrix& x, Normalization norm, WorkerPool& pool,
                              Direction direction = Direction::Forward);

inline ComplexMatrix parallel_idft_2d(const ComplexMatrix& spectrum, Normalization norm,
                                      WorkerPool& pool) {
  return parallel_dft_2d(spectrum, norm, pool, Direction::Inverse);
}

/// Transforms several inputs at once. Shards from all inputs share each phase,
/// so workers interleave slices of different sources; the distribution table
/// routes every slice back to its source.
std::vector<ComplexMatrix> parallel_batch_dft(std::span<const ComplexMatrix> inputs,
                                              Normalization norm, WorkerPool& pool,
                                              Direction direction = Direction::Forward);

/// Elementwise sum accumulated in sequence order.
template <typename T>
Matrix<T> reduce_sum(std::span<const Matrix<T>> partials) {
  if (partials.empty()) throw Error(ErrorCode::EmptyInput, "reduce_sum: no partial matrices");
  Matrix<T> total = partials.front();
  for (std::size_t i = 1; i < partials.size(); ++i) {
    const auto& p = partials[i];
    if (!p.same_shape(total)) {
      throw Error(ErrorCode::DimensionMismatch,
                  "reduce_sum: partial " + std::to_string(i) + " is " + shape_string(p) +
                      ", expected " + shape_string(total));
    }
    auto tv = total.values();
    auto pv = p.values();
    for (std::size_t j = 0; j < tv.size(); ++j) tv[j] += pv[j];
  }
  return total;
}

template <typename T>
Matrix<T> reduce_sum(const std::vector<Matrix<T>>& partials) {
  return reduce_sum(std::span<const Matrix<T>>(partials));
}

}  // namespace convdistill
