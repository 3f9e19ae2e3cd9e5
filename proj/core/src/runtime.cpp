#include "convdistill/runtime.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "kernels.hpp"

namespace convdistill {

void DistributionTable::append(const DistributionTable& other) {
  shards.insert(shards.end(), other.shards.begin(), other.shards.end());
}

std::size_t DistributionTable::max_count() const noexcept {
  std::size_t best = 0;
  for (const auto& s : shards) best = std::max(best, s.count);
  return best;
}

bool DistributionTable::covers_exactly(std::size_t source_id, Axis axis, std::size_t extent) const {
  std::vector<int> hits(extent, 0);
  for (const auto& s : shards) {
    if (s.source_id != source_id || s.axis != axis) continue;
    if (s.start + s.count > extent) return false;
    for (std::size_t i = s.start; i < s.start + s.count; ++i) ++hits[i];
  }
  return std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; });
}

DistributionTable plan_split(std::size_t extent, std::size_t workers, Axis axis,
                             std::size_t source_id) {
  if (extent == 0) throw Error(ErrorCode::InvalidArgument, "plan_split: extent must be positive");
  if (workers == 0) throw Error(ErrorCode::InvalidArgument, "plan_split: need at least one worker");
  const std::size_t base = extent / workers;
  const std::size_t larger = extent % workers;
  DistributionTable table;
  table.shards.reserve(workers);
  std::size_t start = 0;
  for (std::size_t i = 0; i < workers; ++i) {
    const std::size_t count = base + (i < larger ? 1 : 0);
    table.shards.push_back({source_id, axis, start, count, (i + source_id) % workers});
    start += count;
  }
  return table;
}

namespace {

class FourierCache {
 public:
  FourierCache(Normalization norm, Direction direction) : norm_(norm), direction_(direction) {}

  void prepare(std::size_t order) {
    if (!cache_.contains(order)) cache_.emplace(order, fourier_matrix(order, norm_, direction_));
  }
  const ComplexMatrix& at(std::size_t order) const { return cache_.at(order).entries; }

 private:
  Normalization norm_;
  Direction direction_;
  std::map<std::size_t, FourierMatrix> cache_;
};

// Runs every non-empty shard on its worker, producing one slice per shard.
// `compute` must be safe to call concurrently for distinct shards.
template <typename Compute>
std::vector<std::optional<ComplexMatrix>> execute(const DistributionTable& table, WorkerPool& pool,
                                                  Compute compute) {
  std::vector<std::optional<ComplexMatrix>> slices(table.shards.size());
  pool.run([&](std::size_t worker) {
    for (std::size_t i = 0; i < table.shards.size(); ++i) {
      const Shard& s = table.shards[i];
      if (s.worker == worker && s.count > 0) slices[i] = compute(s);
    }
  });
  return slices;
}

void merge(const DistributionTable& table, std::vector<std::optional<ComplexMatrix>>& slices,
           std::vector<ComplexMatrix>& targets) {
  for (std::size_t i = 0; i < table.shards.size(); ++i) {
    const Shard& s = table.shards[i];
    if (!slices[i]) continue;
    const ComplexMatrix& slice = *slices[i];
    ComplexMatrix& dst = targets[s.source_id];
    if (s.axis == Axis::Rows) {
      for (std::size_t r = 0; r < s.count; ++r) {
        std::copy(slice.row(r).begin(), slice.row(r).end(), dst.row(s.start + r).begin());
      }
    } else {
      for (std::size_t r = 0; r < dst.rows(); ++r) {
        std::copy(slice.row(r).begin(), slice.row(r).end(), dst.row(r).begin() + s.start);
      }
    }
    slices[i].reset();
  }
}

}  // namespace

std::vector<ComplexMatrix> parallel_batch_dft(std::span<const ComplexMatrix> inputs,
                                              Normalization norm, WorkerPool& pool,
                                              Direction direction) {
  std::vector<ComplexMatrix> out;
  if (inputs.empty()) return out;

  const std::size_t p = pool.size();
  FourierCache fourier(norm, direction);
  DistributionTable column_phase;
  DistributionTable row_phase;
  std::vector<ComplexMatrix> intermediate;
  intermediate.reserve(inputs.size());
  out.reserve(inputs.size());
  for (std::size_t s = 0; s < inputs.size(); ++s) {
    const auto& x = inputs[s];
    fourier.prepare(x.rows());
    fourier.prepare(x.cols());
    column_phase.append(plan_split(x.cols(), p, Axis::Columns, s));
    row_phase.append(plan_split(x.rows(), p, Axis::Rows, s));
    intermediate.emplace_back(x.rows(), x.cols());
    out.emplace_back(x.rows(), x.cols());
  }

  // Phase one: W_M * x on column slices.
  auto slices = execute(column_phase, pool, [&](const Shard& s) {
    const auto& x = inputs[s.source_id];
    ComplexMatrix slice(x.rows(), s.count);
    detail::accumulate_product(fourier.at(x.rows()), x, {0, x.rows()},
                               {s.start, s.start + s.count}, {0, x.rows()}, slice.data(),
                               slice.cols());
    return slice;
  });
  merge(column_phase, slices, intermediate);

  // Phase two: X' * W_N on row slices.
  slices = execute(row_phase, pool, [&](const Shard& s) {
    const auto& xp = intermediate[s.source_id];
    ComplexMatrix slice(s.count, xp.cols());
    detail::accumulate_product(xp, fourier.at(xp.cols()), {s.start, s.start + s.count},
                               {0, xp.cols()}, {0, xp.cols()}, slice.data(), slice.cols());
    return slice;
  });
  merge(row_phase, slices, out);
  return out;
}

ComplexMatrix parallel_dft_2d(const ComplexMatrix& x, Normalization norm, WorkerPool& pool,
                              Direction direction) {
  auto result = parallel_batch_dft(std::span<const ComplexMatrix>(&x, 1), norm, pool, direction);
  return std::move(result.front());
}

}  // namespace convdistill
