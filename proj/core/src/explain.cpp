#include "convdistill/explain.hpp"

#include <algorithm>
#include <string>

#include "convdistill/numeric.hpp"
#include "convdistill/runtime.hpp"

namespace convdistill {

namespace {

constexpr auto kNorm = Normalization::Unnormalized;

void require_extent(const FeatureSegmentation& seg, std::size_t rows, std::size_t cols) {
  if (seg.extent_rows() != rows || seg.extent_cols() != cols) {
    throw Error(ErrorCode::SegmentationMismatch,
                "segmentation covers " + shape_string(seg.extent_rows(), seg.extent_cols()) +
                    " but the input is " + shape_string(rows, cols));
  }
}

void require_same_shape(const char* what, const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.same_shape(b)) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + ": " + shape_string(a) + " vs " + shape_string(b));
  }
}

}  // namespace

FeatureSegmentation::FeatureSegmentation(std::size_t rows, std::size_t cols, SegmentationKind kind)
    : rows_(rows), cols_(cols), kind_(std::move(kind)), labels_(rows * cols) {
  if (rows == 0 || cols == 0) {
    throw Error(ErrorCode::InvalidArgument, "segmentation extent must be positive");
  }
}

FeatureSegmentation FeatureSegmentation::block_grid(std::size_t rows, std::size_t cols,
                                                    std::size_t block_rows,
                                                    std::size_t block_cols) {
  if (block_rows == 0 || block_cols == 0) {
    throw Error(ErrorCode::InvalidArgument, "block dimensions must be at least 1");
  }
  FeatureSegmentation seg(rows, cols, BlockGrid{block_rows, block_cols});
  const std::size_t grid_cols = (cols + block_cols - 1) / block_cols;
  const std::size_t grid_rows = (rows + block_rows - 1) / block_rows;
  seg.members_.resize(grid_rows * grid_cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const FeatureId id = (r / block_rows) * grid_cols + c / block_cols;
      seg.labels_[r * cols + c] = id;
      seg.members_[id].push_back(r * cols + c);
    }
  }
  return seg;
}

FeatureSegmentation FeatureSegmentation::columns(std::size_t rows, std::size_t cols) {
  FeatureSegmentation seg(rows, cols, ColumnFeatures{});
  seg.members_.resize(cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      seg.labels_[r * cols + c] = c;
      seg.members_[c].push_back(r * cols + c);
    }
  }
  return seg;
}

FeatureSegmentation FeatureSegmentation::rows(std::size_t rows, std::size_t cols) {
  FeatureSegmentation seg(rows, cols, RowFeatures{});
  seg.members_.resize(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      seg.labels_[r * cols + c] = r;
      seg.members_[r].push_back(r * cols + c);
    }
  }
  return seg;
}

FeatureSegmentation FeatureSegmentation::custom(std::size_t rows, std::size_t cols,
                                                std::vector<std::vector<Position>> features) {
  FeatureSegmentation seg(rows, cols, CustomFeatures{features});
  std::vector<bool> seen(rows * cols, false);
  seg.members_.resize(features.size());
  for (FeatureId id = 0; id < features.size(); ++id) {
    if (features[id].empty()) {
      throw Error(ErrorCode::InvalidArgument, "feature " + std::to_string(id) + " is empty");
    }
    for (const auto& p : features[id]) {
      if (p.row >= rows || p.col >= cols) {
        throw Error(ErrorCode::InvalidArgument,
                    "feature " + std::to_string(id) + " has position (" + std::to_string(p.row) +
                        ", " + std::to_string(p.col) + ") outside " + shape_string(rows, cols));
      }
      const std::size_t flat = p.row * cols + p.col;
      if (seen[flat]) {
        throw Error(ErrorCode::InvalidArgument,
                    "position (" + std::to_string(p.row) + ", " + std::to_string(p.col) +
                        ") belongs to more than one feature");
      }
      seen[flat] = true;
      seg.labels_[flat] = id;
      seg.members_[id].push_back(flat);
    }
    std::sort(seg.members_[id].begin(), seg.members_[id].end());
  }
  const auto missing = std::find(seen.begin(), seen.end(), false);
  if (missing != seen.end()) {
    const auto flat = static_cast<std::size_t>(missing - seen.begin());
    throw Error(ErrorCode::InvalidArgument, "position (" + std::to_string(flat / cols) + ", " +
                                                std::to_string(flat % cols) +
                                                ") is not covered by any feature");
  }
  return seg;
}

const std::vector<std::size_t>& FeatureSegmentation::members(FeatureId id) const {
  if (id >= members_.size()) {
    throw Error(ErrorCode::UnknownFeature, "feature " + std::to_string(id) + " not in 0.." +
                                               std::to_string(members_.size() - 1));
  }
  return members_[id];
}

std::optional<GridShape> FeatureSegmentation::grid_shape() const {
  if (const auto* grid = std::get_if<BlockGrid>(&kind_)) {
    return GridShape{(rows_ + grid->block_rows - 1) / grid->block_rows,
                     (cols_ + grid->block_cols - 1) / grid->block_cols};
  }
  if (std::holds_alternative<ColumnFeatures>(kind_)) return GridShape{1, cols_};
  if (std::holds_alternative<RowFeatures>(kind_)) return GridShape{rows_, 1};
  return std::nullopt;
}

FeatureMask mask_feature(const ComplexMatrix& x, const FeatureSegmentation& seg, FeatureId id) {
  require_extent(seg, x.rows(), x.cols());
  FeatureMask mask{id, x};
  auto values = mask.occluded.values();
  for (std::size_t flat : seg.members(id)) values[flat] = Complex{};
  return mask;
}

ComplexMatrix contribution(const ComplexMatrix& x, const ComplexMatrix& y,
                           const DistilledModel& model, const FeatureSegmentation& seg,
                           FeatureId id, WorkerPool& pool) {
  require_same_shape("contribution", x, y);
  return y - forward(model, mask_feature(x, seg, id).occluded, pool);
}

ContributionMap contribution_map(const ComplexMatrix& x, const ComplexMatrix& y,
                                 const DistilledModel& model, const FeatureSegmentation& seg,
                                 WorkerPool& pool) {
  require_same_shape("contribution_map", x, y);
  require_same_shape("contribution_map kernel", x, model.kernel);
  require_extent(seg, x.rows(), x.cols());

  const auto kernel_spectrum = parallel_dft_2d(model.kernel, kNorm, pool);
  ContributionMap map{x.rows(), x.cols(), seg, {}};
  map.features.reserve(seg.feature_count());

  // Bounded batches keep the transient spectra small for fine segmentations.
  const std::size_t batch = std::max<std::size_t>(4, 2 * pool.size());
  for (FeatureId first = 0; first < seg.feature_count(); first += batch) {
    const FeatureId last = std::min(first + batch, seg.feature_count());
    std::vector<ComplexMatrix> occluded;
    occluded.reserve(last - first);
    for (FeatureId id = first; id < last; ++id) {
      occluded.push_back(mask_feature(x, seg, id).occluded);
    }
    auto spectra = parallel_batch_dft(occluded, kNorm, pool);
    for (auto& s : spectra) s = hadamard(s, kernel_spectrum);
    const auto predictions = parallel_batch_dft(spectra, kNorm, pool, Direction::Inverse);
    for (FeatureId id = first; id < last; ++id) {
      auto con = y - predictions[id - first];
      const double weight = frobenius_norm(con);
      map.features.push_back({id, std::move(con), weight});
    }
  }
  return map;
}

std::vector<std::pair<FeatureId, double>> rank_features(const ContributionMap& map) {
  std::vector<std::pair<FeatureId, double>> ranked;
  ranked.reserve(map.features.size());
  for (const auto& f : map.features) ranked.emplace_back(f.feature_id, f.weight);
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return ranked;
}

RealMatrix heatmap(const ContributionMap& map) {
  const auto shape = map.segmentation.grid_shape();
  if (!shape) {
    throw Error(ErrorCode::UnsupportedSegmentation,
                "heatmaps need a block, column or row segmentation");
  }
  RealMatrix grid(shape->rows, shape->cols);
  double max_weight = 0.0;
  for (const auto& f : map.features) max_weight = std::max(max_weight, f.weight);
  for (const auto& f : map.features) {
    grid.values()[f.feature_id] = max_weight > 0.0 ? f.weight / max_weight : 0.0;
  }
  return grid;
}

}  // namespace convdistill
