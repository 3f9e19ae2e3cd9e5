#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "convdistill/distill.hpp"
#include "convdistill/matrix.hpp"
#include "convdistill/worker_pool.hpp"

namespace convdistill {

using FeatureId = std::size_t;

struct Position {
  std::size_t row;
  std::size_t col;
  friend bool operator==(const Position&, const Position&) = default;
};

/// Rectangular tiles of block_rows x block_cols; tiles on the bottom and right
/// edges may be smaller. Feature ids run row-major over the tile grid.
struct BlockGrid {
  std::size_t block_rows;
  std::size_t block_cols;
};
struct ColumnFeatures {};  // feature id == column index
struct RowFeatures {};     // feature id == row index
struct CustomFeatures {
  std::vector<std::vector<Position>> features;
};

using SegmentationKind = std::variant<BlockGrid, ColumnFeatures, RowFeatures, CustomFeatures>;

struct GridShape {
  std::size_t rows;
  std::size_t cols;
};

/// A partition of every position of an M x N input into features.
class FeatureSegmentation {
 public:
  static FeatureSegmentation block_grid(std::size_t rows, std::size_t cols, std::size_t block_rows,
                                        std::size_t block_cols);
  static FeatureSegmentation columns(std::size_t rows, std::size_t cols);
  static FeatureSegmentation rows(std::size_t rows, std::size_t cols);
  /// Throws InvalidArgument unless the index sets are nonempty, pairwise
  /// disjoint and together cover the whole extent.
  static FeatureSegmentation custom(std::size_t rows, std::size_t cols,
                                    std::vector<std::vector<Position>> features);

  const SegmentationKind& kind() const noexcept { return kind_; }
  std::size_t extent_rows() const noexcept { return rows_; }
  std::size_t extent_cols() const noexcept { return cols_; }
  std::size_t feature_count() const noexcept { return members_.size(); }

  FeatureId feature_at(std::size_t row, std::size_t col) const noexcept {
    return labels_[row * cols_ + col];
  }
  /// Row-major flat indices of the feature's positions, ascending.
  const std::vector<std::size_t>& members(FeatureId id) const;

  /// Layout of features as a grid (block tiles, 1 x N columns, M x 1 rows);
  /// empty for custom segmentations.
  std::optional<GridShape> grid_shape() const;

 private:
  FeatureSegmentation(std::size_t rows, std::size_t cols, SegmentationKind kind);

  std::size_t rows_;
  std::size_t cols_;
  SegmentationKind kind_;
  std::vector<FeatureId> labels_;
  std::vector<std::vector<std::size_t>> members_;
};

struct FeatureMask {
  FeatureId feature_id;
  ComplexMatrix occluded;  // input with the feature's positions zeroed
};

struct FeatureContribution {
  FeatureId feature_id;
  ComplexMatrix contribution;
  double weight;  // Frobenius norm of `contribution`
};

struct ContributionMap {
  std::size_t rows;
  std::size_t cols;
  FeatureSegmentation segmentation;
  std::vector<FeatureContribution> features;  // ordered by feature id
};

FeatureMask mask_feature(const ComplexMatrix& x, const FeatureSegmentation& seg, FeatureId id);

/// y - forward(model, x with feature `id` zeroed). `y` is the reference output
/// being explained, normally the original model's output for `x`.
ComplexMatrix contribution(const ComplexMatrix& x, const ComplexMatrix& y,
                           const DistilledModel& model, const FeatureSegmentation& seg,
                           FeatureId id, WorkerPool& pool);

/// Contribution of every feature. Occluded inputs are transformed in batches
/// on the pool; entries are ordered by feature id.
ContributionMap contribution_map(const ComplexMatrix& x, const ComplexMatrix& y,
                                 const DistilledModel& model, const FeatureSegmentation& seg,
                                 WorkerPool& pool);

/// Descending weight, ties by ascending feature id.
std::vector<std::pair<FeatureId, double>> rank_features(const ContributionMap& map);

/// Weights laid out on the segmentation grid and divided by the largest
/// weight. An all-zero map stays zero. Throws UnsupportedSegmentation for
/// custom segmentations.
RealMatrix heatmap(const ContributionMap& map);

}  // namespace convdistill
