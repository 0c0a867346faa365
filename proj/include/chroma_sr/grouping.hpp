#pragma once

#include <string>
#include <vector>

#include "chroma_sr/image.hpp"
#include "chroma_sr/patch.hpp"

namespace chroma_sr {

struct PatchMatch {
  PatchIndex index;
  double distance2 = 0.0;  // squared l2 distance over the stacked RGB vector
};

/// Block matching inside a square window centred on `target`. The target is
/// always returned first; the rest follow by ascending distance, ties broken
/// by row-major scan order. Returns min(s, candidates) matches.
std::vector<PatchMatch> find_similar_patches(const ColorImage& img, const PatchIndex& target,
                                             int m_side, int window, int s);

/// Normalized weights exp(-||x_0 - x_j||^2 / h) over the columns of a group.
Vector nlm_weights(const Matrix& group, double h);

/// Weighted mean of the columns, weights from nlm_weights (column 0 is the target).
Vector nlm_mean(const Matrix& group, double h);

struct GroupingConfig {
  int patch_side = 6;
  int search_window = 25;
  int group_size = 20;
  double h = 1.0;  // NLM bandwidth
};

/// Similar-patch group of one target. Columns are stacked patches in match
/// order; detail = matrix - nlm_mean (repeated columnwise).
struct PatchGroup {
  PatchIndex target;
  std::vector<PatchIndex> members;
  std::vector<double> distances;
  Matrix matrix;
  Vector nlm_mean;
  Matrix detail;
};

PatchGroup assemble_group(const ColorImage& img, const PatchIndex& target,
                          const GroupingConfig& cfg);

/// Exhaustive best-`per_scale` matches to `target_vec` at every pyramid
/// level, pooled level by level into a 3m x t matrix. Levels smaller than the
/// patch are skipped and reported through `warnings` when given.
Matrix cross_scale_matches(const std::vector<ColorImage>& pyramid, const Vector& target_vec,
                           int m_side, int per_scale, std::vector<std::string>* warnings = nullptr);

/// Orthonormal PCA basis (columns) with eigenvalues in descending order.
struct MultiScaleBasis {
  Matrix basis;
  Vector eigenvalues;
};

/// Eigenvectors of the scatter (1/t) T_r T_r^T of the column-mean-subtracted
/// input. Each eigenvector's largest-magnitude entry is made non-negative.
MultiScaleBasis pca_basis(const Matrix& columns);

}  // namespace chroma_sr
