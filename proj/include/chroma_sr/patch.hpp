#pragma once

#include <Eigen/Dense>

#include "chroma_sr/image.hpp"

namespace chroma_sr {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Length of a stacked RGB patch vector for a square patch of side `m_side`.
constexpr int stacked_length(int m_side) { return kChannels * m_side * m_side; }

bool patch_inside(int width, int height, const PatchIndex& idx, int m_side);

/// Stacked patch [r; g; b], each channel block vectorized column-major.
Vector extract_stacked_patch(const ColorImage& img, const PatchIndex& idx, int m_side);

/// Running sum of placed patches plus a per-pixel placement count.
struct PatchAccumulator {
  ColorImage sum;
  Plane count;

  PatchAccumulator(int width, int height) : sum(width, height), count(width, height) {}
};

/// Adds `patch` into the canvas at `idx` and increments the covered counts.
void place_patch_accumulate(ColorImage& canvas, Plane& weights, const PatchIndex& idx,
                            const Vector& patch, int m_side);
inline void place_patch_accumulate(PatchAccumulator& acc, const PatchIndex& idx,
                                   const Vector& patch, int m_side) {
  place_patch_accumulate(acc.sum, acc.count, idx, patch, m_side);
}

/// sum / count per pixel. Uncovered pixels (count 0) become 0.
ColorImage normalize_accumulated(const ColorImage& canvas, const Plane& weights);
inline ColorImage normalize_accumulated(const PatchAccumulator& acc) {
  return normalize_accumulated(acc.sum, acc.count);
}

}  // namespace chroma_sr
