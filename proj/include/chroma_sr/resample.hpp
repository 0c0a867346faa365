#pragma once

#include <vector>

#include "chroma_sr/image.hpp"

namespace chroma_sr {

/// Keys cubic convolution kernel with a = -0.5.
double keys_cubic(double x);

/// One-dimensional resampling operator: output sample `o` is
/// sum_k taps[o][k].weight * input[taps[o][k].index]. Indices are already
/// clamped to the input range (edge replication), duplicates merged.
class ResampleAxis {
 public:
  struct Tap {
    int index;
    double weight;
  };

  /// Bicubic weights mapping `in_size` samples onto `out_size` samples with
  /// pixel-centre alignment. With `antialias` and a shrinking ratio the
  /// kernel is stretched by 1/ratio (and rescaled).
  ResampleAxis(int in_size, int out_size, bool antialias);

  int in_size() const { return in_size_; }
  int out_size() const { return static_cast<int>(taps_.size()); }
  const std::vector<Tap>& taps(int out) const { return taps_[out]; }

  /// Same operator restricted to a shorter input: taps past the new end are
  /// folded onto its last sample (replicate padding).
  ResampleAxis clamp_input(int new_in_size) const;

 private:
  ResampleAxis() = default;

  int in_size_ = 0;
  std::vector<std::vector<Tap>> taps_;
};

/// Separable resize: horizontal pass then vertical pass.
Plane resize_plane(const Plane& src, const ResampleAxis& horiz, const ResampleAxis& vert);
/// Exact transpose of resize_plane for the same axis operators.
Plane resize_plane_transpose(const Plane& src, const ResampleAxis& horiz, const ResampleAxis& vert);

/// imresize-style bicubic resize with clamp-to-edge borders.
ColorImage bicubic_resize(const ColorImage& img, int target_width, int target_height,
                          bool antialias = true);

/// Fused blur + decimation operator (DH): antialiased bicubic downscale by an
/// integer factor.
struct DegradationModel {
  int factor = 3;

  explicit DegradationModel(int d = 3);
};

/// Dimension of the low-resolution grid for an HR extent (ceil division;
/// non-multiples are replicate-padded before decimation).
int degraded_extent(int hr_extent, int factor);

/// One axis of DH for an HR extent; behaves as replicate padding to the next
/// multiple of `factor`.
ResampleAxis degrade_axis(int hr_extent, int factor);

Plane degrade_plane(const Plane& hr, const DegradationModel& model);
Plane degrade_adjoint_plane(const Plane& lr, const DegradationModel& model, int hr_width,
                            int hr_height);

ColorImage degrade(const ColorImage& hr, const DegradationModel& model);

/// Adjoint of degrade. The HR extent defaults to factor x LR extent; a
/// smaller extent folds the replicate padding back onto the last row/column.
ColorImage degrade_adjoint(const ColorImage& lr, const DegradationModel& model, int hr_width = -1,
                           int hr_height = -1);

/// Level i is round(dims * ratio^i), resized from the input with antialiasing.
/// Level 0 is the input itself. Throws ConfigError if any level is smaller
/// than `min_side`.
std::vector<ColorImage> build_pyramid(const ColorImage& img, double ratio, int levels,
                                      int min_side = 1);

}  // namespace chroma_sr
