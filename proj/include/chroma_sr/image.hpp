#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace chroma_sr {

/// Single real-valued raster, row-major.
class Plane {
 public:
  Plane() = default;
  Plane(int width, int height, double fill = 0.0);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(int row, int col) { return data_[static_cast<std::size_t>(row) * width_ + col]; }
  double operator()(int row, int col) const {
    return data_[static_cast<std::size_t>(row) * width_ + col];
  }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  bool operator==(const Plane&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

inline constexpr int kChannels = 3;

/// Planar RGB image on the [0,255] intensity scale. Values are real and may
/// leave that range while an estimate is being optimized.
class ColorImage {
 public:
  ColorImage() = default;
  ColorImage(int width, int height, double fill = 0.0);
  explicit ColorImage(std::array<Plane, kChannels> planes);

  static ColorImage constant(int width, int height, double value) {
    return ColorImage(width, height, value);
  }

  int width() const { return planes_[0].width(); }
  int height() const { return planes_[0].height(); }
  bool empty() const { return planes_[0].empty(); }

  Plane& plane(int channel) { return planes_[channel]; }
  const Plane& plane(int channel) const { return planes_[channel]; }

  double& at(int channel, int row, int col) { return planes_[channel](row, col); }
  double at(int channel, int row, int col) const { return planes_[channel](row, col); }

  bool operator==(const ColorImage&) const = default;

 private:
  std::array<Plane, kChannels> planes_;
};

/// Top-left corner of a patch in the grid of a given pyramid level.
struct PatchIndex {
  int row = 0;
  int col = 0;
  int scale_level = 0;

  bool operator==(const PatchIndex&) const = default;
};

/// Returns a copy with every sample clamped to [lo, hi].
ColorImage clamped(const ColorImage& img, double lo = 0.0, double hi = 255.0);

/// Crops the rectangle [row, row+height) x [col, col+width).
ColorImage crop(const ColorImage& img, int row, int col, int width, int height);

double dot(const Plane& a, const Plane& b);
double dot(const ColorImage& a, const ColorImage& b);

}  // namespace chroma_sr
