#include "chroma_sr/image.hpp"

#include <algorithm>
#include <string>

#include "chroma_sr/errors.hpp"

namespace chroma_sr {

Plane::Plane(int width, int height, double fill) : width_(width), height_(height) {
  if (width < 0 || height < 0) {
    throw InvalidArgument("plane dimensions must be non-negative");
  }
  data_.assign(static_cast<std::size_t>(width) * height, fill);
}

ColorImage::ColorImage(int width, int height, double fill)
    : planes_{Plane(width, height, fill), Plane(width, height, fill), Plane(width, height, fill)} {}

ColorImage::ColorImage(std::array<Plane, kChannels> planes) : planes_(std::move(planes)) {
  for (int c = 1; c < kChannels; ++c) {
    if (planes_[c].width() != planes_[0].width() || planes_[c].height() != planes_[0].height()) {
      throw InvalidArgument("color planes must share dimensions");
    }
  }
}

ColorImage clamped(const ColorImage& img, double lo, double hi) {
  ColorImage out = img;
  for (int c = 0; c < kChannels; ++c) {
    for (double& v : out.plane(c).values()) v = std::clamp(v, lo, hi);
  }
  return out;
}

ColorImage crop(const ColorImage& img, int row, int col, int width, int height) {
  if (row < 0 || col < 0 || width < 1 || height < 1 || row + height > img.height() ||
      col + width > img.width()) {
    throw InvalidArgument("crop rectangle " + std::to_string(width) + "x" + std::to_string(height) +
                          "+" + std::to_string(col) + "+" + std::to_string(row) +
                          " is outside the image");
  }
  ColorImage out(width, height);
  for (int c = 0; c < kChannels; ++c)
    for (int r = 0; r < height; ++r)
      for (int k = 0; k < width; ++k) out.at(c, r, k) = img.at(c, row + r, col + k);
  return out;
}

double dot(const Plane& a, const Plane& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw InvalidArgument("dot: plane dimensions differ");
  }
  double s = 0.0;
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) s += av[i] * bv[i];
  return s;
}

double dot(const ColorImage& a, const ColorImage& b) {
  double s = 0.0;
  for (int c = 0; c < kChannels; ++c) s += dot(a.plane(c), b.plane(c));
  return s;
}

}  // namespace chroma_sr
