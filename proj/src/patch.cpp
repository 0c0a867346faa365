#include "chroma_sr/patch.hpp"

#include <string>

#include "chroma_sr/errors.hpp"

namespace chroma_sr {

bool patch_inside(int width, int height, const PatchIndex& idx, int m_side) {
  return m_side >= 1 && idx.row >= 0 && idx.col >= 0 && idx.row + m_side <= height &&
         idx.col + m_side <= width;
}

Vector extract_stacked_patch(const ColorImage& img, const PatchIndex& idx, int m_side) {
  if (!patch_inside(img.width(), img.height(), idx, m_side)) {
    throw InvalidArgument("patch at (" + std::to_string(idx.row) + "," + std::to_string(idx.col) +
                          ") side " + std::to_string(m_side) + " lies outside " +
                          std::to_string(img.width()) + "x" + std::to_string(img.height()));
  }
  const int m = m_side * m_side;
  Vector v(kChannels * m);
  for (int c = 0; c < kChannels; ++c) {
    const Plane& p = img.plane(c);
    int k = c * m;
    for (int dc = 0; dc < m_side; ++dc)
      for (int dr = 0; dr < m_side; ++dr) v[k++] = p(idx.row + dr, idx.col + dc);
  }
  return v;
}

void place_patch_accumulate(ColorImage& canvas, Plane& weights, const PatchIndex& idx,
                            const Vector& patch, int m_side) {
  if (patch.size() != stacked_length(m_side)) {
    throw InvalidArgument("place_patch_accumulate: patch length " + std::to_string(patch.size()) +
                          " != " + std::to_string(stacked_length(m_side)));
  }
  if (!patch_inside(canvas.width(), canvas.height(), idx, m_side)) {
    throw InvalidArgument("place_patch_accumulate: patch outside canvas");
  }
  const int m = m_side * m_side;
  for (int c = 0; c < kChannels; ++c) {
    Plane& p = canvas.plane(c);
    int k = c * m;
    for (int dc = 0; dc < m_side; ++dc)
      for (int dr = 0; dr < m_side; ++dr) p(idx.row + dr, idx.col + dc) += patch[k++];
  }
  for (int dc = 0; dc < m_side; ++dc)
    for (int dr = 0; dr < m_side; ++dr) weights(idx.row + dr, idx.col + dc) += 1.0;
}

ColorImage normalize_accumulated(const ColorImage& canvas, const Plane& weights) {
  if (weights.width() != canvas.width() || weights.height() != canvas.height()) {
    throw InvalidArgument("normalize_accumulated: weight raster size mismatch");
  }
  ColorImage out(canvas.width(), canvas.height());
  for (int c = 0; c < kChannels; ++c)
    for (int r = 0; r < canvas.height(); ++r)
      for (int k = 0; k < canvas.width(); ++k) {
        const double w = weights(r, k);
        out.at(c, r, k) = w > 0.0 ? canvas.at(c, r, k) / w : 0.0;
      }
  return out;
}

}  // namespace chroma_sr
