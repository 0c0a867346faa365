#include "chroma_sr/resample.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chroma_sr/errors.hpp"

namespace chroma_sr {

double keys_cubic(double x) {
  const double ax = std::abs(x);
  const double ax2 = ax * ax;
  const double ax3 = ax2 * ax;
  if (ax <= 1.0) return 1.5 * ax3 - 2.5 * ax2 + 1.0;
  if (ax <= 2.0) return -0.5 * ax3 + 2.5 * ax2 - 4.0 * ax + 2.0;
  return 0.0;
}

ResampleAxis::ResampleAxis(int in_size, int out_size, bool antialias) : in_size_(in_size) {
  if (in_size < 1 || out_size < 1) {
    throw InvalidArgument("resample extents must be >= 1 (got " + std::to_string(in_size) + " -> " +
                          std::to_string(out_size) + ")");
  }
  const double scale = static_cast<double>(out_size) / in_size;
  const bool stretch = antialias && scale < 1.0;
  const double kscale = stretch ? scale : 1.0;
  const double half_width = 2.0 / kscale;

  taps_.resize(out_size);
  std::vector<double> dense;
  for (int o = 0; o < out_size; ++o) {
    const double centre = (o + 0.5) / scale - 0.5;
    const int first = static_cast<int>(std::floor(centre - half_width));
    const int last = static_cast<int>(std::ceil(centre + half_width));

    // Accumulate into clamped input indices so replicated samples merge.
    const int lo = std::clamp(first, 0, in_size - 1);
    const int hi = std::clamp(last, 0, in_size - 1);
    dense.assign(hi - lo + 1, 0.0);
    double total = 0.0;
    for (int i = first; i <= last; ++i) {
      const double w = kscale * keys_cubic(kscale * (centre - i));
      if (w == 0.0) continue;
      dense[std::clamp(i, 0, in_size - 1) - lo] += w;
      total += w;
    }
    auto& row = taps_[o];
    for (int k = 0; k < static_cast<int>(dense.size()); ++k) {
      if (dense[k] != 0.0) row.push_back({lo + k, dense[k] / total});
    }
  }
}

Plane resize_plane(const Plane& src, const ResampleAxis& horiz, const ResampleAxis& vert) {
  if (src.width() != horiz.in_size() || src.height() != vert.in_size()) {
    throw InvalidArgument("resize_plane: operator/plane size mismatch");
  }
  Plane tmp(horiz.out_size(), src.height());
  for (int r = 0; r < src.height(); ++r) {
    for (int o = 0; o < horiz.out_size(); ++o) {
      double s = 0.0;
      for (const auto& t : horiz.taps(o)) s += t.weight * src(r, t.index);
      tmp(r, o) = s;
    }
  }
  Plane out(horiz.out_size(), vert.out_size());
  for (int o = 0; o < vert.out_size(); ++o) {
    for (int c = 0; c < out.width(); ++c) {
      double s = 0.0;
      for (const auto& t : vert.taps(o)) s += t.weight * tmp(t.index, c);
      out(o, c) = s;
    }
  }
  return out;
}

Plane resize_plane_transpose(const Plane& src, const ResampleAxis& horiz,
                             const ResampleAxis& vert) {
  if (src.width() != horiz.out_size() || src.height() != vert.out_size()) {
    throw InvalidArgument("resize_plane_transpose: operator/plane size mismatch");
  }
  Plane tmp(horiz.out_size(), vert.in_size());
  for (int o = 0; o < vert.out_size(); ++o) {
    for (const auto& t : vert.taps(o)) {
      for (int c = 0; c < src.width(); ++c) tmp(t.index, c) += t.weight * src(o, c);
    }
  }
  Plane out(horiz.in_size(), vert.in_size());
  for (int r = 0; r < tmp.height(); ++r) {
    for (int o = 0; o < horiz.out_size(); ++o) {
      const double v = tmp(r, o);
      for (const auto& t : horiz.taps(o)) out(r, t.index) += t.weight * v;
    }
  }
  return out;
}

ColorImage bicubic_resize(const ColorImage& img, int target_width, int target_height,
                          bool antialias) {
  if (target_width < 1 || target_height < 1) {
    throw InvalidArgument("bicubic_resize: target dimensions must be >= 1");
  }
  if (img.empty()) throw InvalidArgument("bicubic_resize: empty image");
  const ResampleAxis horiz(img.width(), target_width, antialias);
  const ResampleAxis vert(img.height(), target_height, antialias);
  std::array<Plane, kChannels> planes;
  for (int c = 0; c < kChannels; ++c) planes[c] = resize_plane(img.plane(c), horiz, vert);
  return ColorImage(std::move(planes));
}

DegradationModel::DegradationModel(int d) : factor(d) {
  if (d < 2) {
    throw InvalidArgument("degradation factor must be >= 2 (got " + std::to_string(d) + ")");
  }
}

int degraded_extent(int hr_extent, int factor) { return (hr_extent + factor - 1) / factor; }

ResampleAxis ResampleAxis::clamp_input(int new_in_size) const {
  if (new_in_size < 1 || new_in_size > in_size_) {
    throw InvalidArgument("clamp_input: new size must lie in [1, in_size]");
  }
  ResampleAxis out;
  out.in_size_ = new_in_size;
  out.taps_.resize(taps_.size());
  for (std::size_t o = 0; o < taps_.size(); ++o) {
    auto& row = out.taps_[o];
    for (const Tap& t : taps_[o]) {
      const int idx = std::min(t.index, new_in_size - 1);
      if (!row.empty() && row.back().index == idx) {
        row.back().weight += t.weight;
      } else {
        row.push_back({idx, t.weight});
      }
    }
  }
  return out;
}

ResampleAxis degrade_axis(int hr_extent, int factor) {
  if (hr_extent < 1) throw InvalidArgument("degrade: empty image");
  const int lr = degraded_extent(hr_extent, factor);
  const int padded = lr * factor;
  ResampleAxis axis(padded, lr, true);
  if (padded == hr_extent) return axis;
  return axis.clamp_input(hr_extent);
}

Plane degrade_plane(const Plane& hr, const DegradationModel& model) {
  return resize_plane(hr, degrade_axis(hr.width(), model.factor),
                      degrade_axis(hr.height(), model.factor));
}

Plane degrade_adjoint_plane(const Plane& lr, const DegradationModel& model, int hr_width,
                            int hr_height) {
  if (degraded_extent(hr_width, model.factor) != lr.width() ||
      degraded_extent(hr_height, model.factor) != lr.height()) {
    throw InvalidArgument("degrade_adjoint: HR extent " + std::to_string(hr_width) + "x" +
                          std::to_string(hr_height) + " does not map onto LR extent " +
                          std::to_string(lr.width()) + "x" + std::to_string(lr.height()));
  }
  return resize_plane_transpose(lr, degrade_axis(hr_width, model.factor),
                                degrade_axis(hr_height, model.factor));
}

ColorImage degrade(const ColorImage& hr, const DegradationModel& model) {
  if (model.factor < 2) throw InvalidArgument("degrade: factor must be >= 2");
  if (hr.empty()) throw InvalidArgument("degrade: empty image");
  const ResampleAxis horiz = degrade_axis(hr.width(), model.factor);
  const ResampleAxis vert = degrade_axis(hr.height(), model.factor);
  std::array<Plane, kChannels> planes;
  for (int c = 0; c < kChannels; ++c) planes[c] = resize_plane(hr.plane(c), horiz, vert);
  return ColorImage(std::move(planes));
}

ColorImage degrade_adjoint(const ColorImage& lr, const DegradationModel& model, int hr_width,
                           int hr_height) {
  if (hr_width < 0) hr_width = lr.width() * model.factor;
  if (hr_height < 0) hr_height = lr.height() * model.factor;
  std::array<Plane, kChannels> planes;
  for (int c = 0; c < kChannels; ++c) {
    planes[c] = degrade_adjoint_plane(lr.plane(c), model, hr_width, hr_height);
  }
  return ColorImage(std::move(planes));
}

std::vector<ColorImage> build_pyramid(const ColorImage& img, double ratio, int levels,
                                      int min_side) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw ConfigError({"pyramid_ratio"}, "pyramid_ratio must lie in (0, 1)");
  }
  if (levels < 0) throw ConfigError({"pyramid_levels"}, "pyramid_levels must be >= 0");
  std::vector<ColorImage> pyramid;
  pyramid.reserve(levels + 1);
  pyramid.push_back(img);
  for (int i = 1; i <= levels; ++i) {
    const double f = std::pow(ratio, i);
    const int w = static_cast<int>(std::lround(img.width() * f));
    const int h = static_cast<int>(std::lround(img.height() * f));
    if (w < min_side || h < min_side) {
      throw ConfigError({"pyramid_levels"},
                        "pyramid level " + std::to_string(i) + " (" + std::to_string(w) + "x" +
                            std::to_string(h) + ") is smaller than the patch side " +
                            std::to_string(min_side));
    }
    pyramid.push_back(bicubic_resize(img, w, h, true));
  }
  return pyramid;
}

}  // namespace chroma_sr
