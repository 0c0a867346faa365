#include "chroma_sr/metrics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "chroma_sr/errors.hpp"

namespace chroma_sr {

namespace {

constexpr double kPeak = 255.0;
constexpr int kWindow = 11;
constexpr double kWindowSigma = 1.5;

void require_same_size(const ColorImage& a, const ColorImage& b, const char* what) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw InvalidArgument(std::string(what) + ": image dimensions differ (" +
                          std::to_string(a.width()) + "x" + std::to_string(a.height()) + " vs " +
                          std::to_string(b.width()) + "x" + std::to_string(b.height()) + ")");
  }
}

double psnr_from_sse(double sse, double count) {
  if (sse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(kPeak * kPeak / (sse / count));
}

double channel_sse(const Plane& a, const Plane& b) {
  double s = 0.0;
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) {
    const double d = av[i] - bv[i];
    s += d * d;
  }
  return s;
}

std::array<double, kWindow * kWindow> gaussian_window() {
  std::array<double, kWindow * kWindow> w{};
  double total = 0.0;
  const int half = kWindow / 2;
  for (int r = 0; r < kWindow; ++r)
    for (int c = 0; c < kWindow; ++c) {
      const double d2 = (r - half) * (r - half) + (c - half) * (c - half);
      w[r * kWindow + c] = std::exp(-d2 / (2.0 * kWindowSigma * kWindowSigma));
      total += w[r * kWindow + c];
    }
  for (double& v : w) v /= total;
  return w;
}

}  // namespace

double psnr(const ColorImage& a, const ColorImage& b) {
  require_same_size(a, b, "psnr");
  double sse = 0.0;
  for (int c = 0; c < kChannels; ++c) sse += channel_sse(a.plane(c), b.plane(c));
  return psnr_from_sse(sse, 3.0 * a.width() * a.height());
}

std::array<double, kChannels> per_channel_psnr(const ColorImage& a, const ColorImage& b) {
  require_same_size(a, b, "psnr");
  std::array<double, kChannels> out{};
  for (int c = 0; c < kChannels; ++c) {
    out[c] = psnr_from_sse(channel_sse(a.plane(c), b.plane(c)),
                           static_cast<double>(a.width()) * a.height());
  }
  return out;
}

Plane luminance(const ColorImage& img) {
  Plane y(img.width(), img.height());
  for (int r = 0; r < img.height(); ++r)
    for (int c = 0; c < img.width(); ++c)
      y(r, c) = 0.299 * img.at(0, r, c) + 0.587 * img.at(1, r, c) + 0.114 * img.at(2, r, c);
  return y;
}

double ssim(const ColorImage& a, const ColorImage& b) {
  require_same_size(a, b, "ssim");
  if (a.width() < kWindow || a.height() < kWindow) {
    throw InvalidArgument("ssim: images must be at least 11x11");
  }
  static const auto window = gaussian_window();
  const double c1 = (0.01 * kPeak) * (0.01 * kPeak);
  const double c2 = (0.03 * kPeak) * (0.03 * kPeak);
  const Plane x = luminance(a);
  const Plane y = luminance(b);

  double total = 0.0;
  long count = 0;
  for (int r = 0; r + kWindow <= x.height(); ++r) {
    for (int c = 0; c + kWindow <= x.width(); ++c) {
      double mx = 0.0, my = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
      for (int i = 0; i < kWindow; ++i)
        for (int j = 0; j < kWindow; ++j) {
          const double w = window[i * kWindow + j];
          const double xv = x(r + i, c + j);
          const double yv = y(r + i, c + j);
          mx += w * xv;
          my += w * yv;
          sxx += w * xv * xv;
          syy += w * yv * yv;
          sxy += w * xv * yv;
        }
      const double vx = sxx - mx * mx;
      const double vy = syy - my * my;
      const double cov = sxy - mx * my;
      total += ((2.0 * mx * my + c1) * (2.0 * cov + c2)) /
               ((mx * mx + my * my + c1) * (vx + vy + c2));
      ++count;
    }
  }
  return total / static_cast<double>(count);
}

EvalReport evaluate(const ColorImage& estimate, const ColorImage& reference, int shave) {
  require_same_size(estimate, reference, "evaluate");
  if (shave < 0) throw InvalidArgument("evaluate: shave must be >= 0");
  const int w = estimate.width() - 2 * shave;
  const int h = estimate.height() - 2 * shave;
  if (w < 1 || h < 1) throw InvalidArgument("evaluate: shave removes the whole image");
  const ColorImage a = shave > 0 ? crop(estimate, shave, shave, w, h) : estimate;
  const ColorImage b = shave > 0 ? crop(reference, shave, shave, w, h) : reference;
  EvalReport rep;
  rep.psnr_db = psnr(a, b);
  rep.per_channel_psnr = per_channel_psnr(a, b);
  rep.ssim = ssim(a, b);
  return rep;
}

}  // namespace chroma_sr
