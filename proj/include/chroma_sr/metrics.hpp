#pragma once

#include <array>

#include "chroma_sr/image.hpp"

namespace chroma_sr {

/// 10 log10(255^2 / MSE) over all channels jointly; +infinity when MSE is 0.
double psnr(const ColorImage& a, const ColorImage& b);
std::array<double, kChannels> per_channel_psnr(const ColorImage& a, const ColorImage& b);

/// Luminance (0.299 r + 0.587 g + 0.114 b).
Plane luminance(const ColorImage& img);

/// Single-scale SSIM on luminance: 11x11 Gaussian window (sigma 1.5),
/// K1 = 0.01, K2 = 0.03, L = 255, mean over windows fully inside the image.
double ssim(const ColorImage& a, const ColorImage& b);

struct EvalReport {
  double psnr_db = 0.0;
  double ssim = 0.0;
  std::array<double, kChannels> per_channel_psnr{};
};

/// Metrics after removing `shave` pixels from every border.
EvalReport evaluate(const ColorImage& estimate, const ColorImage& reference, int shave = 0);

}  // namespace chroma_sr
