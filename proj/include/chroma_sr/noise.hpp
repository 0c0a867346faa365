#pragma once

#include <array>

#include "chroma_sr/image.hpp"

namespace chroma_sr {

/// Lower bound on any estimated noise standard deviation (8-bit scale).
inline constexpr double kSigmaFloor = 0.5;

/// Per-channel additive Gaussian noise standard deviations, order r, g, b.
struct NoiseProfile {
  std::array<double, kChannels> sigma{kSigmaFloor, kSigmaFloor, kSigmaFloor};

  std::array<double, kChannels> variances() const {
    return {sigma[0] * sigma[0], sigma[1] * sigma[1], sigma[2] * sigma[2]};
  }
  /// Mean of the per-channel variances.
  double mean_variance() const {
    const auto v = variances();
    return (v[0] + v[1] + v[2]) / 3.0;
  }
};

/// Robust MAD estimate of white Gaussian noise sigma from a 3x3 Laplacian
/// difference response, interior pixels only (2-pixel border dropped).
/// Requires at least 16x16; result is clamped below by kSigmaFloor.
double estimate_channel_sigma(const Plane& plane);

NoiseProfile estimate_noise_profile(const ColorImage& img);

std::array<double, kChannels> report_variances(const NoiseProfile& profile);
std::array<double, kChannels> report_variances(const ColorImage& img);

}  // namespace chroma_sr
