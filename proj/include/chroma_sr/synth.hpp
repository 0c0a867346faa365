#pragma once

#include <array>
#include <cstdint>
#include <random>

#include "chroma_sr/image.hpp"

namespace chroma_sr {

/// Seeded standard normal source. Uses mt19937_64 (bit-exact across standard
/// libraries) with a Box-Muller transform, so sequences are reproducible on
/// any platform, unlike std::normal_distribution.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

  double operator()();
  /// Uniform in [0, 1).
  double uniform();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Adds independent N(0, sigma_c^2) noise to each channel. Channels draw from
/// one stream in plane order r, g, b.
ColorImage add_channel_noise(const ColorImage& img, const std::array<double, kChannels>& sigma,
                             std::uint64_t seed);

/// Uniform random image with samples in [lo, hi).
ColorImage random_image(int width, int height, std::uint64_t seed, double lo = 0.0,
                        double hi = 255.0);

}  // namespace chroma_sr
