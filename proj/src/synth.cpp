#include "chroma_sr/synth.hpp"

#include <cmath>
#include <numbers>

namespace chroma_sr {

double GaussianSource::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double GaussianSource::operator()() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

ColorImage add_channel_noise(const ColorImage& img, const std::array<double, kChannels>& sigma,
                             std::uint64_t seed) {
  GaussianSource gauss(seed);
  ColorImage out = img;
  for (int c = 0; c < kChannels; ++c)
    for (double& v : out.plane(c).values()) v += sigma[c] * gauss();
  return out;
}

ColorImage random_image(int width, int height, std::uint64_t seed, double lo, double hi) {
  GaussianSource src(seed);
  ColorImage out(width, height);
  for (int c = 0; c < kChannels; ++c)
    for (double& v : out.plane(c).values()) v = lo + (hi - lo) * src.uniform();
  return out;
}

}  // namespace chroma_sr
