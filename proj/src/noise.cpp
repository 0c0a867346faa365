#include "chroma_sr/noise.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "chroma_sr/errors.hpp"

namespace chroma_sr {

namespace {

constexpr int kMinSide = 16;
constexpr int kBorder = 2;
constexpr double kMask[3][3] = {{1, -2, 1}, {-2, 4, -2}, {1, -2, 1}};
// 0.6745 is the median of |N(0,1)|.
constexpr double kMadToSigma = 0.6745;

double mask_noise_gain() {
  double s = 0.0;
  for (const auto& row : kMask)
    for (double v : row) s += v * v;
  return std::sqrt(s);
}

double median_in_place(std::vector<double>& v) {
  const std::size_t n = v.size();
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(v.begin(), mid, v.end());
  double upper = *mid;
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

}  // namespace

double estimate_channel_sigma(const Plane& plane) {
  if (plane.width() < kMinSide || plane.height() < kMinSide) {
    throw InvalidArgument("noise estimation needs at least " + std::to_string(kMinSide) + "x" +
                          std::to_string(kMinSide) + " pixels (got " +
                          std::to_string(plane.width()) + "x" + std::to_string(plane.height()) +
                          ")");
  }
  std::vector<double> response;
  response.reserve(static_cast<std::size_t>(plane.width() - 2 * kBorder) *
                   (plane.height() - 2 * kBorder));
  for (int r = kBorder; r < plane.height() - kBorder; ++r) {
    for (int c = kBorder; c < plane.width() - kBorder; ++c) {
      double s = 0.0;
      for (int dr = -1; dr <= 1; ++dr)
        for (int dc = -1; dc <= 1; ++dc) s += kMask[dr + 1][dc + 1] * plane(r + dr, c + dc);
      response.push_back(std::abs(s));
    }
  }
  static const double gain = mask_noise_gain();
  const double sigma = median_in_place(response) / (kMadToSigma * gain);
  if (!std::isfinite(sigma)) throw NumericalError("noise estimate is not finite");
  return std::max(sigma, kSigmaFloor);
}

NoiseProfile estimate_noise_profile(const ColorImage& img) {
  NoiseProfile p;
  for (int c = 0; c < kChannels; ++c) p.sigma[c] = estimate_channel_sigma(img.plane(c));
  return p;
}

std::array<double, kChannels> report_variances(const NoiseProfile& profile) {
  return profile.variances();
}

std::array<double, kChannels> report_variances(const ColorImage& img) {
  return report_variances(estimate_noise_profile(img));
}

}  // namespace chroma_sr
