#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "chroma_sr/errors.hpp"
#include "chroma_sr/metrics.hpp"
#include "chroma_sr/synth.hpp"
#include "oracles.hpp"

using namespace chroma_sr;

namespace {

ColorImage offset(const ColorImage& img, double d) {
  ColorImage out = img;
  for (int c = 0; c < kChannels; ++c)
    for (double& v : out.plane(c).values()) v += d;
  return out;
}

}  // namespace

TEST_CASE("psnr") {
  const ColorImage a = oracle::random_image(20, 17, 1);
  SUBCASE("identical images give +infinity") {
    CHECK(std::isinf(psnr(a, a)));
    CHECK(psnr(a, a) > 0.0);
  }
  SUBCASE("uniform difference of 16") {
    CHECK(psnr(a, offset(a, 16.0)) == doctest::Approx(10.0 * std::log10(255.0 * 255.0 / 256.0)));
    CHECK(psnr(a, offset(a, 16.0)) == doctest::Approx(24.0484).epsilon(1e-5));
  }
  SUBCASE("checkerboard against its inverse is 0 dB") {
    ColorImage board(8, 8), inverse(8, 8);
    for (int c = 0; c < kChannels; ++c)
      for (int r = 0; r < 8; ++r)
        for (int col = 0; col < 8; ++col) {
          board.at(c, r, col) = ((r + col) % 2) ? 255.0 : 0.0;
          inverse.at(c, r, col) = 255.0 - board.at(c, r, col);
        }
    CHECK(psnr(board, inverse) == doctest::Approx(0.0));
  }
  SUBCASE("per-channel values") {
    ColorImage b = a;
    for (double& v : b.plane(1).values()) v += 16.0;
    const auto pc = per_channel_psnr(a, b);
    CHECK(std::isinf(pc[0]));
    CHECK(pc[1] == doctest::Approx(24.0484).epsilon(1e-5));
    CHECK(std::isinf(pc[2]));
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(psnr(a, ColorImage(20, 16)), InvalidArgument);
  }
}

TEST_CASE("ssim") {
  const ColorImage a = oracle::random_image(32, 24, 2);
  SUBCASE("identical images give exactly 1") { CHECK(ssim(a, a) == 1.0); }
  SUBCASE("matches the direct-summation oracle") {
    const ColorImage b = add_channel_noise(a, {20.0, 20.0, 20.0}, 5);
    CHECK(ssim(a, b) == doctest::Approx(oracle::ssim_plane(oracle::luminance(a), oracle::luminance(b))).epsilon(1e-10));
  }
  SUBCASE("constant offset only costs the luminance term") {
    const ColorImage base = oracle::random_image(40, 40, 3, 100.0, 156.0);
    const ColorImage shifted = offset(base, 10.0);
    const Plane la = oracle::luminance(base);
    // Per window: variances and covariance are unchanged, so the structure
    // term is 1 and only (2 mu (mu + 10) + C1) / (mu^2 + (mu + 10)^2 + C1) remains.
    const double c1 = std::pow(0.01 * 255.0, 2);
    double g[11][11], total = 0.0;
    for (int i = 0; i < 11; ++i)
      for (int j = 0; j < 11; ++j) total += g[i][j] = std::exp(-((i - 5) * (i - 5) + (j - 5) * (j - 5)) / 4.5);
    double sum = 0.0;
    int count = 0;
    for (int r = 0; r + 11 <= 40; ++r)
      for (int c = 0; c + 11 <= 40; ++c, ++count) {
        double mu = 0.0;
        for (int i = 0; i < 11; ++i)
          for (int j = 0; j < 11; ++j) mu += g[i][j] / total * la(r + i, c + j);
        sum += (2 * mu * (mu + 10) + c1) / (mu * mu + (mu + 10) * (mu + 10) + c1);
      }
    const double value = ssim(base, shifted);
    CHECK(value == doctest::Approx(sum / count).epsilon(1e-10));
    CHECK(value > 0.9);
  }
  SUBCASE("independent noise images are dissimilar") {
    for (std::uint64_t seed = 0; seed < 5; ++seed)
      CHECK(ssim(oracle::random_image(48, 48, 10 + seed), oracle::random_image(48, 48, 20 + seed)) < 0.1);
  }
  SUBCASE("too small") {
    CHECK_THROWS_AS(ssim(ColorImage(10, 30), ColorImage(10, 30)), InvalidArgument);
    CHECK_THROWS_AS(ssim(ColorImage(30, 30), ColorImage(30, 31)), InvalidArgument);
  }
}

TEST_CASE("evaluate with shave") {
  const ColorImage a = oracle::random_image(30, 30, 4);
  ColorImage b = a;
  b.at(0, 0, 0) += 100.0;  // only in the border
  const EvalReport full = evaluate(b, a, 0);
  const EvalReport shaved = evaluate(b, a, 2);
  CHECK(std::isfinite(full.psnr_db));
  CHECK(std::isinf(shaved.psnr_db));
  CHECK(shaved.ssim == 1.0);
  CHECK_THROWS_AS(evaluate(a, a, -1), InvalidArgument);
  CHECK_THROWS_AS(evaluate(a, a, 15), InvalidArgument);
}

TEST_CASE("property: metric symmetry and SSIM bounds") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ColorImage a = oracle::random_image(24, 24, 100 + seed);
    const ColorImage b = add_channel_noise(a, {3.0 * seed, 5.0, 40.0}, seed);
    CHECK(psnr(a, b) == psnr(b, a));
    CHECK(std::abs(ssim(a, b) - ssim(b, a)) <= 1e-12);
    ColorImage inv_img = a;
    for (int c = 0; c < kChannels; ++c)
      for (double& v : inv_img.plane(c).values()) v = 255.0 - v;
    const ColorImage& inv = inv_img;
    for (const ColorImage* other : {&b, &inv}) {
      const double s = ssim(a, *other);
      CHECK(s >= -1.0);
      CHECK(s <= 1.0);
    }
  }
}

TEST_CASE("property: psnr decreases as noise grows") {
  const ColorImage ref = oracle::random_image(64, 64, 7);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    double previous = std::numeric_limits<double>::infinity();
    for (double sigma : {2.0, 5.0, 10.0, 20.0}) {
      const double p = psnr(ref, add_channel_noise(ref, {sigma, sigma, sigma}, seed));
      CHECK(p < previous);
      previous = p;
    }
  }
}
