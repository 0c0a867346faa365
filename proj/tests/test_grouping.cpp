#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "chroma_sr/errors.hpp"
#include "chroma_sr/grouping.hpp"
#include "chroma_sr/resample.hpp"
#include "oracles.hpp"

using namespace chroma_sr;

TEST_CASE("similar patch search") {
  SUBCASE("constant image: target first, ties in row-major order") {
    const ColorImage img = ColorImage::constant(20, 20, 9.0);
    const auto matches = find_similar_patches(img, {7, 7, 0}, 6, 25, 5);
    REQUIRE(matches.size() == 5);
    CHECK(matches[0].index == PatchIndex{7, 7, 0});
    CHECK(matches[1].index == PatchIndex{0, 0, 0});
    CHECK(matches[2].index == PatchIndex{0, 1, 0});
    CHECK(matches[4].index == PatchIndex{0, 3, 0});
    for (const auto& m : matches) CHECK(m.distance2 == 0.0);
  }
  SUBCASE("a duplicated patch ranks second at distance 0") {
    ColorImage img = oracle::random_image(20, 20, 6);
    for (int c = 0; c < kChannels; ++c)
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) img.at(c, 12 + i, 1 + j) = img.at(c, 3 + i, 10 + j);
    const auto matches = find_similar_patches(img, {3, 10, 0}, 6, 25, 4);
    CHECK(matches[0].index == PatchIndex{3, 10, 0});
    CHECK(matches[1].index == PatchIndex{12, 1, 0});
    CHECK(matches[1].distance2 == 0.0);
    CHECK(matches[2].distance2 > 0.0);
  }
  SUBCASE("fewer candidates than requested returns them all") {
    const auto matches = find_similar_patches(oracle::random_image(8, 8, 1), {1, 1, 0}, 6, 3, 20);
    CHECK(matches.size() == 9);
  }
  SUBCASE("errors") {
    const ColorImage img(20, 20);
    CHECK_THROWS_AS(find_similar_patches(img, {15, 0, 0}, 6, 25, 5), InvalidArgument);
    CHECK_THROWS_AS(find_similar_patches(img, {0, 0, 0}, 6, 24, 5), InvalidArgument);
    CHECK_THROWS_AS(find_similar_patches(img, {0, 0, 0}, 6, 25, 0), InvalidArgument);
  }
}

TEST_CASE("property: search equals brute force") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const ColorImage img = oracle::random_image(20, 20, 70 + seed);
    for (auto [r, c] : {std::pair{0, 0}, {7, 9}, {14, 14}, {3, 12}}) {
      for (int window : {25, 7}) {
        const auto got = find_similar_patches(img, {r, c, 0}, 6, window, 5);
        const auto want = oracle::brute_force_search(img, r, c, 6, window);
        REQUIRE(got.size() == std::min<std::size_t>(5, want.size()));
        for (std::size_t k = 0; k < got.size(); ++k) {
          CHECK(got[k].index.row == want[k].row);
          CHECK(got[k].index.col == want[k].col);
          CHECK(got[k].distance2 == doctest::Approx(want[k].dist));
        }
      }
    }
  }
}

TEST_CASE("nlm mean") {
  SUBCASE("identical columns") {
    const Vector col = oracle::random_matrix(12, 1, 3).col(0);
    const Matrix group = col.replicate(1, 5);
    const Vector w = nlm_weights(group, 4.0);
    for (Eigen::Index j = 0; j < 5; ++j) CHECK(w[j] == doctest::Approx(0.2));
    CHECK((nlm_mean(group, 4.0) - col).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("single column") {
    const Matrix group = oracle::random_matrix(9, 1, 4);
    CHECK(nlm_mean(group, 1.0) == Vector(group.col(0)));
  }
  SUBCASE("two columns at squared distance h") {
    Matrix group(3, 2);
    group << 1.0, 3.0, 2.0, 2.0, -1.0, 0.0;  // ||a - b||^2 = 5
    const double e = std::exp(-1.0);
    const Vector expect = (group.col(0) + e * group.col(1)) / (1.0 + e);
    CHECK((nlm_mean(group, 5.0) - expect).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("bandwidth must be positive") {
    CHECK_THROWS_AS(nlm_mean(Matrix::Ones(3, 2), 0.0), InvalidArgument);
    CHECK_THROWS_AS(nlm_weights(Matrix::Ones(3, 2), -1.0), InvalidArgument);
  }
}

TEST_CASE("property: nlm weights are a convex combination") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Matrix group = oracle::random_matrix(108, 20, seed, 10.0);
    for (double h : {1.0, 1e3, 1e5, 1e8}) {
      const Vector w = nlm_weights(group, h);
      CHECK(w.minCoeff() >= 0.0);
      CHECK(w.maxCoeff() <= 1.0);
      CHECK(std::abs(w.sum() - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("group assembly") {
  GroupingConfig cfg;
  cfg.h = 500.0;
  SUBCASE("constant image has zero detail") {
    const PatchGroup g = assemble_group(ColorImage::constant(20, 20, 40.0), {5, 5, 0}, cfg);
    CHECK(g.detail.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("column 0 is the target patch, members sorted, detail reconstructs") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const ColorImage img = oracle::random_image(20, 20, 30 + seed);
      const PatchIndex target{4 + static_cast<int>(seed), 6, 0};
      const PatchGroup g = assemble_group(img, target, cfg);
      REQUIRE(g.matrix.rows() == 108);
      REQUIRE(g.matrix.cols() == 20);
      CHECK(Vector(g.matrix.col(0)) == extract_stacked_patch(img, target, 6));
      CHECK(g.members.front() == target);
      CHECK(g.distances.front() == 0.0);
      for (std::size_t k = 2; k < g.distances.size(); ++k) CHECK(g.distances[k] >= g.distances[k - 1]);
      const Matrix back = g.detail + g.nlm_mean.replicate(1, g.detail.cols());
      CHECK((back - g.matrix).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("cross-scale matches") {
  SUBCASE("constant single-level pyramid") {
    const std::vector<ColorImage> pyr{ColorImage::constant(12, 12, 33.0)};
    const Matrix t = cross_scale_matches(pyr, Vector::Constant(108, 33.0), 6, 4);
    REQUIRE(t.cols() == 4);
    CHECK((t.array() == 33.0).all());
  }
  SUBCASE("target present verbatim comes first") {
    const ColorImage img = oracle::random_image(16, 16, 8);
    const Vector target = extract_stacked_patch(img, {5, 7, 0}, 6);
    const Matrix t = cross_scale_matches(build_pyramid(img, 0.8, 2), target, 6, 3);
    CHECK(Vector(t.col(0)) == target);
  }
  SUBCASE("pooled set equals the brute-force per-level best") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const ColorImage img = oracle::random_image(16, 14, 90 + seed);
      const auto pyr = build_pyramid(img, 0.8, 1);
      const Vector target = extract_stacked_patch(oracle::random_image(6, 6, 200 + seed), {0, 0, 0}, 6);
      const Matrix t = cross_scale_matches(pyr, target, 6, 3);
      REQUIRE(t.cols() == 6);
      int col = 0;
      for (const auto& level : pyr) {
        const auto want = oracle::best_distances(level, target, 6, 3);
        for (int k = 0; k < 3; ++k, ++col)
          CHECK((t.col(col) - target).squaredNorm() == doctest::Approx(want[k]));
      }
    }
  }
  SUBCASE("levels smaller than the patch are skipped with a warning") {
    const std::vector<ColorImage> pyr{oracle::random_image(10, 10, 1), oracle::random_image(5, 5, 2)};
    std::vector<std::string> warnings;
    const Matrix t = cross_scale_matches(pyr, Vector::Zero(108), 6, 2, &warnings);
    CHECK(t.cols() == 2);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("level 1") != std::string::npos);
  }
}

TEST_CASE("pca basis") {
  SUBCASE("rank one from {v, -v}") {
    Vector v = oracle::random_matrix(12, 1, 5).col(0);
    v.normalize();
    Matrix cols(12, 2);
    cols << v, -v;
    const MultiScaleBasis b = pca_basis(cols);
    Eigen::Index big;
    v.cwiseAbs().maxCoeff(&big);
    const Vector expect = v[big] >= 0.0 ? v : Vector(-v);
    CHECK((b.basis.col(0) - expect).cwiseAbs().maxCoeff() < 1e-10);
    // (1/t) T T^T with t = 2 columns v and -v gives v v^T
    CHECK(b.eigenvalues[0] == doctest::Approx(1.0));
    for (Eigen::Index k = 1; k < 12; ++k) CHECK(std::abs(b.eigenvalues[k]) < 1e-10);
  }
  SUBCASE("identical columns give zero eigenvalues and an orthonormal basis") {
    const Matrix cols = oracle::random_matrix(9, 1, 2).replicate(1, 4);
    const MultiScaleBasis b = pca_basis(cols);
    CHECK(b.eigenvalues.cwiseAbs().maxCoeff() < 1e-10);
    CHECK((b.basis.transpose() * b.basis - Matrix::Identity(9, 9)).cwiseAbs().maxCoeff() < 1e-10);
  }
  SUBCASE("too few columns") {
    CHECK_THROWS_AS(pca_basis(Matrix::Ones(4, 1)), InvalidArgument);
  }
}

TEST_CASE("property: pca basis orthonormal, ordered, reconstructs the scatter") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Matrix cols = oracle::random_matrix(12, 30, 300 + seed, 5.0);
    const MultiScaleBasis b = pca_basis(cols);
    REQUIRE(b.basis.cols() == 12);
    CHECK((b.basis.transpose() * b.basis - Matrix::Identity(12, 12)).cwiseAbs().maxCoeff() < 1e-10);
    for (Eigen::Index k = 0; k < 12; ++k) {
      CHECK(b.eigenvalues[k] >= 0.0);
      if (k > 0) CHECK(b.eigenvalues[k] <= b.eigenvalues[k - 1]);
      Eigen::Index big;
      b.basis.col(k).cwiseAbs().maxCoeff(&big);
      CHECK(b.basis(big, k) >= 0.0);
    }
    const Matrix centred = cols.colwise() - cols.rowwise().mean();
    const Matrix scatter = centred * centred.transpose() / 30.0;
    const Matrix rebuilt = b.basis * b.eigenvalues.asDiagonal() * b.basis.transpose();
    CHECK((rebuilt - scatter).cwiseAbs().maxCoeff() < 1e-8);
  }
}
