#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "chroma_sr/errors.hpp"
#include "chroma_sr/pipeline.hpp"
#include "chroma_sr/recon.hpp"
#include "chroma_sr/synth.hpp"
#include "oracles.hpp"

using namespace chroma_sr;

namespace {

double rms(const ColorImage& a, const ColorImage& b) {
  double s = 0.0;
  std::size_t n = 0;
  for (int c = 0; c < kChannels; ++c)
    for (std::size_t i = 0; i < a.plane(c).size(); ++i, ++n) {
      const double d = a.plane(c).values()[i] - b.plane(c).values()[i];
      s += d * d;
    }
  return std::sqrt(s / static_cast<double>(n));
}

// Groups of `members_per_group` patches taken from `img` (optionally
// perturbed), targets on a stride so the grid is fully covered.
std::vector<RestoredGroup> groups_from(const ColorImage& img, int members_per_group,
                                       double perturb, std::uint64_t seed) {
  std::vector<RestoredGroup> groups;
  const auto targets = target_positions(img.width(), img.height(), 6, 3);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, targets.size() - 1);
  for (std::size_t t = 0; t < targets.size(); ++t) {
    RestoredGroup g;
    g.members.push_back(targets[t]);
    for (int k = 1; k < members_per_group; ++k) g.members.push_back(targets[pick(rng)]);
    g.patches.resize(108, static_cast<Eigen::Index>(g.members.size()));
    for (std::size_t j = 0; j < g.members.size(); ++j)
      g.patches.col(static_cast<Eigen::Index>(j)) = extract_stacked_patch(img, g.members[j], 6);
    if (perturb > 0.0)
      g.patches += oracle::random_matrix(108, g.patches.cols(), seed * 1000 + t, perturb);
    groups.push_back(std::move(g));
  }
  return groups;
}

FusionProblem problem_for(const ColorImage& hr, std::vector<RestoredGroup> groups, double beta,
                          const ColorImage& lr) {
  FusionProblem p;
  p.groups = std::move(groups);
  p.hr_width = hr.width();
  p.hr_height = hr.height();
  p.lr = lr;
  p.beta = beta;
  p.cg_tol = 1e-12;
  p.cg_max_iter = 1000;
  return p;
}

}  // namespace

TEST_CASE("mean re-adding") {
  const Vector mean = oracle::random_matrix(12, 1, 1).col(0);
  SUBCASE("zero solution gives the mean in every column") {
    const Matrix out = readd_mean(Matrix::Zero(12, 4), mean);
    for (Eigen::Index j = 0; j < 4; ++j) CHECK(Vector(out.col(j)) == mean);
  }
  SUBCASE("roundtrip with detail extraction") {
    const Matrix group = oracle::random_matrix(12, 6, 2, 50.0);
    const Matrix detail = group.colwise() - mean;
    CHECK((readd_mean(detail, mean) - group).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("seeded arithmetic check") {
    const Matrix sol = oracle::random_matrix(12, 6, 3, 20.0);
    const Matrix back = readd_mean(sol, mean).colwise() - mean;
    CHECK((back - sol).cwiseAbs().maxCoeff() <= 1e-14);
  }
  CHECK_THROWS_AS(readd_mean(Matrix::Zero(5, 2), mean), InvalidArgument);
}

TEST_CASE("fusion") {
  const ColorImage hr = oracle::random_image(24, 24, 11);
  const ColorImage lr = degrade(hr, DegradationModel(3));

  SUBCASE("beta 0 is the overlap average") {
    const auto groups = groups_from(hr, 4, 5.0, 1);
    const FusionResult r = fuse(problem_for(hr, groups, 0.0, lr));
    const ColorImage avg = normalize_accumulated(accumulate_groups(groups, 6, 24, 24));
    double worst = 0.0;
    for (int c = 0; c < kChannels; ++c)
      for (std::size_t i = 0; i < avg.plane(c).size(); ++i)
        worst = std::max(worst, std::abs(avg.plane(c).values()[i] - r.image.plane(c).values()[i]));
    CHECK(worst <= 1e-12);
    CHECK_FALSE(r.cg_warning);
  }
  SUBCASE("consistent instance recovers the HR image for any beta") {
    for (double beta : {0.0, 0.5, 40.0, 1000.0}) {
      const FusionResult r = fuse(problem_for(hr, groups_from(hr, 5, 0.0, 2), beta, lr));
      CHECK(rms(r.image, hr) < 1e-6);
    }
  }
  SUBCASE("matches a dense direct solve at beta 40") {
    const double beta = 40.0;
    const ColorImage lr_noisy = add_channel_noise(lr, {5.0, 5.0, 5.0}, 4);
    const auto groups = groups_from(hr, 6, 10.0, 3);
    const FusionResult r = fuse(problem_for(hr, groups, beta, lr_noisy));
    const PatchAccumulator acc = accumulate_groups(groups, 6, 24, 24);
    const Eigen::MatrixXd D = oracle::degradation_matrix(24, 24, 3);
    const Eigen::MatrixXd A = Eigen::MatrixXd(oracle::vec(acc.count).asDiagonal()) + beta * D.transpose() * D;
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
    ColorImage dense(24, 24);
    for (int c = 0; c < kChannels; ++c) {
      const Eigen::VectorXd b = oracle::vec(acc.sum.plane(c)) + beta * D.transpose() * oracle::vec(lr_noisy.plane(c));
      dense.plane(c) = oracle::unvec(ldlt.solve(b), 24, 24);
    }
    CHECK(rms(r.image, dense) < 1e-6);
  }
  SUBCASE("non-divisible HR grid") {
    const ColorImage odd = oracle::random_image(20, 23, 5);
    const FusionResult r =
        fuse(problem_for(odd, groups_from(odd, 3, 0.0, 6), 25.0, degrade(odd, DegradationModel(3))));
    CHECK(rms(r.image, odd) < 1e-6);
  }
  SUBCASE("uncovered pixels are rejected") {
    FusionProblem p = problem_for(hr, {}, 1.0, lr);
    RestoredGroup g;
    g.members = {{0, 0, 0}};
    g.patches = Matrix::Zero(108, 1);
    p.groups.push_back(g);
    CHECK_THROWS_AS(fuse(p), InvalidArgument);
  }
  SUBCASE("negative beta is rejected") {
    CHECK_THROWS_AS(fuse(problem_for(hr, groups_from(hr, 1, 0.0, 1), -1.0, lr)), InvalidArgument);
  }
  SUBCASE("iteration cap raises the warning flag and returns the best iterate") {
    FusionProblem p = problem_for(hr, groups_from(hr, 3, 20.0, 8), 500.0, lr);
    p.cg_max_iter = 2;
    const FusionResult r = fuse(p);
    CHECK(r.cg_warning);
    for (const CgReport& c : r.channels) {
      CHECK(c.iterations <= 2);
      CHECK(c.relative_residual == doctest::Approx(*std::min_element(c.residual_history.begin(),
                                                                     c.residual_history.end())));
    }
  }
}

TEST_CASE("property: fusion operator is symmetric") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const int w = 18 + static_cast<int>(seed % 4), h = 15 + static_cast<int>(seed % 5);
    Plane count(w, h);
    std::mt19937_64 rng(seed);
    for (double& v : count.values()) v = 1.0 + static_cast<double>(rng() % 6);
    const FusionOperator op(count, DegradationModel(3), 0.5 + 10.0 * static_cast<double>(seed));
    const Eigen::VectorXd u = oracle::random_matrix(w * h, 1, 100 + seed).col(0);
    const Eigen::VectorXd v = oracle::random_matrix(w * h, 1, 200 + seed).col(0);
    const double lhs = op.apply(u).dot(v), rhs = u.dot(op.apply(v));
    CHECK(std::abs(lhs - rhs) <= 1e-8 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("property: fusion residual norm never increases") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const ColorImage hr = oracle::random_image(30, 27, 40 + seed);
    const ColorImage lr = add_channel_noise(degrade(hr, DegradationModel(3)), {10, 10, 10}, seed);
    for (double beta : {0.1, 5.0, 100.0, 3000.0}) {
      FusionProblem p = problem_for(hr, groups_from(hr, 5, 15.0, seed), beta, lr);
      p.cg_tol = 1e-10;
      const FusionResult r = fuse(p);
      for (const CgReport& c : r.channels)
        for (std::size_t k = 1; k < c.residual_history.size(); ++k)
          CHECK(c.residual_history[k] <= c.residual_history[k - 1]);
    }
  }
}

TEST_CASE("pipeline") {
  RunConfig cfg;
  cfg.workers = 1;
  SUBCASE("noiseless constant input stays constant") {
    const ColorImage out = run_pipeline(ColorImage::constant(16, 16, 120.0), cfg);
    CHECK(out.width() == 48);
    CHECK(out.height() == 48);
    for (int c = 0; c < kChannels; ++c)
      for (double v : out.plane(c).values()) CHECK(std::abs(v - 120.0) <= 0.5);
  }
  SUBCASE("same input and config give bit-identical output") {
    const ColorImage lr = add_channel_noise(
        degrade(oracle::random_image(54, 48, 3), DegradationModel(3)), {6, 3, 9}, 2);
    RunReport report;
    const ColorImage a = run_pipeline(lr, cfg, &report);
    const ColorImage b = run_pipeline(lr, cfg);
    CHECK(a == b);
    CHECK(report.passes.size() == static_cast<std::size_t>(cfg.outer_passes));
    CHECK(report.passes[0].groups > 0);
    const auto j = report.to_json();
    CHECK(j.contains("noise"));
    CHECK(j.contains("timings"));
  }
  SUBCASE("outer passes report each pass to the callback") {
    RunConfig multi = cfg;
    multi.outer_passes = 2;
    int calls = 0;
    run_pipeline(ColorImage::constant(16, 16, 60.0), multi, nullptr,
                 [&](int pass, const ColorImage& img) {
                   CHECK(pass == calls);
                   CHECK(img.width() == 48);
                   ++calls;
                 });
    CHECK(calls == 2);
  }
  SUBCASE("failures name the stage") {
    try {
      run_pipeline(ColorImage::constant(10, 10, 1.0), cfg);
      FAIL("expected StageError");
    } catch (const StageError& e) {
      CHECK_FALSE(e.stage().empty());
    }
  }
}
