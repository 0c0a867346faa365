#include "chroma_sr/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

#include "chroma_sr/errors.hpp"
#include "chroma_sr/grouping.hpp"
#include "chroma_sr/recon.hpp"
#include "chroma_sr/resample.hpp"
#include "chroma_sr/wnnm.hpp"

namespace chroma_sr {

namespace {

class StageClock {
 public:
  StageClock(RunReport& report, std::string stage)
      : report_(report), stage_(std::move(stage)), start_(std::chrono::steady_clock::now()) {}
  ~StageClock() {
    const auto dt = std::chrono::steady_clock::now() - start_;
    report_.timings.push_back({stage_, std::chrono::duration<double>(dt).count()});
  }

 private:
  RunReport& report_;
  std::string stage_;
  std::chrono::steady_clock::time_point start_;
};

template <typename F>
auto in_stage(const std::string& stage, RunReport& report, F&& fn) {
  StageClock clock(report, stage);
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

nlohmann::json cg_json(const CgReport& r) {
  return {{"iterations", r.iterations},
          {"relative_residual", r.relative_residual},
          {"converged", r.converged}};
}

struct GroupOutcome {
  RestoredGroup restored;
  int iterations = 0;
  bool converged = false;
  bool diverged = false;
  std::string diagnostics;
  std::vector<std::string> warnings;
};

}  // namespace

nlohmann::json RunReport::to_json() const {
  nlohmann::json j;
  j["noise"] = {{"sigma", noise.sigma}, {"variance", noise.variances()}};
  j["passes"] = nlohmann::json::array();
  for (const PassReport& p : passes) {
    nlohmann::json cg = nlohmann::json::array();
    for (const CgReport& c : p.cg) cg.push_back(cg_json(c));
    j["passes"].push_back({{"groups", p.groups},
                           {"admm_converged", p.admm_converged},
                           {"admm_diverged", p.admm_diverged},
                           {"admm_mean_iterations", p.admm_mean_iterations},
                           {"beta", p.beta},
                           {"mean_overlap", p.mean_overlap},
                           {"lr_discrepancy", p.lr_discrepancy},
                           {"cg", cg}});
  }
  j["timings"] = nlohmann::json::array();
  for (const StageTiming& t : timings) j["timings"].push_back({{"stage", t.stage}, {"seconds", t.seconds}});
  j["warnings"] = warnings;
  return j;
}

std::vector<PatchIndex> target_positions(int width, int height, int m_side, int stride) {
  if (width < m_side || height < m_side) {
    throw InvalidArgument("image " + std::to_string(width) + "x" + std::to_string(height) +
                          " is smaller than the patch side " + std::to_string(m_side));
  }
  if (stride < 1) throw InvalidArgument("target stride must be >= 1");
  auto axis = [&](int extent) {
    std::vector<int> pos;
    for (int p = 0; p + m_side <= extent; p += stride) pos.push_back(p);
    if (pos.back() != extent - m_side) pos.push_back(extent - m_side);
    return pos;
  };
  std::vector<PatchIndex> out;
  for (int r : axis(height))
    for (int c : axis(width)) out.push_back({r, c, 0});
  return out;
}

void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
  if (workers <= 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min(workers, std::max(n, 1));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (int t = 0; t < workers; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

ColorImage run_pipeline(const ColorImage& lr, const RunConfig& cfg, RunReport* report_out,
                        const PassCallback& on_pass) {
  validate(cfg);
  RunReport local;
  RunReport& report = report_out ? *report_out : local;
  report = RunReport{};

  const int d = cfg.scale_factor;
  const int m_side = cfg.patch_side;
  const int m = m_side * m_side;
  const int hr_w = lr.width() * d;
  const int hr_h = lr.height() * d;
  const DegradationModel model(d);

  ColorImage working = in_stage("upscale", report, [&] {
    if (lr.empty()) throw InvalidArgument("empty input image");
    if (hr_w < m_side || hr_h < m_side) {
      throw InvalidArgument("upscaled image is smaller than the patch side");
    }
    return bicubic_resize(lr, hr_w, hr_h, false);
  });

  report.noise = in_stage("noise", report, [&] { return estimate_noise_profile(lr); });
  const double mean_var = report.noise.mean_variance();
  const ChannelWeight lam = cfg.uniform_lambda ? uniform_lambda(1.0 / std::sqrt(mean_var), m)
                                               : lambda_weights(report.noise, m);

  const std::vector<PatchIndex> targets = target_positions(hr_w, hr_h, m_side, cfg.target_stride);

  for (int pass = 0; pass < cfg.outer_passes; ++pass) {
    const std::string tag = cfg.outer_passes > 1 ? "[" + std::to_string(pass) + "]" : "";
    PassReport pr;

    const auto pyramid = in_stage("pyramid" + tag, report, [&] {
      return build_pyramid(working, cfg.pyramid_ratio, cfg.pyramid_levels, m_side);
    });

    std::vector<GroupOutcome> outcomes(targets.size());
    in_stage("groups" + tag, report, [&] {
      GroupingConfig gcfg;
      gcfg.patch_side = m_side;
      gcfg.search_window = cfg.search_window;
      gcfg.group_size = cfg.group_size;
      gcfg.h = 2.0 * (3.0 * m) * mean_var;

      parallel_for(static_cast<int>(targets.size()), cfg.workers, [&](int i) {
        GroupOutcome& out = outcomes[i];
        const PatchGroup group = assemble_group(working, targets[i], gcfg);
        const Matrix pooled =
            cross_scale_matches(pyramid, group.matrix.col(0), m_side, cfg.per_scale_matches,
                                &out.warnings);
        MultiScaleBasis basis;
        if (pooled.cols() >= 2) {
          basis = pca_basis(pooled);
        } else {
          basis.basis = Matrix::Identity(3 * m, 3 * m);
          basis.eigenvalues = Vector::Zero(3 * m);
          out.warnings.push_back("fewer than 2 cross-scale matches; identity basis used");
        }

        AdmmConfig acfg;
        acfg.rho0 = cfg.rho0;
        acfg.eta = cfg.eta;
        acfg.alpha = cfg.alpha;
        acfg.max_iter = cfg.max_admm_iters;
        acfg.tol = cfg.admm_tol;
        acfg.C = cfg.nuclear_scale * 2.0 * std::sqrt(2.0 * static_cast<double>(group.matrix.cols())) * mean_var;
        const AdmmResult res = admm_solve(group.detail, lam, basis, acfg);

        out.restored.members = group.members;
        out.restored.patches = readd_mean(res.solution, group.nlm_mean);
        out.iterations = res.iterations;
        out.converged = res.converged;
        out.diverged = res.diverged;
        out.diagnostics = res.diagnostics;
      });
      return 0;
    });

    std::vector<RestoredGroup> restored;
    restored.reserve(outcomes.size());
    std::set<std::string> seen;
    long iter_total = 0;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      GroupOutcome& o = outcomes[i];
      iter_total += o.iterations;
      pr.admm_converged += o.converged ? 1 : 0;
      if (o.diverged) {
        ++pr.admm_diverged;
        ++report.divergence_warnings;
        report.warnings.push_back("admm diverged at target (" + std::to_string(targets[i].row) +
                                  "," + std::to_string(targets[i].col) + "): " + o.diagnostics);
      }
      for (auto& w : o.warnings) {
        if (seen.insert(w).second) report.warnings.push_back(std::move(w));
      }
      restored.push_back(std::move(o.restored));
    }
    pr.groups = static_cast<int>(outcomes.size());
    pr.admm_mean_iterations = pr.groups ? static_cast<double>(iter_total) / pr.groups : 0.0;

    const FusionResult fused = in_stage("fusion" + tag, report, [&] {
      FusionProblem problem;
      problem.groups = std::move(restored);
      problem.patch_side = m_side;
      problem.hr_width = hr_w;
      problem.hr_height = hr_h;
      problem.lr = lr;
      problem.degradation = model;
      const PatchAccumulator acc = accumulate_groups(problem.groups, m_side, hr_w, hr_h);
      double total = 0.0;
      for (double c : acc.count.values()) total += c;
      const double overlap = total / static_cast<double>(acc.count.size());
      const ColorImage predicted = degrade(normalize_accumulated(acc), model);
      double sq = 0.0;
      for (int c = 0; c < kChannels; ++c) {
        const auto a = lr.plane(c).values();
        const auto b = predicted.plane(c).values();
        for (std::size_t i = 0; i < a.size(); ++i) sq += (a[i] - b[i]) * (a[i] - b[i]);
      }
      pr.lr_discrepancy = sq / (kChannels * static_cast<double>(lr.plane(0).size()));
      if (cfg.beta >= 0.0) {
        problem.beta = cfg.beta;
      } else {
        problem.beta = std::min(cfg.beta_cap, cfg.beta_scale * overlap / mean_var);
      }
      pr.beta = problem.beta;
      return fuse(problem);
    });
    pr.mean_overlap = fused.mean_overlap;
    pr.cg = fused.channels;
    if (fused.cg_warning) {
      report.warnings.push_back("fusion solver stopped before reaching its tolerance (pass " +
                                std::to_string(pass) + ")");
    }
    working = fused.image;
    report.passes.push_back(pr);
    if (on_pass) on_pass(pass, working);
  }
  return clamped(working);
}

}  // namespace chroma_sr
