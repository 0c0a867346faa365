#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "chroma_sr/cg.hpp"
#include "chroma_sr/config.hpp"
#include "chroma_sr/image.hpp"
#include "chroma_sr/noise.hpp"

namespace chroma_sr {

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct PassReport {
  int groups = 0;
  int admm_converged = 0;
  int admm_diverged = 0;
  double admm_mean_iterations = 0.0;
  double beta = 0.0;
  double mean_overlap = 0.0;
  /// Mean squared difference between the LR input and the degraded patch
  /// average, before fusion.
  double lr_discrepancy = 0.0;
  std::array<CgReport, kChannels> cg{};
};

struct RunReport {
  NoiseProfile noise;
  std::vector<PassReport> passes;
  std::vector<StageTiming> timings;
  std::vector<std::string> warnings;
  /// Divergence warnings; these make a --strict run fail.
  int divergence_warnings = 0;

  nlohmann::json to_json() const;
};

/// Target patch corners on a stride, always including the last row/column
/// so every pixel is covered.
std::vector<PatchIndex> target_positions(int width, int height, int m_side, int stride);

/// Calls fn(i) for i in [0, n) on up to `workers` threads (0 = hardware
/// concurrency). Exceptions are rethrown on the calling thread.
void parallel_for(int n, int workers, const std::function<void(int)>& fn);

/// Called after each outer pass with the pass index and the fused estimate.
using PassCallback = std::function<void(int, const ColorImage&)>;

/// Super-resolves `lr` by cfg.scale_factor. Output is clamped to [0,255].
ColorImage run_pipeline(const ColorImage& lr, const RunConfig& cfg, RunReport* report = nullptr,
                        const PassCallback& on_pass = {});

}  // namespace chroma_sr
