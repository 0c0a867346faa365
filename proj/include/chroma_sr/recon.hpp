#pragma once

#include <array>
#include <vector>

#include "chroma_sr/cg.hpp"
#include "chroma_sr/image.hpp"
#include "chroma_sr/patch.hpp"
#include "chroma_sr/resample.hpp"

namespace chroma_sr {

/// solution + mean repeated columnwise.
Matrix readd_mean(const Matrix& solution, const Vector& mean);

/// Restored patches of one group, column j placed at members[j].
struct RestoredGroup {
  std::vector<PatchIndex> members;
  Matrix patches;
};

struct FusionProblem {
  std::vector<RestoredGroup> groups;
  int patch_side = 6;
  int hr_width = 0;
  int hr_height = 0;
  ColorImage lr;
  DegradationModel degradation{3};
  double beta = 0.0;
  double cg_tol = 1e-6;
  int cg_max_iter = 200;
};

/// A = diag(count) + beta * (DH)^T (DH) acting on one HR channel.
class FusionOperator {
 public:
  FusionOperator(Plane count, const DegradationModel& model, double beta);

  int width() const { return count_.width(); }
  int height() const { return count_.height(); }
  Plane apply(const Plane& x) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;

 private:
  Plane count_;
  double beta_;
  ResampleAxis horiz_;
  ResampleAxis vert_;
};

struct FusionResult {
  ColorImage image;
  std::array<CgReport, kChannels> channels;
  /// Set when any channel's solver stopped before reaching cg_tol.
  bool cg_warning = false;
  /// Mean per-pixel placement count over the HR grid.
  double mean_overlap = 0.0;
};

/// Accumulates every restored column at its member position.
PatchAccumulator accumulate_groups(const std::vector<RestoredGroup>& groups, int patch_side,
                                   int hr_width, int hr_height);

/// Per channel, solves (sum P_i^T P_i + beta H^T D^T D H) x = sum P_i^T x_i + beta H^T D^T y
/// by matrix-free conjugate residual iterations, starting from the plain
/// overlap average.
FusionResult fuse(const FusionProblem& problem);

}  // namespace chroma_sr
