#include "chroma_sr/recon.hpp"

#include <string>

#include "chroma_sr/errors.hpp"

namespace chroma_sr {

namespace {

Eigen::VectorXd to_vector(const Plane& p) {
  auto v = p.values();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Plane to_plane(const Eigen::VectorXd& v, int width, int height) {
  Plane p(width, height);
  auto out = p.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = v[static_cast<Eigen::Index>(i)];
  return p;
}

}  // namespace

Matrix readd_mean(const Matrix& solution, const Vector& mean) {
  if (solution.rows() != mean.size()) throw InvalidArgument("readd_mean: shape mismatch");
  return solution.colwise() + mean;
}

FusionOperator::FusionOperator(Plane count, const DegradationModel& model, double beta)
    : count_(std::move(count)),
      beta_(beta),
      horiz_(degrade_axis(count_.width(), model.factor)),
      vert_(degrade_axis(count_.height(), model.factor)) {
  if (beta < 0.0) throw InvalidArgument("fusion beta must be >= 0");
}

Plane FusionOperator::apply(const Plane& x) const {
  Plane out(x.width(), x.height());
  if (beta_ > 0.0) {
    out = resize_plane_transpose(resize_plane(x, horiz_, vert_), horiz_, vert_);
    for (double& v : out.values()) v *= beta_;
  }
  auto o = out.values();
  auto xv = x.values();
  auto cv = count_.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] += cv[i] * xv[i];
  return out;
}

Eigen::VectorXd FusionOperator::apply(const Eigen::VectorXd& x) const {
  return to_vector(apply(to_plane(x, width(), height())));
}

PatchAccumulator accumulate_groups(const std::vector<RestoredGroup>& groups, int patch_side,
                                   int hr_width, int hr_height) {
  PatchAccumulator acc(hr_width, hr_height);
  for (const RestoredGroup& g : groups) {
    if (static_cast<Eigen::Index>(g.members.size()) != g.patches.cols()) {
      throw InvalidArgument("restored group: member count != column count");
    }
    for (std::size_t j = 0; j < g.members.size(); ++j) {
      place_patch_accumulate(acc, g.members[j], g.patches.col(static_cast<Eigen::Index>(j)),
                             patch_side);
    }
  }
  return acc;
}

FusionResult fuse(const FusionProblem& problem) {
  if (problem.beta < 0.0) throw InvalidArgument("fuse: beta must be >= 0");
  const int w = problem.hr_width;
  const int h = problem.hr_height;
  const PatchAccumulator acc = accumulate_groups(problem.groups, problem.patch_side, w, h);
  for (double c : acc.count.values()) {
    if (c <= 0.0) throw InvalidArgument("fuse: restored patches do not cover every HR pixel");
  }
  if (problem.beta > 0.0 && (degraded_extent(w, problem.degradation.factor) != problem.lr.width() ||
                             degraded_extent(h, problem.degradation.factor) != problem.lr.height())) {
    throw InvalidArgument("fuse: LR image does not match the HR grid");
  }

  FusionResult result;
  double total = 0.0;
  for (double c : acc.count.values()) total += c;
  result.mean_overlap = total / static_cast<double>(acc.count.size());

  const ColorImage average = normalize_accumulated(acc);
  const FusionOperator op(acc.count, problem.degradation, problem.beta);
  std::array<Plane, kChannels> planes;
  for (int c = 0; c < kChannels; ++c) {
    Plane rhs = acc.sum.plane(c);
    if (problem.beta > 0.0) {
      Plane data = degrade_adjoint_plane(problem.lr.plane(c), problem.degradation, w, h);
      auto r = rhs.values();
      auto d = data.values();
      for (std::size_t i = 0; i < r.size(); ++i) r[i] += problem.beta * d[i];
    }
    Eigen::VectorXd x = to_vector(average.plane(c));
    result.channels[c] = conjugate_residual(
        [&op](const Eigen::VectorXd& v) { return op.apply(v); }, to_vector(rhs), x,
        problem.cg_tol, problem.cg_max_iter);
    result.cg_warning = result.cg_warning || !result.channels[c].converged;
    planes[c] = to_plane(x, w, h);
  }
  result.image = ColorImage(std::move(planes));
  return result;
}

}  // namespace chroma_sr
