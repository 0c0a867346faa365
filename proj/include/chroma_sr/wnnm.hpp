#pragma once

#include <functional>
#include <string>

#include "chroma_sr/grouping.hpp"
#include "chroma_sr/noise.hpp"
#include "chroma_sr/patch.hpp"

namespace chroma_sr {

/// Diagonal of the channel data weight: 1/sigma_l repeated over each
/// channel's m rows, blocks in r, g, b order.
struct ChannelWeight {
  Vector lambda_diag;
};

ChannelWeight lambda_weights(const NoiseProfile& profile, int m);
/// Every entry equal to `value` (used to disable channel adaptivity).
ChannelWeight uniform_lambda(double value, int m);

/// sign(v) * max(|v| - alpha, 0), elementwise; |v| == alpha maps to 0.
Matrix soft_threshold(const Matrix& v, double alpha);
Vector soft_threshold(const Vector& v, double alpha);

/// Singular-value weights C / (sigma_k + eps); non-decreasing for a
/// non-increasing input. Throws std::logic_error if that ordering breaks.
Vector sv_weights(const Vector& sigma_vals, double C, double eps);

/// Weighted singular value thresholding: U diag(max(s_k - w_k/tau, 0)) V^T.
/// Solves argmin_Z (tau/2)||Z - M||_F^2 + sum_k w_k s_k(Z) for non-decreasing w.
Matrix wnnm_prox(const Matrix& M, const Vector& w, double tau);

/// Reweighted variant: weights come from the singular values of M itself
/// (w_k = C / (s_k(M) + eps)). Sharing one SVD for weights and shrinkage.
Matrix wnnm_prox_reweighted(const Matrix& M, double C, double eps, double tau);

/// B * S(B^T X, alpha): the multi-scale detail prior target.
Matrix pca_prior(const MultiScaleBasis& B, const Matrix& X_data, double alpha);

/// Row-diagonal solve (L^2 + I + rho/2 I) Z = L^2 X_data + P + (rho/2) F - dual,
/// with L = diag(lambda). `prior` is pca_prior(...) for the group.
Matrix x_update(const Matrix& X_data, const ChannelWeight& lam, const Matrix& prior,
                const Matrix& F_var, const Matrix& dual, double rho);
/// Convenience form that builds the prior from the basis.
Matrix x_update(const Matrix& X_data, const ChannelWeight& lam, const MultiScaleBasis& B,
                double alpha, const Matrix& F_var, const Matrix& dual, double rho);

struct AdmmConfig {
  double rho0 = 1.0;
  double eta = 1.02;
  double alpha = 0.8;
  int max_iter = 360;
  /// Stops once both ||X - F|| / max(1, ||X||) and the step
  /// ||F_k - F_{k-1}|| / max(1, ||F_k||) are below tol.
  double tol = 1e-4;
  double C = 1.0;
  double eps = 1e-16;
  /// Divergence: the residual is non-finite, or it grew on this many
  /// consecutive iterations and now exceeds its first-iteration value.
  /// Reweighting makes the residual oscillate on the way to consensus, so
  /// growth alone is not treated as divergence.
  int divergence_window = 20;
};

/// Per-iteration trace entry; see admm_solve's `trace` callback.
struct AdmmTraceEntry {
  int iter;
  double rho;
  double primal_residual;
  double objective;
};

struct AdmmResult {
  Matrix solution;  // F at exit, the low-rank iterate
  int iterations = 0;
  double primal_residual = 0.0;  // ||X - F||_F / max(1, ||X||_F) at exit
  double dual_residual = 0.0;    // ||F_k - F_{k-1}||_F / max(1, ||F_k||_F) at exit
  bool converged = false;
  bool diverged = false;
  std::string diagnostics;
};

/// ||L (X_data - Z)||^2 + ||Z - prior||^2 + sum_k w_k s_k(Z), with the
/// reweighted w_k = C / (s_k(Z) + eps).
double group_objective(const Matrix& Z, const Matrix& X_data, const ChannelWeight& lam,
                       const Matrix& prior, double C, double eps);

/// ADMM on the channel-weighted WNNM + PCA-detail problem of one group's
/// detail matrix. Starts from zero iterates; rho grows by eta each iteration.
AdmmResult admm_solve(const Matrix& X_data, const ChannelWeight& lam, const MultiScaleBasis& B,
                      const AdmmConfig& cfg,
                      const std::function<void(const AdmmTraceEntry&)>& trace = {});

inline AdmmResult admm_solve(const PatchGroup& group, const ChannelWeight& lam,
                             const MultiScaleBasis& B, const AdmmConfig& cfg) {
  return admm_solve(group.detail, lam, B, cfg);
}

/// One JSON line per trace entry, suitable for convergence debugging.
std::string trace_to_json_line(const AdmmTraceEntry& e);

}  // namespace chroma_sr
