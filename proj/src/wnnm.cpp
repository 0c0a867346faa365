#include "chroma_sr/wnnm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include "json.hpp"

#include "chroma_sr/errors.hpp"

namespace chroma_sr {

namespace {

// Singular values and the smaller-side singular vectors, obtained from the
// eigendecomposition of the small Gram matrix. A thresholded reconstruction
// U f(S) V^T equals M V diag(f(s)/s) V^T (or U diag(f(s)/s) U^T M), so the
// other factor is never formed.
struct Spectrum {
  Vector s;   // descending
  Matrix Q;   // V when rows >= cols, otherwise U
  bool tall = true;
};

Spectrum checked_spectrum(const Matrix& M) {
  if (!M.allFinite()) {
    std::ostringstream os;
    os << "SVD input " << M.rows() << "x" << M.cols() << " contains non-finite entries";
    throw NumericalError(os.str());
  }
  Spectrum sp;
  sp.tall = M.rows() >= M.cols();
  const Matrix gram = sp.tall ? Matrix(M.transpose() * M) : Matrix(M * M.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  if (eig.info() != Eigen::Success || !eig.eigenvalues().allFinite()) {
    std::ostringstream os;
    os << "SVD of " << M.rows() << "x" << M.cols() << " matrix failed (||M||_F=" << M.norm()
       << ", condition of Gram matrix unavailable)";
    throw NumericalError(os.str());
  }
  const Eigen::Index n = gram.rows();
  sp.s.resize(n);
  sp.Q.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    sp.s[k] = std::sqrt(std::max(eig.eigenvalues()[n - 1 - k], 0.0));
    sp.Q.col(k) = eig.eigenvectors().col(n - 1 - k);
  }
  return sp;
}

Matrix shrink_reconstruct(const Matrix& M, const Spectrum& sp, const Vector& thresholds) {
  const Vector shrunk = (sp.s - thresholds).cwiseMax(0.0);
  Eigen::Index rank = 0;
  while (rank < shrunk.size() && shrunk[rank] > 0.0) ++rank;
  if (rank == 0) return Matrix::Zero(M.rows(), M.cols());
  const Vector ratio = shrunk.head(rank).cwiseQuotient(sp.s.head(rank));
  const auto Q = sp.Q.leftCols(rank);
  if (sp.tall) return (M * Q) * ratio.asDiagonal() * Q.transpose();
  return Q * ratio.asDiagonal() * (Q.transpose() * M);
}

}  // namespace

ChannelWeight lambda_weights(const NoiseProfile& profile, int m) {
  ChannelWeight w;
  w.lambda_diag.resize(kChannels * m);
  for (int c = 0; c < kChannels; ++c) {
    const double sigma = profile.sigma[c];
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
      throw InvalidArgument("lambda_weights: noise sigma must be positive and finite");
    }
    w.lambda_diag.segment(c * m, m).setConstant(1.0 / sigma);
  }
  return w;
}

ChannelWeight uniform_lambda(double value, int m) {
  if (!(value > 0.0)) throw InvalidArgument("uniform_lambda: value must be > 0");
  return {Vector::Constant(kChannels * m, value)};
}

Matrix soft_threshold(const Matrix& v, double alpha) {
  if (alpha < 0.0) throw InvalidArgument("soft_threshold: alpha must be >= 0");
  return v.unaryExpr([alpha](double x) {
    const double mag = std::abs(x) - alpha;
    if (mag <= 0.0) return 0.0;
    return x > 0.0 ? mag : -mag;
  });
}

Vector soft_threshold(const Vector& v, double alpha) {
  return soft_threshold(Matrix(v), alpha).col(0);
}

Vector sv_weights(const Vector& sigma_vals, double C, double eps) {
  Vector w = (C / (sigma_vals.array() + eps)).matrix();
  for (Eigen::Index k = 1; k < w.size(); ++k) {
    if (w[k] < w[k - 1]) {
      throw std::logic_error("sv_weights: weights must be non-decreasing (input singular values "
                             "not in descending order)");
    }
  }
  return w;
}

Matrix wnnm_prox(const Matrix& M, const Vector& w, double tau) {
  if (!(tau > 0.0)) throw InvalidArgument("wnnm_prox: tau must be > 0");
  const Eigen::Index n = std::min(M.rows(), M.cols());
  if (w.size() != n) throw InvalidArgument("wnnm_prox: need one weight per singular value");
  for (Eigen::Index k = 1; k < n; ++k) {
    if (w[k] < w[k - 1]) throw InvalidArgument("wnnm_prox: weights must be non-decreasing");
  }
  if (w.isZero(0.0)) return M;
  return shrink_reconstruct(M, checked_spectrum(M), w / tau);
}

Matrix wnnm_prox_reweighted(const Matrix& M, double C, double eps, double tau) {
  if (!(tau > 0.0)) throw InvalidArgument("wnnm_prox: tau must be > 0");
  const Spectrum sp = checked_spectrum(M);
  const Vector w = sv_weights(sp.s, C, eps);
  return shrink_reconstruct(M, sp, w / tau);
}

Matrix pca_prior(const MultiScaleBasis& B, const Matrix& X_data, double alpha) {
  if (B.basis.rows() != X_data.rows()) throw InvalidArgument("pca_prior: basis/data row mismatch");
  return B.basis * soft_threshold(Matrix(B.basis.transpose() * X_data), alpha);
}

Matrix x_update(const Matrix& X_data, const ChannelWeight& lam, const Matrix& prior,
                const Matrix& F_var, const Matrix& dual, double rho) {
  const Eigen::Index rows = X_data.rows();
  if (lam.lambda_diag.size() != rows || prior.rows() != rows || F_var.rows() != rows ||
      dual.rows() != rows || prior.cols() != X_data.cols() || F_var.cols() != X_data.cols() ||
      dual.cols() != X_data.cols()) {
    throw InvalidArgument("x_update: inconsistent shapes");
  }
  const Eigen::ArrayXd lam2 = lam.lambda_diag.array().square();
  const Eigen::ArrayXd inv = 1.0 / (lam2 + 1.0 + 0.5 * rho);
  Matrix rhs = prior + 0.5 * rho * F_var - dual;
  rhs += (X_data.array().colwise() * lam2).matrix();
  return (rhs.array().colwise() * inv).matrix();
}

Matrix x_update(const Matrix& X_data, const ChannelWeight& lam, const MultiScaleBasis& B,
                double alpha, const Matrix& F_var, const Matrix& dual, double rho) {
  return x_update(X_data, lam, pca_prior(B, X_data, alpha), F_var, dual, rho);
}

double group_objective(const Matrix& Z, const Matrix& X_data, const ChannelWeight& lam,
                       const Matrix& prior, double C, double eps) {
  const Matrix weighted = (X_data - Z).array().colwise() * lam.lambda_diag.array();
  double value = weighted.squaredNorm() + (Z - prior).squaredNorm();
  const Vector s = Eigen::JacobiSVD<Matrix>(Z).singularValues();
  for (Eigen::Index k = 0; k < s.size(); ++k) value += C * s[k] / (s[k] + eps);
  return value;
}

AdmmResult admm_solve(const Matrix& X_data, const ChannelWeight& lam, const MultiScaleBasis& B,
                      const AdmmConfig& cfg,
                      const std::function<void(const AdmmTraceEntry&)>& trace) {
  if (!(cfg.rho0 > 0.0) || !(cfg.eta > 1.0) || cfg.max_iter < 1 || cfg.alpha < 0.0) {
    throw InvalidArgument("admm_solve: need rho0 > 0, eta > 1, max_iter >= 1, alpha >= 0");
  }
  const Matrix prior = pca_prior(B, X_data, cfg.alpha);
  Matrix Z = Matrix::Zero(X_data.rows(), X_data.cols());
  Matrix F = Z;
  Matrix gamma = Z;
  double rho = cfg.rho0;

  AdmmResult result;
  double previous = std::numeric_limits<double>::infinity();
  int growth = 0;
  double first = 0.0;
  for (int k = 0; k < cfg.max_iter; ++k) {
    // The augmented Lagrangian <G, Z-F> + (rho/2)||Z-F||^2 contributes G/2
    // after normalizing the Z stationarity condition by 2.
    Z = x_update(X_data, lam, prior, F, 0.5 * gamma, rho);
    Matrix F_next = wnnm_prox_reweighted(Z + gamma / rho, cfg.C, cfg.eps, rho);
    const double step = (F_next - F).norm() / std::max(1.0, F_next.norm());
    F = std::move(F_next);
    gamma += rho * (Z - F);

    const double residual = (Z - F).norm() / std::max(1.0, Z.norm());
    result.iterations = k + 1;
    result.primal_residual = residual;
    result.dual_residual = step;
    if (trace) {
      trace({k + 1, rho, residual, group_objective(F, X_data, lam, prior, cfg.C, cfg.eps)});
    }
    rho *= cfg.eta;

    if (residual < cfg.tol && step < cfg.tol) {
      result.converged = true;
      break;
    }
    if (k == 0) first = residual;
    growth = residual > previous ? growth + 1 : 0;
    previous = residual;
    const bool blown = !std::isfinite(residual);
    if (blown || (growth >= cfg.divergence_window && residual > first)) {
      std::ostringstream os;
      if (blown) {
        os << "primal residual is not finite";
      } else {
        os << "primal residual grew for " << growth
           << " consecutive iterations past its first-iteration value " << first;
      }
      os << " (iter " << k + 1 << ", rho=" << rho / cfg.eta << ", residual=" << residual << ")";
      result.diverged = true;
      result.diagnostics = os.str();
      break;
    }
  }
  result.solution = std::move(F);
  return result;
}

std::string trace_to_json_line(const AdmmTraceEntry& e) {
  nlohmann::json j = {{"iter", e.iter},
                      {"rho", e.rho},
                      {"primal_residual", e.primal_residual},
                      {"objective", e.objective}};
  return j.dump();
}

}  // namespace chroma_sr
