#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace chroma_sr {

struct CgReport {
  int iterations = 0;
  double relative_residual = 0.0;  // ||b - A x|| / ||b|| of the returned iterate
  bool converged = false;
  std::vector<double> residual_history;  // relative residual per iterate, starting at x0
};

/// Conjugate residual method for a symmetric positive definite operator
/// given only through its action. Same recurrences and cost as conjugate
/// gradient (one application per iteration) but each step minimizes the
/// residual norm along its search direction, so the residual never grows.
/// Starts from `x` and overwrites it with the iterate of smallest residual.
inline CgReport conjugate_residual(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply, const Eigen::VectorXd& b,
    Eigen::VectorXd& x, double tol, int max_iter) {
  CgReport report;
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    x.setZero();
    report.converged = true;
    report.residual_history.push_back(0.0);
    return report;
  }
  Eigen::VectorXd r = b - apply(x);
  Eigen::VectorXd Ar = apply(r);
  Eigen::VectorXd p = r;
  Eigen::VectorXd Ap = Ar;
  double rAr = r.dot(Ar);
  double rel = r.norm() / bnorm;
  report.residual_history.push_back(rel);
  Eigen::VectorXd best = x;
  double best_rel = rel;
  int k = 0;
  while (rel >= tol && k < max_iter) {
    const double ApAp = Ap.squaredNorm();
    if (!(ApAp > 0.0) || !(rAr > 0.0)) break;  // breakdown: operator not SPD along p
    const double step = r.dot(Ap) / ApAp;
    x += step * p;
    r -= step * Ap;
    Ar = apply(r);
    const double rAr_next = r.dot(Ar);
    const double beta = rAr_next / rAr;
    p = r + beta * p;
    Ap = Ar + beta * Ap;
    rAr = rAr_next;
    rel = r.norm() / bnorm;
    ++k;
    report.residual_history.push_back(rel);
    if (rel < best_rel) {
      best_rel = rel;
      best = x;
    }
  }
  report.iterations = k;
  report.converged = best_rel < tol;
  report.relative_residual = best_rel;
  x = std::move(best);
  return report;
}

}  // namespace chroma_sr
