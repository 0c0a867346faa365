#include "chroma_sr/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "chroma_sr/errors.hpp"

namespace chroma_sr {

namespace {

struct Candidate {
  double distance2;
  int order;  // row-major scan position
  PatchIndex index;
};

bool by_distance_then_order(const Candidate& a, const Candidate& b) {
  if (a.distance2 != b.distance2) return a.distance2 < b.distance2;
  return a.order < b.order;
}

// Squared distance between the patch at (row, col) and a stacked vector,
// giving up once the partial sum reaches `bound`.
double patch_distance2(const ColorImage& img, int row, int col, const Vector& ref, int m_side,
                       double bound) {
  const int m = m_side * m_side;
  double s = 0.0;
  for (int c = 0; c < kChannels; ++c) {
    const Plane& p = img.plane(c);
    const double* base = ref.data() + c * m;
    for (int dr = 0; dr < m_side; ++dr) {
      for (int dc = 0; dc < m_side; ++dc) {
        const double d = p(row + dr, col + dc) - base[dc * m_side + dr];
        s += d * d;
      }
      if (s >= bound) return s;
    }
  }
  return s;
}

}  // namespace

std::vector<PatchMatch> find_similar_patches(const ColorImage& img, const PatchIndex& target,
                                             int m_side, int window, int s) {
  if (window < 1 || window % 2 == 0) {
    throw InvalidArgument("search window must be a positive odd size (got " +
                          std::to_string(window) + ")");
  }
  if (s < 1) throw InvalidArgument("group size must be >= 1");
  if (!patch_inside(img.width(), img.height(), target, m_side)) {
    throw InvalidArgument("target patch (" + std::to_string(target.row) + "," +
                          std::to_string(target.col) + ") is out of bounds");
  }
  const Vector ref = extract_stacked_patch(img, target, m_side);
  const int half = window / 2;
  const int r0 = std::max(0, target.row - half);
  const int r1 = std::min(img.height() - m_side, target.row + half);
  const int c0 = std::max(0, target.col - half);
  const int c1 = std::min(img.width() - m_side, target.col + half);

  std::vector<Candidate> cands;
  cands.reserve(static_cast<std::size_t>(r1 - r0 + 1) * (c1 - c0 + 1));
  int order = 0;
  const double inf = std::numeric_limits<double>::infinity();
  for (int r = r0; r <= r1; ++r) {
    for (int c = c0; c <= c1; ++c, ++order) {
      if (r == target.row && c == target.col) continue;
      cands.push_back({patch_distance2(img, r, c, ref, m_side, inf), order,
                       {r, c, target.scale_level}});
    }
  }
  const auto keep = std::min<std::size_t>(cands.size(), static_cast<std::size_t>(s - 1));
  std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(keep), cands.end(),
                    by_distance_then_order);

  std::vector<PatchMatch> out;
  out.reserve(keep + 1);
  out.push_back({target, 0.0});
  for (std::size_t i = 0; i < keep; ++i) out.push_back({cands[i].index, cands[i].distance2});
  return out;
}

Vector nlm_weights(const Matrix& group, double h) {
  if (!(h > 0.0)) throw InvalidArgument("NLM bandwidth h must be > 0");
  if (group.cols() < 1) throw InvalidArgument("NLM needs at least one column");
  const Vector d2 = (group.colwise() - group.col(0)).colwise().squaredNorm().transpose();
  // Shift by the smallest distance so the largest weight is exp(0).
  const double shift = d2.minCoeff();
  Vector w = (-(d2.array() - shift) / h).exp().matrix();
  w /= w.sum();
  return w;
}

Vector nlm_mean(const Matrix& group, double h) { return group * nlm_weights(group, h); }

PatchGroup assemble_group(const ColorImage& img, const PatchIndex& target,
                          const GroupingConfig& cfg) {
  const auto matches =
      find_similar_patches(img, target, cfg.patch_side, cfg.search_window, cfg.group_size);
  PatchGroup g;
  g.target = target;
  g.matrix.resize(stacked_length(cfg.patch_side), static_cast<Eigen::Index>(matches.size()));
  for (std::size_t j = 0; j < matches.size(); ++j) {
    g.members.push_back(matches[j].index);
    g.distances.push_back(matches[j].distance2);
    g.matrix.col(static_cast<Eigen::Index>(j)) =
        extract_stacked_patch(img, matches[j].index, cfg.patch_side);
  }
  g.nlm_mean = nlm_mean(g.matrix, cfg.h);
  g.detail = g.matrix.colwise() - g.nlm_mean;
  return g;
}

Matrix cross_scale_matches(const std::vector<ColorImage>& pyramid, const Vector& target_vec,
                           int m_side, int per_scale, std::vector<std::string>* warnings) {
  if (pyramid.empty()) throw InvalidArgument("cross_scale_matches: empty pyramid");
  if (per_scale < 1) throw InvalidArgument("cross_scale_matches: per_scale must be >= 1");
  if (target_vec.size() != stacked_length(m_side)) {
    throw InvalidArgument("cross_scale_matches: target vector length mismatch");
  }
  std::vector<PatchIndex> pooled;
  std::vector<Candidate> best;
  for (std::size_t level = 0; level < pyramid.size(); ++level) {
    const ColorImage& img = pyramid[level];
    if (img.width() < m_side || img.height() < m_side) {
      if (warnings) {
        warnings->push_back("pyramid level " + std::to_string(level) + " (" +
                            std::to_string(img.width()) + "x" + std::to_string(img.height()) +
                            ") is smaller than the patch; skipped");
      }
      continue;
    }
    best.clear();
    int order = 0;
    for (int r = 0; r + m_side <= img.height(); ++r) {
      for (int c = 0; c + m_side <= img.width(); ++c, ++order) {
        const bool full = static_cast<int>(best.size()) == per_scale;
        const double bound = full ? best.back().distance2 : std::numeric_limits<double>::infinity();
        const double d = patch_distance2(img, r, c, target_vec, m_side, bound);
        if (full && d >= bound) continue;
        // Scan order is increasing, so an equal distance never displaces an earlier match.
        Candidate cand{d, order, {r, c, static_cast<int>(level)}};
        auto pos = std::upper_bound(best.begin(), best.end(), cand, by_distance_then_order);
        best.insert(pos, cand);
        if (static_cast<int>(best.size()) > per_scale) best.pop_back();
      }
    }
    for (const auto& b : best) pooled.push_back(b.index);
  }
  Matrix out(target_vec.size(), static_cast<Eigen::Index>(pooled.size()));
  for (std::size_t j = 0; j < pooled.size(); ++j) {
    out.col(static_cast<Eigen::Index>(j)) =
        extract_stacked_patch(pyramid[pooled[j].scale_level], pooled[j], m_side);
  }
  return out;
}

MultiScaleBasis pca_basis(const Matrix& columns) {
  const Eigen::Index t = columns.cols();
  if (t < 2) throw InvalidArgument("pca_basis needs at least 2 columns (got " + std::to_string(t) + ")");
  const Vector mean = columns.rowwise().mean();
  const Matrix centred = columns.colwise() - mean;
  const Matrix scatter = (centred * centred.transpose()) / static_cast<double>(t);

  Eigen::SelfAdjointEigenSolver<Matrix> eig(scatter);
  if (eig.info() != Eigen::Success) throw NumericalError("pca_basis: eigendecomposition failed");

  const Eigen::Index n = scatter.rows();
  MultiScaleBasis out;
  out.basis.resize(n, n);
  out.eigenvalues.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    // Eigen returns ascending eigenvalues.
    const Eigen::Index src = n - 1 - k;
    out.eigenvalues[k] = std::max(0.0, eig.eigenvalues()[src]);
    Vector v = eig.eigenvectors().col(src);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v[arg] < 0.0) v = -v;
    out.basis.col(k) = v;
  }
  return out;
}

}  // namespace chroma_sr
