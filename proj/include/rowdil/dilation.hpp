#pragma once

// Truncated defect-space model of the minimal isometric dilation:
//   H = C^d (+) sum_{|w| < N} D,   D = Ran D_A,  D_A = (I - A^*A)^{1/2},
//   S_i (h, xi) = (A_i h, D_A(e_i (x) h) at the empty word + e_i (x) xi).
// Words of length N fall off the top, so relations are exact only on the
// interior (levels < N-1).

#include "rowdil/tuple.hpp"

#include <vector>

namespace rowdil {

struct FockWord {
  Word letters;
  int length() const { return static_cast<int>(letters.size()); }
};

struct Defect {
  Mat d_a;    // nd x nd
  Mat range;  // nd x k orthonormal
  int dim() const { return static_cast<int>(range.cols()); }
};

inline Defect defect(const RowContraction& t, const ToleranceConfig& cfg = {}) {
  const Mat row = t.row();
  const auto nd = row.cols();
  // Threshold before the square root: sqrt would lift 1e-16 round-off to
  // 1e-8, right at the rank cutoff.
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(Mat::Identity(nd, nd) - row.adjoint() * row));
  Eigen::VectorXd ev = es.eigenvalues();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < nd; ++i) {
    if (ev(i) > cfg.rank_rtol)
      keep.push_back(i);
    else
      ev(i) = 0.0;
  }
  Defect out;
  out.d_a = es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
  out.range = Mat(nd, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) out.range.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(keep[j]);
  return out;
}

inline long long words_below(int n, int level) {
  long long total = 0, p = 1;
  for (int m = 0; m < level; ++m, p *= n) total += p;
  return total;
}

struct TruncatedDilation {
  int n = 0;
  int d = 0;
  int level = 0;  // N
  int defect_dim = 0;
  Eigen::Index ambient_dim = 0;
  Eigen::Index interior_dim = 0;  // d + defect_dim * #{|w| < N-1}
  bool truncated = true;
  std::vector<Mat> S;
  Mat V_embed;

  // First coordinate of the defect copy sitting at word (level m, index p).
  Eigen::Index offset(int m, long long p) const {
    return d + static_cast<Eigen::Index>(defect_dim) * static_cast<Eigen::Index>(words_below(n, m) + p);
  }
};

inline TruncatedDilation build_dilation(const RowContraction& t, int N, const ToleranceConfig& cfg = {}) {
  if (N < 1) throw Error(ErrorKind::MalformedInput, "dilation level must be at least 1");
  auto def = defect(t, cfg);
  TruncatedDilation dil;
  dil.n = t.n();
  dil.d = t.d();
  dil.level = N;
  dil.defect_dim = def.dim();
  const int n = dil.n, d = dil.d, k = dil.defect_dim;
  dil.ambient_dim = d + static_cast<Eigen::Index>(k) * words_below(n, N);
  dil.interior_dim = d + static_cast<Eigen::Index>(k) * words_below(n, N - 1);
  dil.V_embed = Mat::Zero(dil.ambient_dim, d);
  dil.V_embed.topRows(d) = Mat::Identity(d, d);

  const Mat to_defect = def.range.adjoint() * def.d_a;  // k x nd
  for (int i = 0; i < n; ++i) {
    Mat s = Mat::Zero(dil.ambient_dim, dil.ambient_dim);
    s.topLeftCorner(d, d) = t[i];
    if (k > 0) s.block(d, 0, k, d) = to_defect.middleCols(static_cast<Eigen::Index>(i) * d, d);
    long long width = 1;  // n^m
    for (int m = 0; m + 1 < N; ++m, width *= n)
      for (long long p = 0; p < width; ++p)
        s.block(dil.offset(m + 1, i * width + p), dil.offset(m, p), k, k) = Mat::Identity(k, k);
    dil.S.push_back(std::move(s));
  }
  return dil;
}

struct CheckReport {
  double isometry_residual = 0;
  double orthogonality_residual = 0;
  double coinvariance_residual = 0;
  int minimality_rank = 0;
  Eigen::Index interior_dim = 0;
};

// Columns S_w V_embed for all |w| <= max_len, level by level.
inline Mat orbit_columns(const TruncatedDilation& dil, const Mat& start, int max_len) {
  std::vector<Mat> blocks{start};
  std::vector<Mat> frontier{start};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<Mat> next;
    for (const auto& s : dil.S)
      for (const auto& f : frontier) next.push_back(s * f);
    blocks.insert(blocks.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  Mat out(dil.ambient_dim, start.cols() * static_cast<Eigen::Index>(blocks.size()));
  for (std::size_t b = 0; b < blocks.size(); ++b)
    out.middleCols(static_cast<Eigen::Index>(b) * start.cols(), start.cols()) = blocks[b];
  return out;
}

inline CheckReport verify_dilation(const TruncatedDilation& dil, const ToleranceConfig& cfg = {}) {
  CheckReport r;
  r.interior_dim = dil.interior_dim;
  const auto J = dil.interior_dim;
  const Mat id = Mat::Identity(J, J);
  for (int i = 0; i < dil.n; ++i) {
    const auto si = dil.S[i].leftCols(J);
    for (int j = 0; j < dil.n; ++j) {
      Mat g = si.adjoint() * dil.S[j].leftCols(J);
      if (i == j)
        r.isometry_residual = std::max(r.isometry_residual, (g - id).norm());
      else
        r.orthogonality_residual = std::max(r.orthogonality_residual, g.norm());
    }
  }
  // Recover A_i from the top-left corner; the embedding is the first d coordinates.
  for (int i = 0; i < dil.n; ++i) {
    Mat a = dil.S[i].topLeftCorner(dil.d, dil.d);
    r.coinvariance_residual = std::max(
        r.coinvariance_residual, (dil.S[i].adjoint() * dil.V_embed - dil.V_embed * a.adjoint()).norm());
  }
  r.minimality_rank = numerical_rank(orbit_columns(dil, dil.V_embed, dil.level - 1), cfg.rank_rtol, 1.0);
  return r;
}

inline int level_one_wandering_dim(const RowContraction& t, const ToleranceConfig& cfg = {}) {
  auto dil = build_dilation(t, 2, cfg);
  Mat cols(dil.ambient_dim, dil.d * (dil.n + 1));
  cols.leftCols(dil.d) = dil.V_embed;
  for (int i = 0; i < dil.n; ++i) cols.middleCols(dil.d * (i + 1), dil.d) = dil.S[i] * dil.V_embed;
  int dim = numerical_rank(cols, cfg.rank_rtol, 1.0) - dil.d;
  if (dim < (t.n() - 1) * t.d() || dim > t.n() * t.d())
    throw Error(ErrorKind::Inconsistent, "level-one wandering dimension " + std::to_string(dim) + " out of bounds");
  return dim;
}

struct WoldSplit {
  Mat P_pure;   // ambient x ambient
  Mat P_cuntz;  // ambient x ambient, supported on the interior
  int wandering_rank = 0;        // rank of I - sum S_i S_i^* on V (+) level 0
  int interior_wandering_rank = 0;
  int pure_dim = 0;
  int cuntz_interior_dim = 0;
};

// I - sum S_i S_i^* restricted to the first `rows` coordinates. Exact on the
// interior: ranges of the S_i cover every level >= 1 there.
inline Mat wandering_block(const TruncatedDilation& dil, Eigen::Index rows) {
  Mat e = Mat::Identity(rows, rows);
  for (const auto& s : dil.S) e -= s.topRows(rows) * s.topRows(rows).adjoint();
  return hermitian_part(e);
}

inline WoldSplit wold_projection(const TruncatedDilation& dil, const RowContraction& t, const ToleranceConfig& cfg = {}) {
  if (t.d() != dil.d || t.n() != dil.n) throw Error(ErrorKind::DimensionMismatch, "dilation built from another tuple");
  WoldSplit w;
  const Eigen::Index level0 = dil.d + dil.defect_dim;
  w.wandering_rank = numerical_rank(wandering_block(dil, std::min(level0, dil.interior_dim)), cfg.rank_rtol, 1.0);
  Mat e_int = wandering_block(dil, dil.interior_dim);
  w.interior_wandering_rank = numerical_rank(e_int, cfg.rank_rtol, 1.0);

  Mat x = Mat::Zero(dil.ambient_dim, 0);
  Mat xr = range_basis(e_int, cfg.rank_rtol, 1.0);
  if (xr.cols() > 0) {
    x = Mat::Zero(dil.ambient_dim, xr.cols());
    x.topRows(dil.interior_dim) = xr;
  }
  Mat span = x.cols() ? range_basis(orbit_columns(dil, x, dil.level - 1), cfg.rank_rtol, 1.0)
                      : Mat(dil.ambient_dim, 0);
  w.pure_dim = static_cast<int>(span.cols());
  w.P_pure = projector(span);

  // interior vectors y with span^* y = 0
  Mat cz;
  if (span.cols() == 0)
    cz = Mat::Identity(dil.interior_dim, dil.interior_dim);
  else
    cz = nullspace(span.topRows(dil.interior_dim).adjoint(), 1e-10, 1.0);
  Mat c = Mat::Zero(dil.ambient_dim, cz.cols());
  c.topRows(dil.interior_dim) = cz;
  w.cuntz_interior_dim = static_cast<int>(cz.cols());
  w.P_cuntz = projector(c);
  if (w.wandering_rank != pure_rank(t, cfg))
    throw Error(ErrorKind::Inconsistent, "level-0 wandering rank differs from the pure rank");
  return w;
}

}  // namespace rowdil
