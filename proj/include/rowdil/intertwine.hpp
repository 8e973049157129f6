#pragma once

// Intertwiner spaces {X : X A_i = B_i X} as the nullspace of the stacked
// Sylvester system, and the unitary-equivalence decision built on them.

#include "rowdil/algebra.hpp"
#include "rowdil/tuple.hpp"

#include <optional>
#include <random>

namespace rowdil {

enum class IntertwinerMode { Direct, Adjoint };

struct IntertwinerSpace {
  IntertwinerMode mode = IntertwinerMode::Direct;
  std::vector<Mat> basis;  // d_B x d_A, Frobenius-orthonormal
  int dim() const { return static_cast<int>(basis.size()); }
};

inline Mat sylvester_stack(const std::vector<Mat>& as, const std::vector<Mat>& bs) {
  const Eigen::Index da = as.front().rows();
  const Eigen::Index db = bs.front().rows();
  const Eigen::Index blk = da * db;
  const Mat ia = Mat::Identity(da, da);
  const Mat ib = Mat::Identity(db, db);
  Mat m(blk * static_cast<Eigen::Index>(as.size()), blk);
  for (std::size_t i = 0; i < as.size(); ++i)
    m.middleRows(static_cast<Eigen::Index>(i) * blk, blk) = kron(as[i].transpose(), ib) - kron(ia, bs[i]);
  return m;
}

inline IntertwinerSpace solve_intertwiners(const std::vector<Mat>& as, const std::vector<Mat>& bs, double rtol,
                                           IntertwinerMode mode) {
  if (as.size() != bs.size()) throw Error(ErrorKind::DimensionMismatch, "tuples have different n");
  const Eigen::Index db = bs.front().rows();
  // Scale the cutoff by the tuples themselves: for equal inputs the stacked
  // matrix is pure round-off and must not be ranked against itself.
  double scale = 0;
  for (const auto& m : as) scale = std::max(scale, op_norm(m));
  for (const auto& m : bs) scale = std::max(scale, op_norm(m));
  Mat ns = nullspace(sylvester_stack(as, bs), rtol, scale);
  IntertwinerSpace out;
  out.mode = mode;
  for (Eigen::Index j = 0; j < ns.cols(); ++j) out.basis.push_back(unvec(ns.col(j), db));
  return out;
}

inline IntertwinerSpace joint_intertwiners(const RowContraction& a, const RowContraction& b, IntertwinerMode mode,
                                           const ToleranceConfig& cfg) {
  if (a.n() != b.n()) throw Error(ErrorKind::DimensionMismatch, "tuples have different n");
  if (mode == IntertwinerMode::Direct) return solve_intertwiners(a.matrices(), b.matrices(), cfg.rank_rtol, mode);
  return solve_intertwiners(adjoints(a.matrices()), adjoints(b.matrices()), cfg.rank_rtol, mode);
}

inline double intertwining_residual(const RowContraction& a, const RowContraction& b, const Mat& x) {
  double r = 0;
  for (int i = 0; i < a.n(); ++i) r = std::max(r, (x * a[i] - b[i] * x).norm());
  return r;
}

struct UnitaryMatch {
  bool equivalent = false;
  std::optional<Mat> u;  // U A_i = B_i U
};

// X with X^* X = s I for a scalar s > 0, rescaled to a unitary.
inline std::optional<Mat> scale_to_unitary(const Mat& x, double tol) {
  if (x.rows() != x.cols()) return std::nullopt;
  Mat g = x.adjoint() * x;
  double s = g.trace().real() / static_cast<double>(g.rows());
  if (s <= 0) return std::nullopt;
  if ((g - s * Mat::Identity(g.rows(), g.cols())).norm() > tol * s) return std::nullopt;
  return Mat(x / std::sqrt(s));
}

inline UnitaryMatch unitarily_equivalent_tuples(const RowContraction& a, const RowContraction& b,
                                                const ToleranceConfig& cfg) {
  UnitaryMatch out;
  if (a.n() != b.n() || a.d() != b.d()) return out;
  auto space = joint_intertwiners(a, b, IntertwinerMode::Direct, cfg);
  if (space.dim() == 0) return out;
  if (space.dim() == 1) {
    // Any unitary intertwiner is a multiple of the generator.
    auto u = scale_to_unitary(space.basis[0], 1e-8);
    if (u && intertwining_residual(a, b, *u) <= 1e-8) {
      out.equivalent = true;
      out.u = *u;
    }
    return out;
  }
  const auto k = a.d();
  if (burnside_irreducible(a.matrices(), k, cfg.rank_rtol) && burnside_irreducible(b.matrices(), k, cfg.rank_rtol))
    throw Error(ErrorKind::AmbiguousIntertwinerSpace,
                "intertwiner space of dimension " + std::to_string(space.dim()) + " between irreducible tuples");

  // Reducible inputs: intertwiners of the *-closed tuples form a space whose
  // invertible elements have unitary polar parts.
  std::vector<Mat> as = a.matrices(), bs = b.matrices();
  for (int i = 0; i < a.n(); ++i) {
    as.push_back(a[i].adjoint());
    bs.push_back(b[i].adjoint());
  }
  auto star = solve_intertwiners(as, bs, cfg.rank_rtol, IntertwinerMode::Direct);
  if (star.dim() == 0) return out;
  std::mt19937_64 rng(cfg.seed);
  Mat c = random_gaussian(star.dim(), 1, rng);
  Mat y = Mat::Zero(k, k);
  for (int j = 0; j < star.dim(); ++j) y += c(j, 0) * star.basis[j];
  if (condition_number(y) > 1e8) return out;
  Eigen::JacobiSVD<Mat> svd(y, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat u = svd.matrixU() * svd.matrixV().adjoint();
  if (intertwining_residual(a, b, u) <= 1e-8) {
    out.equivalent = true;
    out.u = u;
  }
  return out;
}

}  // namespace rowdil
