#pragma once

#include "rowdil/algebra.hpp"
#include "rowdil/intertwine.hpp"
#include "rowdil/tuple.hpp"

#include <random>
#include <string>
#include <vector>

namespace rowdil {

struct Subspace {
  int ambient_dim = 0;
  Mat basis;  // ambient_dim x k, orthonormal columns

  Subspace() = default;
  Subspace(int ambient, Mat b) : ambient_dim(ambient), basis(std::move(b)) {}

  static Subspace zero(int ambient) { return {ambient, Mat(ambient, 0)}; }
  static Subspace full(int ambient) { return {ambient, Mat::Identity(ambient, ambient)}; }

  int dim() const { return static_cast<int>(basis.cols()); }
  Mat projector() const { return basis * basis.adjoint(); }
};

inline RowContraction compress(const RowContraction& t, const Mat& q) {
  return RowContraction(restrict_to(t.matrices(), q));
}

// max_i |(I - P) A_i^* P| for the subspace spanned by q.
inline double costar_leak(const RowContraction& t, const Mat& q) {
  if (q.cols() == 0) return 0.0;
  Mat p = projector(q);
  Mat comp = Mat::Identity(t.d(), t.d()) - p;
  double r = 0;
  for (const auto& a : t.matrices()) r = std::max(r, (comp * a.adjoint() * q).norm());
  return r;
}

inline Subspace cuntz_subspace(const RowContraction& t, const ToleranceConfig& cfg) {
  Mat pinf = phi_infinity(t, cfg);
  Eigen::SelfAdjointEigenSolver<Mat> es(pinf);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) >= 1.0 - cfg.rank_rtol) keep.push_back(i);
  Mat q(t.d(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) q.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(keep[j]);
  if (q.cols() > 0) {
    if (costar_leak(t, q) > 1e-8) throw Error(ErrorKind::Inconsistent, "Cuntz subspace is not co-invariant");
    auto c = compress(t, q);
    if (c.defect().norm() > 1e-8) throw Error(ErrorKind::Inconsistent, "compression to the Cuntz subspace is not Cuntz");
  }
  return {t.d(), q};
}

// Smallest member of a seeded family of Krylov closures, refined until the
// restricted adjoint algebra is full (Burnside).
inline Subspace minimal_costar_invariant(const RowContraction& t, const Subspace& within, const ToleranceConfig& cfg) {
  if (within.dim() == 0) throw Error(ErrorKind::SearchFailed, "empty search space");
  if (costar_leak(t, within.basis) > 1e-8)
    throw Error(ErrorKind::Inconsistent, "search space is not invariant under the adjoints");
  const auto gens = restrict_to(adjoints(t.matrices()), within.basis);
  std::mt19937_64 rng(cfg.seed);

  Mat current = Mat::Identity(within.dim(), within.dim());
  for (int attempt = 0;; ++attempt) {
    auto g = restrict_to(gens, current);
    const auto m = current.cols();
    if (burnside_irreducible(g, m, cfg.rank_rtol)) return {within.ambient_dim, within.basis * current};
    if (attempt >= 20)
      throw Error(ErrorKind::SearchFailed, "no certified minimal subspace after 20 restarts; smallest candidate has dim " +
                                               std::to_string(m));
    Mat coeff = random_gaussian(static_cast<Eigen::Index>(g.size()), 1, rng);
    Mat r = Mat::Zero(m, m);
    for (std::size_t i = 0; i < g.size(); ++i) r += coeff(static_cast<Eigen::Index>(i), 0) * g[i];
    Eigen::ComplexEigenSolver<Mat> es(r);
    Mat best = Mat::Identity(m, m);
    for (Eigen::Index j = 0; j < m; ++j) {
      Mat c = word_closure(g, es.eigenvectors().col(j), cfg.rank_rtol);
      if (c.cols() > 0 && c.cols() < best.cols()) best = c;
    }
    if (best.cols() < m) current = current * best;
  }
}

struct CuntzBlock {
  Subspace block_basis;             // the representative copy V_g
  int d_g = 0;
  int m_g = 0;
  RowContraction rep_tuple;         // compression of A to V_g
  std::vector<Subspace> copies;     // m_g members, the first being V_g
  std::vector<Mat> intertwiners;    // W_j with W_j rep_i W_j^* = copy_i
};

struct TildeV {
  Subspace span;
  std::vector<Subspace> family;
  std::vector<CuntzBlock> blocks;
};

inline std::vector<CuntzBlock> group_family(const RowContraction& t, const std::vector<Subspace>& family,
                                            const ToleranceConfig& cfg) {
  std::vector<CuntzBlock> blocks;
  for (const auto& member : family) {
    auto c = compress(t, member.basis);
    bool placed = false;
    for (auto& b : blocks) {
      if (b.d_g != member.dim()) continue;
      auto space = joint_intertwiners(b.rep_tuple, c, IntertwinerMode::Direct, cfg);
      if (space.dim() == 0) continue;
      if (space.dim() > 1)
        throw Error(ErrorKind::AmbiguousIntertwinerSpace, "minimal blocks with a multi-dimensional intertwiner space");
      auto u = scale_to_unitary(space.basis[0], 1e-8);
      if (!u) {
        if (condition_number(space.basis[0]) <= 1e8 && !scale_to_unitary(space.basis[0], 1e-6))
          throw Error(ErrorKind::BlockingFailure, "invertible intertwiner between blocks is not a scaled unitary");
        u = scale_to_unitary(space.basis[0], 1e-6);
        if (!u) continue;
      }
      b.copies.push_back(member);
      b.intertwiners.push_back(*u);
      ++b.m_g;
      placed = true;
      break;
    }
    if (placed) continue;
    if (c.defect().norm() > 1e-8) throw Error(ErrorKind::Inconsistent, "minimal block is not Cuntz");
    CuntzBlock b;
    b.block_basis = member;
    b.d_g = member.dim();
    b.m_g = 1;
    b.rep_tuple = c;
    b.copies.push_back(member);
    b.intertwiners.push_back(Mat::Identity(b.d_g, b.d_g));
    blocks.push_back(std::move(b));
  }
  return blocks;
}

inline TildeV tilde_V(const RowContraction& t, const ToleranceConfig& cfg) {
  validate(t, cfg);
  TildeV out;
  out.span = Subspace::zero(t.d());
  Subspace vc = cuntz_subspace(t, cfg);
  if (vc.dim() == 0) return out;

  // Work in coordinates of V_c, where the compressed tuple is Cuntz.
  const auto c = compress(t, vc.basis);
  const int k = vc.dim();
  Mat found(k, 0);
  for (int round = 0; round <= k; ++round) {
    Mat reach = found.cols() ? word_closure(c.matrices(), found, cfg.rank_rtol) : Mat(k, 0);
    Mat rem = orth_complement(reach, k);
    if (rem.cols() == 0) break;
    if (costar_leak(c, rem) > 1e-8) throw Error(ErrorKind::Inconsistent, "remainder is not co-invariant");
    ToleranceConfig sub = cfg;
    sub.seed = cfg.seed + static_cast<std::uint64_t>(round);
    Subspace m = minimal_costar_invariant(c, Subspace(k, rem), sub);
    out.family.emplace_back(t.d(), vc.basis * m.basis);
    Mat grown(k, found.cols() + m.dim());
    grown << found, m.basis;
    found = grown;
  }
  Mat span = vc.basis * found;
  out.span = Subspace(t.d(), span);
  out.blocks = group_family(t, out.family, cfg);

  int expected = 0;
  for (const auto& b : out.blocks) expected += b.m_g * b.m_g;
  int fixed = static_cast<int>(fixed_point_space(compress(t, span), cfg).size());
  if (fixed != expected)
    throw Error(ErrorKind::IncompleteFamily, "fixed-point space of the compression has dimension " +
                                                 std::to_string(fixed) + ", block multiplicities give " +
                                                 std::to_string(expected));
  return out;
}

inline std::vector<CuntzBlock> wedderburn_blocks(const RowContraction& t, const ToleranceConfig& cfg) {
  return tilde_V(t, cfg).blocks;
}

inline bool is_pure(const RowContraction& t, const ToleranceConfig& cfg) {
  bool analytic = op_norm(phi_infinity(t, cfg)) <= std::max(cfg.rank_rtol, 100 * cfg.fix_atol);
  Mat ran = range_basis(t.defect(), cfg.rank_rtol, 1.0);
  bool algebraic = ran.cols() > 0 && word_closure(t.matrices(), ran, cfg.rank_rtol).cols() == t.d();
  if (analytic != algebraic)
    throw Error(ErrorKind::Inconsistent, std::string("purity: Phi^inf(I) test says ") + (analytic ? "pure" : "not pure") +
                                             ", cyclicity of the defect range says " +
                                             (algebraic ? "pure" : "not pure"));
  return analytic;
}

enum class Irreducibility { PureRankOne, CuntzIrreducible, Reducible };

inline const char* irreducibility_name(Irreducibility i) {
  switch (i) {
    case Irreducibility::PureRankOne: return "PureRankOne";
    case Irreducibility::CuntzIrreducible: return "CuntzIrreducible";
    case Irreducibility::Reducible: return "Reducible";
  }
  return "Reducible";
}

inline Irreducibility is_irreducible(const RowContraction& t, const ToleranceConfig& cfg) {
  auto v = validate(t, cfg);
  const int pr = pure_rank(t, cfg);
  const bool pure = is_pure(t, cfg);
  const auto fixed = fixed_point_space(t, cfg);

  const bool one_prime = pr == 1 && pure;
  const bool two_prime = fixed.size() == 1 && v.is_cuntz;

  Mat ran = range_basis(t.defect(), cfg.rank_rtol, 1.0);
  const bool one = ran.cols() == 1 && word_closure(t.matrices(), ran, cfg.rank_rtol).cols() == t.d();
  bool two = false;
  if (v.is_cuntz) {
    auto m = minimal_costar_invariant(t, Subspace::full(t.d()), cfg);
    two = word_closure(t.matrices(), m.basis, cfg.rank_rtol).cols() == t.d();
  }
  if (one != one_prime || two != two_prime)
    throw Error(ErrorKind::Inconsistent, "subspace and fixed-point irreducibility criteria disagree");
  if (one_prime) return Irreducibility::PureRankOne;
  if (two_prime) return Irreducibility::CuntzIrreducible;
  return Irreducibility::Reducible;
}

struct BlockSummary {
  int d = 0;
  int m = 0;
};

struct StructureReport {
  int pure_rank = 0;
  int dim_Vc = 0;
  int dim_tildeV = 0;
  std::vector<BlockSummary> blocks;
  int alpha = 0;
  bool is_pure = false;
  bool is_cuntz = false;
  Irreducibility irreducibility = Irreducibility::Reducible;
  Mat basis_tildeV;
};

inline StructureReport structure_report(const RowContraction& t, const ToleranceConfig& cfg) {
  StructureReport r;
  auto v = validate(t, cfg);
  r.is_cuntz = v.is_cuntz;
  r.pure_rank = pure_rank(t, cfg);
  r.dim_Vc = cuntz_subspace(t, cfg).dim();
  auto tv = tilde_V(t, cfg);
  r.dim_tildeV = tv.span.dim();
  r.basis_tildeV = tv.span.basis;
  int weighted = 0;
  for (const auto& b : tv.blocks) {
    r.blocks.push_back({b.d_g, b.m_g});
    weighted += b.d_g * b.m_g;
  }
  if (weighted != r.dim_tildeV) throw Error(ErrorKind::Inconsistent, "block dimensions do not add up to dim tilde V");
  r.alpha = (t.n() - 1) * weighted + r.pure_rank;
  r.is_pure = is_pure(t, cfg);
  r.irreducibility = is_irreducible(t, cfg);
  return r;
}

}  // namespace rowdil
