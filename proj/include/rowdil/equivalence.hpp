#pragma once

#include "rowdil/intertwine.hpp"
#include "rowdil/structure.hpp"

#include <array>
#include <optional>
#include <random>
#include <string>

namespace rowdil {

struct BlockPairing {
  int a_block = 0;
  int b_block = 0;
  Mat u;  // u rep_a = rep_b u
};

struct ComparisonReport {
  std::string mode = "unitary";
  bool verdict = false;
  bool undecided = false;
  std::optional<Mat> witness;
  int pure_rank_a = 0;
  int pure_rank_b = 0;
  std::vector<BlockSummary> blocks_a;
  std::vector<BlockSummary> blocks_b;
  std::vector<BlockPairing> matching;
  bool blocks_match = false;
  double witness_residual = 0;
  std::string note;
};

namespace detail {

struct BlockMatch {
  bool ok = false;
  std::vector<BlockPairing> pairs;
};

inline BlockMatch match_blocks(const std::vector<CuntzBlock>& a, const std::vector<CuntzBlock>& b,
                               const ToleranceConfig& cfg) {
  BlockMatch out;
  if (a.size() != b.size()) return out;
  std::vector<bool> used(b.size(), false);
  for (std::size_t i = 0; i < a.size(); ++i) {
    bool found = false;
    for (std::size_t j = 0; j < b.size() && !found; ++j) {
      if (used[j] || a[i].d_g != b[j].d_g || a[i].m_g != b[j].m_g) continue;
      auto m = unitarily_equivalent_tuples(a[i].rep_tuple, b[j].rep_tuple, cfg);
      if (!m.equivalent) continue;
      used[j] = true;
      found = true;
      out.pairs.push_back({static_cast<int>(i), static_cast<int>(j), *m.u});
    }
    if (!found) return out;
  }
  out.ok = true;
  return out;
}

// Partial isometry from tilde V_A onto tilde V_B assembled copy by copy.
inline Mat assemble_witness(const std::vector<CuntzBlock>& a, const std::vector<CuntzBlock>& b,
                            const std::vector<BlockPairing>& pairs, int da, int db) {
  Mat u = Mat::Zero(db, da);
  for (const auto& p : pairs) {
    const auto& ba = a[p.a_block];
    const auto& bb = b[p.b_block];
    for (int j = 0; j < ba.m_g; ++j) {
      Mat ja = ba.copies[j].basis * ba.intertwiners[j];
      Mat jb = bb.copies[j].basis * bb.intertwiners[j];
      u += jb * p.u * ja.adjoint();
    }
  }
  return u;
}

}  // namespace detail

inline ComparisonReport compare_unitary(const RowContraction& a, const RowContraction& b, const ToleranceConfig& cfg) {
  ComparisonReport r;
  r.mode = "unitary";
  validate(a, cfg);
  validate(b, cfg);
  r.pure_rank_a = pure_rank(a, cfg);
  r.pure_rank_b = pure_rank(b, cfg);
  if (a.n() != b.n()) {
    r.note = "different numbers of generators";
    return r;
  }
  auto ta = tilde_V(a, cfg);
  auto tb = tilde_V(b, cfg);
  for (const auto& blk : ta.blocks) r.blocks_a.push_back({blk.d_g, blk.m_g});
  for (const auto& blk : tb.blocks) r.blocks_b.push_back({blk.d_g, blk.m_g});
  auto m = detail::match_blocks(ta.blocks, tb.blocks, cfg);
  r.blocks_match = m.ok;
  r.matching = m.pairs;
  if (m.ok) {
    Mat u = detail::assemble_witness(ta.blocks, tb.blocks, m.pairs, a.d(), b.d());
    const Mat pa = ta.span.projector(), pb = tb.span.projector();
    for (int i = 0; i < a.n(); ++i)
      r.witness_residual =
          std::max(r.witness_residual, (u * pa * a[i].adjoint() * pa - pb * b[i].adjoint() * pb * u).norm());
    if (r.witness_residual > 1e-8) throw Error(ErrorKind::Inconsistent, "matched blocks give a bad witness");
    r.witness = u;
  }
  r.verdict = m.ok && r.pure_rank_a == r.pure_rank_b;
  if (r.pure_rank_a != r.pure_rank_b) r.note = "pure ranks differ";
  else if (!m.ok) r.note = "Cuntz blocks do not match";
  return r;
}

struct SimilarityResult {
  bool similar = false;
  std::optional<Mat> t;  // t A_i t^{-1} = B_i
  double condition = 0;
  int intertwiner_dim = 0;
};

inline SimilarityResult similar_direct(const RowContraction& a, const RowContraction& b, const ToleranceConfig& cfg) {
  SimilarityResult r;
  if (a.n() != b.n() || a.d() != b.d()) return r;
  auto space = joint_intertwiners(a, b, IntertwinerMode::Direct, cfg);
  r.intertwiner_dim = space.dim();
  if (space.dim() == 0) return r;
  if (space.dim() == 1) {
    r.condition = condition_number(space.basis[0]);
    if (r.condition <= 1e8) {
      r.similar = true;
      r.t = space.basis[0];
    }
    return r;
  }
  std::mt19937_64 rng(cfg.seed);
  Mat best;
  double best_cond = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 50; ++trial) {
    Mat c = random_gaussian(space.dim(), 1, rng);
    Mat x = Mat::Zero(b.d(), a.d());
    for (int j = 0; j < space.dim(); ++j) x += c(j, 0) * space.basis[j];
    double k = condition_number(x);
    if (k < best_cond) {
      best_cond = k;
      best = x;
    }
  }
  r.condition = best_cond;
  if (best_cond > 1e8)
    throw Error(ErrorKind::Undecided, "intertwiner space of dimension " + std::to_string(space.dim()) +
                                          " has no well-conditioned element among 50 samples (best " +
                                          num(best_cond) + ")");
  r.similar = true;
  r.t = best;
  return r;
}

inline bool cuntz_part_similarity_check(const RowContraction& a, const RowContraction& b, const ToleranceConfig& cfg) {
  validate(a, cfg);
  validate(b, cfg);
  if (a.n() != b.n()) return false;
  return detail::match_blocks(tilde_V(a, cfg).blocks, tilde_V(b, cfg).blocks, cfg).ok;
}

inline bool friedland_five(const RowContraction& a, const RowContraction& b, double tol) {
  if (a.n() != 2 || b.n() != 2 || a.d() != 2 || b.d() != 2)
    throw Error(ErrorKind::NotApplicable, "the five trace identities apply to pairs of 2x2 matrices");
  if (!burnside_irreducible(a.matrices(), 2, 1e-8) || !burnside_irreducible(b.matrices(), 2, 1e-8))
    throw Error(ErrorKind::NotApplicable, "input pair is simultaneously triangularizable");
  auto traces = [](const RowContraction& t) {
    return std::array<cplx, 5>{t[0].trace(), t[1].trace(), (t[0] * t[0]).trace(), (t[1] * t[1]).trace(),
                               (t[0] * t[1]).trace()};
  };
  auto ta = traces(a), tb = traces(b);
  for (std::size_t k = 0; k < 5; ++k)
    if (std::abs(ta[k] - tb[k]) > tol * std::max(1.0, std::abs(ta[k]))) return false;
  return true;
}

}  // namespace rowdil
