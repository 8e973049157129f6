#include "fixtures.hpp"
#include "rowdil/structure.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace rowdil;
using namespace fixtures;

namespace {

ToleranceConfig cfg;

bool contains(const Mat& q, const Vec& v, double tol = 1e-8) {
  return (v - q * (q.adjoint() * v)).norm() <= tol * std::max(1.0, v.norm());
}

Vec unit(int d, int i) { return Vec::Unit(d, i); }

}  // namespace

TEST(CuntzSubspace, StrictContractionIsZero) {
  EXPECT_EQ(cuntz_subspace(random_contraction(2, 3, 0.7, 1), cfg).dim(), 0);
}

TEST(CuntzSubspace, CuntzTupleIsEverything) {
  EXPECT_EQ(cuntz_subspace(fixed_point_pair(), cfg).dim(), 3);
  EXPECT_EQ(cuntz_subspace(make_atomic({2, 1, 1}, 1.0, 2), cfg).dim(), 3);
}

TEST(CuntzSubspace, MixedPairIsFirstAxis) {
  auto s = cuntz_subspace(sigma_pair_conjugate(), cfg);
  ASSERT_EQ(s.dim(), 1);
  EXPECT_TRUE(contains(s.basis, unit(2, 0)));
}

TEST(CuntzSubspace, CoinvariantWithCuntzCompression) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto t = direct_sum(random_contraction(2, 2, 0.95, seed), make_atomic({1, 2, 2}, 1.0, 2));
    std::mt19937_64 rng(seed);
    auto u = random_unitary(t.d(), rng);
    t = conjugate(t, u, u.adjoint());
    auto s = cuntz_subspace(t, cfg);
    ASSERT_EQ(s.dim(), 3);
    EXPECT_LE(costar_leak(t, s.basis), 1e-8);
    EXPECT_LE(compress(t, s.basis).defect().norm(), 1e-8);
  }
}

TEST(MinimalCostarInvariant, FixedPointPairGivesLineInOuterPlane) {
  auto m = minimal_costar_invariant(fixed_point_pair(), Subspace::full(3), cfg);
  ASSERT_EQ(m.dim(), 1);
  // Every line in span{e1, e3} is a common eigenvector of the adjoints, so
  // the search may return any of them.
  EXPECT_LT(std::abs(m.basis(1, 0)), 1e-8);
  EXPECT_LE(costar_leak(fixed_point_pair(), m.basis), 1e-8);
}

TEST(MinimalCostarInvariant, OneDimensionalSpace) {
  Vec eta(3);
  eta << 0.6, 0.0, 0.8;
  auto m = minimal_costar_invariant(make_cuntz_state(eta), Subspace::full(1), cfg);
  EXPECT_EQ(m.dim(), 1);
}

TEST(MinimalCostarInvariant, DirectSumOfIrreducibleCopies) {
  auto c = make_atomic({1, 1, 2}, cplx(0, 1), 2);
  std::mt19937_64 rng(17);
  auto u = random_unitary(6, rng);
  auto t = conjugate(direct_sum(c, c), u, u.adjoint());
  auto m = minimal_costar_invariant(t, Subspace::full(6), cfg);
  ASSERT_EQ(m.dim(), 3);
  auto match = unitarily_equivalent_tuples(compress(t, m.basis), c, cfg);
  EXPECT_TRUE(match.equivalent);
}

TEST(MinimalCostarInvariant, RejectsNonInvariantSearchSpace) {
  Mat q = Mat::Zero(3, 1);
  q(1, 0) = 1.0;
  EXPECT_THROW(minimal_costar_invariant(fixed_point_pair(), Subspace(3, q), cfg), Error);
}

TEST(TildeV, FixedPointPair) {
  auto tv = tilde_V(fixed_point_pair(), cfg);
  ASSERT_EQ(tv.span.dim(), 2);
  EXPECT_TRUE(contains(tv.span.basis, unit(3, 0)));
  EXPECT_TRUE(contains(tv.span.basis, unit(3, 2)));
  ASSERT_EQ(tv.family.size(), 2u);
  EXPECT_LT((tv.family[0].basis.adjoint() * tv.family[1].basis).norm(), 1e-10);
}

TEST(TildeV, PrimitiveAtomicWordIsIrreducible) {
  auto t = make_atomic({1, 2}, 1.0, 2);
  auto tv = tilde_V(t, cfg);
  EXPECT_EQ(tv.span.dim(), 2);
  EXPECT_TRUE(burnside_irreducible(adjoints(t.matrices()), 2, cfg.rank_rtol));
}

TEST(TildeV, StrictContractionIsEmpty) {
  EXPECT_EQ(tilde_V(random_contraction(3, 2, 0.9, 5), cfg).span.dim(), 0);
}

TEST(TildeV, FamilyMembersAreMinimalAndIsometric) {
  auto t = direct_sum(direct_sum(make_atomic({1, 2}, 1.0, 2), sigma_pair_conjugate()), make_atomic({1}, -1.0, 2));
  auto tv = tilde_V(t, cfg);
  EXPECT_EQ(tv.span.dim(), 4);
  for (const auto& m : tv.family) {
    EXPECT_TRUE(burnside_irreducible(restrict_to(adjoints(t.matrices()), m.basis), m.dim(), cfg.rank_rtol));
    for (int j = 0; j < m.dim(); ++j) {
      double sum = 0;
      for (const auto& a : t.matrices()) sum += (a.adjoint() * m.basis.col(j)).squaredNorm();
      EXPECT_NEAR(sum, 1.0, 1e-10);
    }
  }
}

TEST(WedderburnBlocks, FixedPointPairHasOneBlockOfMultiplicityTwo) {
  auto blocks = wedderburn_blocks(fixed_point_pair(), cfg);
  ASSERT_EQ(blocks.size(), 1u);
  EXPECT_EQ(blocks[0].d_g, 1);
  EXPECT_EQ(blocks[0].m_g, 2);
}

TEST(WedderburnBlocks, IrreducibleCuntzTuple) {
  auto blocks = wedderburn_blocks(make_atomic({1, 1, 2}, 1.0, 2), cfg);
  ASSERT_EQ(blocks.size(), 1u);
  EXPECT_EQ(blocks[0].d_g, 3);
  EXPECT_EQ(blocks[0].m_g, 1);
}

TEST(WedderburnBlocks, DoubledTupleAndIntertwiners) {
  auto c = make_atomic({1, 2}, cplx(0.6, 0.8), 2);
  std::mt19937_64 rng(23);
  auto u = random_unitary(4, rng);
  auto t = conjugate(direct_sum(c, c), u, u.adjoint());
  auto blocks = wedderburn_blocks(t, cfg);
  ASSERT_EQ(blocks.size(), 1u);
  EXPECT_EQ(blocks[0].d_g, 2);
  EXPECT_EQ(blocks[0].m_g, 2);
  const auto& b = blocks[0];
  EXPECT_LE(b.rep_tuple.defect().norm(), 1e-8);
  for (int j = 0; j < b.m_g; ++j) {
    const Mat& w = b.intertwiners[j];
    EXPECT_TRUE(is_unitary(w, 1e-8));
    auto copy = compress(t, b.copies[j].basis);
    for (int i = 0; i < t.n(); ++i)
      EXPECT_LT((w * b.rep_tuple[i].adjoint() * w.adjoint() - copy[i].adjoint()).norm(), 1e-8);
  }
  auto span = tilde_V(t, cfg).span;
  EXPECT_EQ(fixed_point_space(compress(t, span.basis), cfg).size(), 4u);
}

TEST(WedderburnBlocks, InequivalentBlocksStaySeparate) {
  auto t = direct_sum(make_atomic({1, 2}, 1.0, 2), make_atomic({1, 2}, -1.0, 2));
  auto blocks = wedderburn_blocks(t, cfg);
  ASSERT_EQ(blocks.size(), 2u);
  EXPECT_EQ(blocks[0].m_g, 1);
  EXPECT_EQ(blocks[1].m_g, 1);
}

TEST(IsPure, Examples) {
  EXPECT_TRUE(is_pure(worked_pair(), cfg));
  EXPECT_FALSE(is_pure(fixed_point_pair(), cfg));
  EXPECT_FALSE(is_pure(sigma_pair_conjugate(), cfg));
  EXPECT_TRUE(is_pure(zero_tuple(2, 2), cfg));
}

TEST(IsIrreducible, Examples) {
  EXPECT_EQ(is_irreducible(sigma_pair(), cfg), Irreducibility::CuntzIrreducible);
  EXPECT_EQ(is_irreducible(eigen_line_triple(), cfg), Irreducibility::CuntzIrreducible);
  EXPECT_EQ(is_irreducible(rank_one_star(3), cfg), Irreducibility::PureRankOne);
  EXPECT_EQ(is_irreducible(rank_one_star(2), cfg), Irreducibility::PureRankOne);
  EXPECT_EQ(is_irreducible(fixed_point_pair(), cfg), Irreducibility::Reducible);
  EXPECT_EQ(is_irreducible(worked_pair(), cfg), Irreducibility::Reducible);
  EXPECT_EQ(is_irreducible(sigma_pair_conjugate(), cfg), Irreducibility::Reducible);
}

TEST(StructureReport, WorkedPair) {
  auto r = structure_report(worked_pair(), cfg);
  EXPECT_EQ(r.pure_rank, 2);
  EXPECT_EQ(r.dim_tildeV, 0);
  EXPECT_TRUE(r.blocks.empty());
  EXPECT_EQ(r.alpha, 2);
  EXPECT_TRUE(r.is_pure);
}

TEST(StructureReport, AtomicSingleLetter) {
  auto r = structure_report(make_atomic({1}, 1.0, 2), cfg);
  EXPECT_EQ(r.pure_rank, 0);
  ASSERT_EQ(r.blocks.size(), 1u);
  EXPECT_EQ(r.blocks[0].d, 1);
  EXPECT_EQ(r.blocks[0].m, 1);
  EXPECT_EQ(r.alpha, 1);
  EXPECT_TRUE(r.is_cuntz);
}

TEST(StructureReport, ZeroTuple) {
  auto r = structure_report(zero_tuple(2, 2), cfg);
  EXPECT_EQ(r.pure_rank, 2);
  EXPECT_TRUE(r.blocks.empty());
  EXPECT_EQ(r.alpha, 2);
}

TEST(StructureReport, UnitaryCovariance) {
  auto base = direct_sum(direct_sum(make_atomic({1, 2}, 1.0, 2), make_atomic({1}, 1.0, 2)), make_atomic({1}, 1.0, 2));
  base = direct_sum(base, random_contraction(2, 1, 0.5, 3));
  auto ref = structure_report(base, cfg);
  std::mt19937_64 rng(31);
  for (int k = 0; k < 10; ++k) {
    auto u = random_unitary(base.d(), rng);
    auto r = structure_report(conjugate(base, u, u.adjoint()), cfg);
    EXPECT_EQ(r.pure_rank, ref.pure_rank);
    EXPECT_EQ(r.alpha, ref.alpha);
    auto key = [](const StructureReport& s) {
      std::vector<std::pair<int, int>> v;
      for (const auto& b : s.blocks) v.emplace_back(b.d, b.m);
      std::sort(v.begin(), v.end());
      return v;
    };
    EXPECT_EQ(key(r), key(ref));
  }
}
