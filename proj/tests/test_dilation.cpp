#include "fixtures.hpp"
#include "rowdil/dilation.hpp"

#include <gtest/gtest.h>

using namespace rowdil;
using namespace fixtures;

namespace {

ToleranceConfig cfg;

// Left creation operators on words of length <= L over n letters, ordered by
// level and then lexicographically.
std::vector<Mat> left_creation(int n, int L) {
  const auto dim = words_below(n, L + 1);
  std::vector<Mat> out;
  for (int i = 0; i < n; ++i) {
    Mat l = Mat::Zero(dim, dim);
    long long width = 1;
    for (int m = 0; m < L; ++m, width *= n)
      for (long long p = 0; p < width; ++p) l(words_below(n, m + 1) + i * width + p, words_below(n, m) + p) = 1.0;
    out.push_back(l);
  }
  return out;
}

}  // namespace

TEST(Defect, ZeroTuple) {
  auto def = defect(zero_tuple(2, 3), cfg);
  EXPECT_LT((def.d_a - Mat::Identity(6, 6)).norm(), 1e-14);
  EXPECT_EQ(def.dim(), 6);
}

TEST(Defect, WorkedPairHasFullDefect) {
  // I - A^*A has eigenvalues 1/2, 3/4, 1, 1
  EXPECT_EQ(defect(worked_pair(), cfg).dim(), 4);
}

TEST(Defect, AtomicTuplesLoseOneCopy) {
  auto t = make_atomic({1, 2, 2, 3}, 1.0, 3);
  EXPECT_EQ(defect(t, cfg).dim(), 3 * 4 - 4);
}

TEST(Defect, RankIdentity) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto t = direct_sum(random_contraction(2, 2, 0.9, s), make_atomic({1, 2}, 1.0, 2));
    EXPECT_EQ(defect(t, cfg).dim(), (t.n() - 1) * t.d() + pure_rank(t, cfg));
  }
}

TEST(BuildDilation, ZeroTupleIsLeftRegular) {
  auto dil = build_dilation(zero_tuple(2, 1), 3, cfg);
  ASSERT_EQ(dil.ambient_dim, 15);
  // V -> empty word, defect direction c at word w -> sum_j Q(j,c) xi_{wj}
  auto def = defect(zero_tuple(2, 1), cfg);
  Mat w = Mat::Zero(15, 15);
  w(0, 0) = 1.0;
  long long width = 1;
  for (int m = 0; m < 3; ++m, width *= 2)
    for (long long p = 0; p < width; ++p)
      for (int c = 0; c < 2; ++c)
        for (int j = 0; j < 2; ++j) w(words_below(2, m + 1) + p * 2 + j, dil.offset(m, p) + c) = def.range(j, c);
  auto l = left_creation(2, 3);
  for (int i = 0; i < 2; ++i) EXPECT_LT((w * dil.S[i] * w.adjoint() - l[i]).norm(), 1e-14);
}

TEST(BuildDilation, CuntzStateFixesV) {
  Vec eta(2);
  eta << 1, 0;
  auto dil = build_dilation(make_cuntz_state(eta), 4, cfg);
  EXPECT_LT((dil.S[0].adjoint() * dil.V_embed - dil.V_embed).norm(), 1e-15);
}

TEST(BuildDilation, DilatesWordProducts) {
  auto t = random_contraction(2, 2, 0.85, 8);
  const int N = 4;
  auto dil = build_dilation(t, N, cfg);
  std::vector<Word> words{{}};
  for (std::size_t k = 0; k < words.size(); ++k) {
    const Word w = words[k];
    Mat sw = Mat::Identity(dil.ambient_dim, dil.ambient_dim);
    for (int letter : w) sw = sw * dil.S[letter - 1];
    Mat lhs = dil.V_embed.adjoint() * sw * dil.V_embed;
    EXPECT_LT((lhs - word_product(t, w)).norm(), 1e-10);
    if (static_cast<int>(w.size()) < N - 1)
      for (int i = 1; i <= 2; ++i) {
        Word next = w;
        next.push_back(i);
        words.push_back(next);
      }
  }
}

TEST(VerifyDilation, RandomTuples) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    auto t = random_contraction(2 + static_cast<int>(s % 2), 2, 0.9, s);
    auto r = verify_dilation(build_dilation(t, 5, cfg), cfg);
    EXPECT_LE(r.isometry_residual, 1e-10);
    EXPECT_LE(r.orthogonality_residual, 1e-10);
    EXPECT_LE(r.coinvariance_residual, 1e-10);
    EXPECT_EQ(r.minimality_rank, r.interior_dim);
  }
}

TEST(VerifyDilation, DetectsCorruption) {
  auto dil = build_dilation(random_contraction(2, 2, 0.9, 1), 4, cfg);
  dil.S[0](dil.d + 1, 0) += 1e-3;
  EXPECT_GE(verify_dilation(dil, cfg).isometry_residual, 1e-4);
}

TEST(VerifyDilation, WorkedPairIsMinimal) {
  auto r = verify_dilation(build_dilation(worked_pair(), 6, cfg), cfg);
  EXPECT_EQ(r.minimality_rank, r.interior_dim);
  EXPECT_LE(r.isometry_residual, 1e-10);
}

TEST(LevelOneWandering, ExtremeCases) {
  EXPECT_EQ(level_one_wandering_dim(zero_tuple(3, 2), cfg), 6);
  EXPECT_EQ(level_one_wandering_dim(make_atomic({1, 2, 1}, 1.0, 3), cfg), 6);
  EXPECT_EQ(level_one_wandering_dim(sigma_pair_conjugate(), cfg), 3);
}

TEST(LevelOneWandering, Bounds) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    int n = 2 + static_cast<int>(s % 2), d = 1 + static_cast<int>(s % 3);
    auto t = random_contraction(n, d, s % 5 == 0 ? 1.0 : 0.9, s);
    int w = level_one_wandering_dim(t, cfg);
    EXPECT_GE(w, (n - 1) * d);
    EXPECT_LE(w, n * d);
  }
}

TEST(WoldProjection, ZeroTupleIsPure) {
  auto t = zero_tuple(2, 2);
  auto w = wold_projection(build_dilation(t, 4, cfg), t, cfg);
  EXPECT_EQ(w.cuntz_interior_dim, 0);
  EXPECT_EQ(w.wandering_rank, 2);
}

TEST(WoldProjection, CuntzTupleHasNoWanderingSpace) {
  auto t = make_atomic({1, 2}, 1.0, 2);
  auto dil = build_dilation(t, 4, cfg);
  auto w = wold_projection(dil, t, cfg);
  EXPECT_EQ(w.wandering_rank, 0);
  EXPECT_EQ(w.cuntz_interior_dim, dil.interior_dim);
}

TEST(WoldProjection, MixedPair) {
  auto t = sigma_pair_conjugate();
  auto w = wold_projection(build_dilation(t, 5, cfg), t, cfg);
  EXPECT_EQ(w.wandering_rank, 1);
  EXPECT_GT(w.cuntz_interior_dim, 0);
  EXPECT_LT((w.P_pure * w.P_cuntz).norm(), 1e-10);
}

TEST(WoldProjection, InteriorRankIsPureRank) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto t = direct_sum(random_contraction(2, 1 + static_cast<int>(s % 2), 0.9, s), make_atomic({2}, 1.0, 2));
    auto w = wold_projection(build_dilation(t, 4, cfg), t, cfg);
    EXPECT_EQ(w.interior_wandering_rank, pure_rank(t, cfg));
  }
}
