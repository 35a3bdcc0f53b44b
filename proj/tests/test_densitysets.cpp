#include <gtest/gtest.h>

#include <algorithm>

#include "hcalg/densitysets.hpp"

using namespace hcalg;

namespace {

IntSet evens(Index L) {
  IntSet e;
  for (Index n = 2; n <= L; n += 2) e.push_back(n);
  return e;
}

bool disjoint(const IntSet& a, const IntSet& b) {
  IntSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out.empty();
}

}  // namespace

TEST(DensitySets, SplitTwoPrefix) {
  auto r = split_two(naturals(2000));
  ASSERT_GE(r.A.size(), 3u);
  ASSERT_GE(r.B.size(), 3u);
  EXPECT_EQ((IntSet{r.A[0], r.A[1], r.A[2]}), (IntSet{1, 5, 6}));
  EXPECT_EQ((IntSet{r.B[0], r.B[1], r.B[2]}), (IntSet{3, 8, 9}));
  EXPECT_TRUE(disjoint(r.A, r.B));
}

TEST(DensitySets, ThinSeparate) {
  auto t = thin_separate(naturals(30), 3);
  EXPECT_EQ((IntSet{t[0], t[1], t[2]}), (IntSet{3, 6, 9}));
  auto n = naturals(40);
  EXPECT_EQ(thin_separate(n, 1), n);
  auto e = thin_separate(evens(40), 2);
  EXPECT_EQ((IntSet{e[0], e[1], e[2]}), (IntSet{4, 8, 12}));
}

TEST(DensitySets, DensityEstimate) {
  EXPECT_DOUBLE_EQ(density_estimate(naturals(10000), 10000, 100, true), 1.0);
  EXPECT_NEAR(density_estimate(evens(10000), 10000, 100, true), 0.5, 1.0 / 100);
  EXPECT_NEAR(density_estimate(evens(10000), 10000, 100, false), 0.5, 1.0 / 100);
}

TEST(DensitySets, SingleSetFamily) {
  auto f = build_family_far(1, 1000);
  EXPECT_EQ(f.sets.size(), 1u);
  EXPECT_TRUE(check_separation(f).empty());
}

TEST(DensitySets, PairFamilyIsSplitTwo) {
  auto f = build_family_far(2, 5000);
  auto r = split_two(naturals(5000));
  ASSERT_EQ(f.sets.size(), 2u);
  EXPECT_EQ(f.sets[0].front(), r.A.front());
  EXPECT_TRUE(disjoint(f.sets[0], f.sets[1]));
}

TEST(DensitySets, FarSeparationKappa) {
  auto f = build_family_far(3, 20000);
  ASSERT_TRUE(f.kappa.count(1));
  EXPECT_TRUE(check_kappa(f, 1, f.kappa.at(1)).empty());
  for (std::size_t i = 0; i < f.sets.size(); ++i)
    for (std::size_t j = i + 1; j < f.sets.size(); ++j) EXPECT_TRUE(disjoint(f.sets[i], f.sets[j]));
}

TEST(DensitySets, PairwiseGapExhaustive) {
  auto f = enforce_pairwise_gap(build_family_far(2, 20000), {1, 2});
  EXPECT_TRUE(check_separation(f).empty());
  for (std::size_t p = 0; p < 2; ++p) EXPECT_GE(f.sets[p].front(), f.a[p]);
  for (Index x : f.sets[0])
    for (Index y : f.sets[1]) ASSERT_GE(std::abs(x - y), 3);
  for (std::size_t p = 0; p < 2; ++p)
    for (std::size_t i = 1; i < f.sets[p].size(); ++i) ASSERT_GE(f.sets[p][i] - f.sets[p][i - 1], 2 * f.a[p]);
}

TEST(DensitySets, ZeroGapKeepsFamily) {
  auto f = build_family_far(2, 5000);
  auto g = enforce_pairwise_gap(f, {0, 0});
  EXPECT_EQ(f.sets, g.sets);
}

TEST(DensitySets, RecordedDensitiesHold) {
  auto f = enforce_pairwise_gap(build_family_far(3, 100000), {1, 2, 3});
  for (std::size_t p = 0; p < f.sets.size(); ++p) {
    EXPECT_GT(f.lower_density[p], 0.0);
    EXPECT_GE(density_estimate(f.sets[p], f.horizon, f.burn_in, true), f.lower_density[p] - 1e-15);
  }
}

TEST(DensitySets, Reproducible) {
  auto a = enforce_pairwise_gap(build_family_far(3, 30000), {1, 2, 3});
  auto b = enforce_pairwise_gap(build_family_far(3, 30000), {1, 2, 3});
  EXPECT_EQ(a.sets, b.sets);
  EXPECT_EQ(a.kappa, b.kappa);
}

TEST(DensitySets, MkSequence) {
  auto f = enforce_pairwise_gap(build_family_far(3, 50000), {1, 2, 3});
  auto pre = compute_Mk_prefix(f, 6);
  auto& M = pre.M;
  ASSERT_GE(M.size(), 2u);
  EXPECT_EQ(M[0], 1);
  for (std::size_t k = 2; k < M.size(); ++k) EXPECT_GE(M[k] - M[k - 1], M[k - 1] - M[k - 2]);
  // defining implication: elements of different sets above M_{k+1} are >= M_k apart
  for (std::size_t k = 0; k + 1 < M.size(); ++k) EXPECT_TRUE(check_kappa(f, M[k], M[k + 1]).empty()) << k;
}
