#include <gtest/gtest.h>

#include <cmath>

#include "hcalg/densitysets.hpp"
#include "hcalg/oracle.hpp"
#include "hcalg/targets.hpp"
#include "hcalg/witnesses.hpp"

using namespace hcalg;

namespace {

const double kLn2 = std::log(2.0);

}  // namespace

TEST(Witnesses, KappaBetaExamples) {
  auto kb = kappa_beta_from({{1}, {2}, {3}}, {1.0});
  EXPECT_EQ(kb.beta, (MultiIndex{1}));
  EXPECT_NEAR(kb.kappa[0], 1.0, 1e-15);

  auto kb2 = kappa_beta_from({{1, 0}, {0, 1}, {1, 1}}, {1.0, 1.5});
  EXPECT_EQ(kb2.beta, (MultiIndex{1, 0}));
  EXPECT_NEAR(L_alpha({0, 1}, kb2.kappa), 1.5, 1e-15);
  EXPECT_NEAR(L_alpha({1, 1}, kb2.kappa), 2.5, 1e-15);

  auto kb3 = kappa_beta_from({{2, 1}}, {0.3, 0.7});
  EXPECT_EQ(kb3.beta, (MultiIndex{2, 1}));
  EXPECT_NEAR(L_alpha(kb3.beta, kb3.kappa), 1.0, 1e-15);
}

TEST(Witnesses, KappaBetaScaleInvariant) {
  std::vector<MultiIndex> A{{1, 0}, {0, 1}, {1, 1}, {2, 1}};
  auto a = kappa_beta_from(A, {0.4, 0.9});
  auto b = kappa_beta_from(A, {4.0, 9.0});
  EXPECT_EQ(a.beta, b.beta);
}

TEST(Witnesses, SelectKappaBetaSeeded) {
  std::vector<MultiIndex> A{{1, 0}, {0, 1}, {1, 1}};
  auto a = select_kappa_beta(A, 17), b = select_kappa_beta(A, 17);
  EXPECT_EQ(a.beta, b.beta);
  EXPECT_EQ(a.kappa, b.kappa);
  EXPECT_NEAR(L_alpha(a.beta, a.kappa), 1.0, 1e-14);
}

TEST(Witnesses, CoordwiseExample) {
  auto w = WeightSeq::rolewicz(2.0, 200);
  std::vector<MultiIndex> A{{1}, {2}};
  auto kb = kappa_beta_from(A, {1.0});
  auto y = TruncatedSeq::basis(0, 0);
  auto W = build_coordwise_witness(A, {TruncatedSeq(0)}, y, 20, kb, w);
  ASSERT_EQ(W.u.size(), 1u);
  EXPECT_EQ(W.u[0].support_size(), 1u);
  EXPECT_NEAR(W.u[0].at(20).log_abs(), -20 * kLn2, 1e-12);
  auto b1 = apply_shift(w, W.u[0], 20, Direction::Backward);
  EXPECT_NEAR(b1.at(0).value().real(), 1.0, 1e-12);
  auto b2 = apply_shift(w, power(W.u[0], 2, ProductKind::Coordinatewise), 20, Direction::Backward);
  EXPECT_NEAR(b2.at(0).log_abs(), -20 * kLn2, 1e-12);
}

TEST(Witnesses, CoordwiseZeroTargetKeepsX) {
  auto w = WeightSeq::rolewicz(2.0, 200);
  std::vector<MultiIndex> A{{1}, {2}};
  auto kb = kappa_beta_from(A, {1.0});
  auto x = TruncatedSeq::from_values({0.5, 0.25}, 1);
  auto W = build_coordwise_witness(A, {x}, TruncatedSeq(0), 20, kb, w);
  EXPECT_EQ(W.u[0].support_size(), 2u);
  EXPECT_EQ(W.u[0].at(0).value(), cplx(0.5));
  EXPECT_EQ(W.u[0].at(1).value(), cplx(0.25));
}

TEST(Witnesses, CoordwiseSingleExponentHitsExactly) {
  auto w = WeightSeq::rolewicz(2.0, 400);
  std::vector<MultiIndex> A{{1}};
  auto kb = kappa_beta_from(A, {1.0});
  auto x = TruncatedSeq::from_values({0.1, 0.2}, 1);
  auto y = TruncatedSeq::from_values({1.0, cplx(0, -2)}, 1);
  auto W = build_coordwise_witness(A, {x}, y, 30, kb, w);
  auto img = apply_shift(w, W.u[0], 30, Direction::Backward);
  for (Index l = 0; l <= 1; ++l) EXPECT_LT(std::abs(img.at(l).value() - y.at(l).value()), 1e-10 * std::abs(y.at(l).value()));
  auto brute = oracle::shift_backward(oracle::from_seq(W.u[0]), w, 30, 0);
  EXPECT_TRUE(oracle::compare(brute, img).pass);
}

TEST(Witnesses, CoordwisePredictedMatchesOracle) {
  auto w = WeightSeq::rolewicz(2.0, 4096);
  std::vector<MultiIndex> A{{1, 0}, {0, 1}, {1, 1}};
  auto kb = kappa_beta_from(A, {1.0, 1.5});
  std::vector<TruncatedSeq> x{TruncatedSeq::from_values({0.3, 0.1}, 1), TruncatedSeq::from_values({0.2}, 0)};
  auto y = TruncatedSeq::from_values({1.0, 0.5, cplx(0.25, 0.25)}, 2);
  auto sp = SpaceSpec::lp(1);
  Index nk = search_coordwise_nk(A, x, y, kb, w, sp, 1e-9, 1e-6, 2000);
  auto W = build_coordwise_witness(A, x, y, nk, kb, w);
  std::vector<oracle::Sparse> us;
  for (const auto& u : W.u) us.push_back(oracle::from_seq(u));
  for (const auto& a : A) {
    auto brute = oracle::shift_backward(oracle::monomial(us, a, ProductKind::Coordinatewise), w, nk, 0);
    EXPECT_TRUE(oracle::compare(brute, W.predicted.at(a)).pass) << to_string(a);
  }
  auto beta_img = W.predicted.at(kb.beta);
  for (Index l = 0; l <= 2; ++l)
    EXPECT_LT(std::abs(beta_img.at(l).value() - y.at(l).value()), 1e-10 * std::abs(y.at(l).value()));
}

TEST(Witnesses, BilateralNoSpillWhenXZero) {
  auto w = WeightSeq::bilateral_inverse_example(100);
  TruncatedSeq x(100, true), y(100, true);
  y.set(0, XComplex(1.0));
  auto W = build_bilateral_witness(1, x, y, w, 10);
  auto img = apply_shift(w, W.u, 10, Direction::Backward);
  EXPECT_NEAR(img.at(0).value().real(), 1.0, 1e-12);
  EXPECT_TRUE(W.spill.empty());
}

TEST(Witnesses, BilateralSpillTelescopes) {
  auto w = WeightSeq::bilateral_inverse_example(100);
  TruncatedSeq x(100, true), y(100, true);
  x.set(0, XComplex(0.5));
  y.set(0, XComplex(1.0));
  const Index nk = 12;
  auto W = build_bilateral_witness(2, x, y, w, nk);
  // spill = B^{nk}(x^2) lands on -nk with coefficient 0.25 w_{-nk+1}...w_0
  ASSERT_EQ(W.spill.support_size(), 1u);
  EXPECT_NEAR(W.spill.at(-nk).log_abs(), std::log(0.25) + w.log_product(-nk, 0), 1e-12);
  EXPECT_NEAR(std::exp(w.log_product(-nk, 0)), 1.0 / (nk * nk), 1e-12);
}

TEST(Witnesses, ShiftAmountsOneDimensional) {
  for (Index p : {1, 2, 5}) {
    auto s = choose_shift_amounts({{1}, {2}}, {2}, p);
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s[0], std::max(4 * p + 1, 3 * p + 1));
  }
  auto single = choose_shift_amounts({{1, 1}}, {1, 1}, 3);
  for (Index v : single) EXPECT_EQ(v, 13);
}

TEST(Witnesses, CauchyExampleExactZeros) {
  auto w = WeightSeq::rolewicz(2.0, 4096);
  auto sp = SpaceSpec::lp(1);
  std::vector<MultiIndex> A{{1}, {2}};
  auto y = TruncatedSeq::basis(1, 1);
  std::vector<TruncatedSeq> x{TruncatedSeq(1)};
  double prev = INFINITY;
  for (Index J : {cauchy_min_J(A, x, y) + 2, cauchy_min_J(A, x, y) + 6, cauchy_min_J(A, x, y) + 10}) {
    auto W = build_cauchy_witness(A, x, y, J, w, sp, 1, 1.0);
    auto u1 = apply_shift(w, W.u[0], W.N, Direction::Backward, &sp);
    EXPECT_TRUE(u1.empty());
    EXPECT_EQ(u1.log_tail_bound(), -INFINITY);
    auto u2 = power(W.u[0], 2, ProductKind::Cauchy);
    EXPECT_LT(u2.max_index() - 0, W.N + W.horizon + 1);
    auto img = apply_shift(w, u2, W.N, Direction::Backward, &sp);
    double r = seminorm(img - y.with_horizon(img.horizon()), sp, 1) + img.tail_bound();
    EXPECT_NEAR(r, seminorm(W.residual, sp, 1), 1e-9 * std::max(r, 1e-300));
    EXPECT_LT(r, prev);
    prev = r;
  }
}

TEST(Witnesses, CauchyLowerPowersBelowN) {
  auto w = WeightSeq::rolewicz(2.0, 4096);
  auto sp = SpaceSpec::lp(1);
  std::vector<MultiIndex> A{{1}, {2}, {3}};
  auto y = TruncatedSeq::from_values({0.5, 1.0}, 1);
  std::vector<TruncatedSeq> x{TruncatedSeq::from_values({0.1}, 0)};
  auto W = build_cauchy_witness(A, x, y, cauchy_min_J(A, x, y) + 3, w, sp, 1, 1.0);
  for (int a = 1; a < W.m; ++a) EXPECT_LT(power(W.u[0], a, ProductKind::Cauchy).max_index(), W.N);
}

TEST(Witnesses, TailThresholdExamples) {
  auto w = WeightSeq::rolewicz(2.0, 4096);
  auto sp = SpaceSpec::lp(1);
  EXPECT_EQ(find_tail_threshold(w, sp, 0.1, 0, 1.0), 5);
  EXPECT_EQ(find_tail_threshold(w, sp, 1e6, 3, 1.0), 3);
  for (double eps : {0.3, 0.1, 0.01})
    EXPECT_LE(find_tail_threshold(w, sp, eps, 1, 1.0), find_tail_threshold(w, sp, eps, 1, 2.0));
}

TEST(Witnesses, UfhcCoordwiseExample) {
  auto w = WeightSeq::rolewicz(2.0, 400);
  auto sp = SpaceSpec::lp(1);
  auto v = TruncatedSeq::basis(0, 0);
  auto W = build_ufhc_coordwise(1, 2, v, TruncatedSeq(0), w, sp, 5, 1, 40);
  for (Index k = 1; k <= 40; ++k) EXPECT_NEAR(W.u.at(5 * k).log_abs(), -5.0 * k * kLn2, 1e-9) << k;
  for (Index j : {1, 3, 7}) {
    auto b = apply_shift(w, W.u, 5 * j, Direction::Backward, &sp);
    EXPECT_NEAR(b.at(0).value().real(), 1.0, 1e-12);
    for (Index k = 1; 5 * (k + j) <= 200; ++k) EXPECT_NEAR(b.at(5 * k).log_abs(), -5.0 * k * kLn2, 1e-9);
    auto b2 = apply_shift(w, power(W.u, 2, ProductKind::Coordinatewise), 5 * j, Direction::Backward, &sp);
    EXPECT_NEAR(b2.at(0).log_abs(), -5.0 * j * kLn2, 1e-9);
  }
}

TEST(Witnesses, UfhcCoordwiseZeroTargetKeepsX) {
  auto w = WeightSeq::rolewicz(2.0, 400);
  auto x = TruncatedSeq::from_values({0.5}, 0);
  auto W = build_ufhc_coordwise(1, 2, TruncatedSeq(0), x, w, SpaceSpec::lp(1), 5, 1, 10);
  EXPECT_EQ(W.u.support_size(), 1u);
  EXPECT_EQ(W.u.at(0).value(), cplx(0.5));
}

TEST(Witnesses, ConditionBRolewicz) {
  auto w = WeightSeq::rolewicz(2.0, 4096);
  auto rep = check_condition_b(w, SpaceSpec::lp(1), 2, 0.5, {10, 20, 40});
  ASSERT_EQ(rep.values.size(), 3u);
  EXPECT_LE(rep.values[2].second, std::ldexp(1.0, -19));
  EXPECT_TRUE(rep.decreasing);
}

TEST(Witnesses, ConditionBDerivative) {
  auto w = WeightSeq::derivative(4096);
  for (int r : {1, 2, 4}) {
    auto rep = check_condition_b(w, SpaceSpec::entire(4), 2, 0.5, {25, 50, 100, 200}, r);
    EXPECT_TRUE(rep.decreasing) << r;
    EXPECT_LT(rep.values.back().second, 1e-6) << r;
  }
}

TEST(Witnesses, UfhcCauchyDensityAndZeros) {
  auto w = WeightSeq::rolewicz(2.0, 60000);
  auto sp = SpaceSpec::lp(1);
  auto y = TruncatedSeq::basis(0, 0);
  Index q = choose_q(w, sp, y, 0.05);
  auto W = build_ufhc_cauchy(2, y, TruncatedSeq(0), w, 0.5, 0.6, q, 200);
  ASSERT_FALSE(W.E.empty());
  for (std::size_t i = 1; i < W.E.size(); ++i) EXPECT_LT(W.E[i - 1], W.E[i]);
  for (Index s : {W.E.front(), W.E[W.E.size() / 2], W.E.back()}) {
    auto b1 = apply_shift(w, W.u, s, Direction::Backward, &sp);
    EXPECT_TRUE(b1.empty());
    auto b2 = apply_shift(w, power(W.u, 2, ProductKind::Cauchy), s, Direction::Backward, &sp);
    auto yh = y.with_horizon(b2.horizon());
    EXPECT_LT(seminorm(b2 - yh, sp, 1) + b2.tail_bound(), 2 * 0.05);
  }
  EXPECT_NEAR(W.density_limit, (0.6 - 0.5) / (q + q * 0.6), 1e-15);
}

TEST(Witnesses, SeriesBoundGeometric) {
  std::vector<double> logs;
  for (int n = 0; n < 40; ++n) logs.push_back(-n * kLn2);
  auto s = series_bound(logs, SpaceSpec::lp(1));
  EXPECT_TRUE(s.converged);
  EXPECT_NEAR(s.total(), 2.0, 1e-9);
}

TEST(Witnesses, DivergentSeriesFlagged) {
  std::vector<double> logs(40, 0.0);
  auto s = series_bound(logs, SpaceSpec::lp(1));
  EXPECT_FALSE(s.converged);
  EXPECT_EQ(s.total(), INFINITY);
}

TEST(Witnesses, C0EmptyTargets) {
  auto fam = enforce_pairwise_gap(build_family_far(2, 2000), {1, 2});
  auto w = WeightSeq::mk_weight({1, 3, 6, 10, 15, 21, 2100}, 2100);
  auto W = build_c0_fhc({}, fam, w, 2000, 1000);
  EXPECT_TRUE(W.u.empty());
  EXPECT_TRUE(W.reports.empty());
}

TEST(Witnesses, C0SmallPipeline) {
  const Index H = 4000;
  auto fam = enforce_pairwise_gap(build_family_far(2, H), {1, 2});
  auto M = compute_Mk_prefix(fam, 64).M;
  const Index wh = H + 16;
  if (M.back() < wh) M.push_back(std::max(wh, M.size() >= 2 ? 2 * M.back() - M[M.size() - 2] : M.back() + 1));
  auto w = WeightSeq::mk_weight(M, wh);
  auto targets = dense_targets(2, H, 5);
  auto W = build_c0_fhc(targets, fam, w, H, H / 2);
  ASSERT_EQ(W.reports.size(), 2u);
  for (const auto& r : W.reports) {
    if (!r.pass) continue;
    EXPECT_LT(r.norm_up, 1.0 / r.p);
    EXPECT_LT(r.worst_target, 1.0 / r.p);
    EXPECT_LT(r.worst_higher, 1.0 / r.p);
    EXPECT_LT(r.worst_cross, 1.0 / r.p);
  }
  EXPECT_TRUE(W.reports[0].pass) << W.reports[0].reason;
}

TEST(Witnesses, OmegaEmptyFamily) {
  DensityFamily fam;
  fam.horizon = 100;
  auto w = WeightSeq::rolewicz(2.0, 200);
  auto W = build_omega_fhc({}, fam, w, 100);
  EXPECT_TRUE(W.u.empty());
}

TEST(Witnesses, DenseTargetsDiagonal) {
  auto t = dense_targets(6, 1000, 3);
  ASSERT_EQ(t.size(), 6u);
  EXPECT_EQ(t[0].m, 1);
  EXPECT_EQ(t[1].m, 1);
  for (const auto& x : t) EXPECT_LE(x.v.max_index(), x.p);
  auto again = dense_targets(6, 1000, 3);
  for (std::size_t i = 0; i < t.size(); ++i) EXPECT_EQ(t[i].v.dense(), again[i].v.dense());
}
