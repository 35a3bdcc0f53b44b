#include <gtest/gtest.h>

#include <cmath>

#include "hcalg/error.hpp"
#include "hcalg/shifts.hpp"

using namespace hcalg;

TEST(Shifts, ApplyShiftExamples) {
  auto w = WeightSeq::rolewicz(2.0, 64);
  EXPECT_TRUE(apply_shift(w, TruncatedSeq::basis(0, 10), 1, Direction::Backward).empty());
  auto a = apply_shift(w, TruncatedSeq::basis(1, 10), 1, Direction::Backward);
  EXPECT_NEAR(a.at(0).value().real(), 2.0, 1e-15);
  auto b = apply_shift(w, TruncatedSeq::basis(5, 10), 3, Direction::Backward);
  EXPECT_EQ(b.support_size(), 1u);
  EXPECT_NEAR(b.at(2).value().real(), 8.0, 1e-12);
}

TEST(Shifts, ForwardShift) {
  auto w = WeightSeq::one_plus_lambda_over_n(1.0, 64);
  auto f = apply_shift(w, TruncatedSeq::basis(2, 10), 1, Direction::Forward);
  EXPECT_NEAR(f.at(3).value().real(), w.w(3), 1e-15);
}

TEST(Shifts, Linearity) {
  auto w = WeightSeq::exp_n_alpha(0.5, 200);
  auto x = TruncatedSeq::from_values({0, 0, 0, 1.5, 0, cplx(0, 2)}, 20);
  auto y = TruncatedSeq::from_values({0, 0, 0, 0, 3, 0, 0, -1}, 20);
  auto lhs = apply_shift(w, x + y, 3, Direction::Backward);
  auto rhs = apply_shift(w, x, 3, Direction::Backward) + apply_shift(w, y, 3, Direction::Backward);
  ASSERT_EQ(lhs.support_size(), rhs.support_size());
  for (const auto& [n, v] : lhs.coeffs()) {
    EXPECT_EQ(v.exponent(), rhs.at(n).exponent());
    EXPECT_EQ(v.mantissa(), rhs.at(n).mantissa());
  }
}

TEST(Shifts, LogWConsistency) {
  std::vector<WeightSeq> ws{WeightSeq::rolewicz(3.0, 500), WeightSeq::one_plus_lambda_over_n(2.0, 500),
                            WeightSeq::exp_n_alpha(0.3, 500), WeightSeq::counterexample_odd(500),
                            WeightSeq::derivative(500), WeightSeq::mk_weight({1, 3, 6, 10, 15, 21}, 21)};
  for (const auto& w : ws) {
    EXPECT_DOUBLE_EQ(w.logW(0), 0.0);
    for (Index n = 0; n < w.horizon(); ++n) {
      double r = std::exp(w.logW(n + 1) - w.logW(n));
      EXPECT_NEAR(r / w.w(n + 1), 1.0, 1e-12);
    }
  }
}

TEST(Shifts, BeyondHorizonIsInconclusive) {
  auto w = WeightSeq::rolewicz(2.0, 10);
  EXPECT_THROW(w.logW(11), Inconclusive);
}

TEST(Shifts, CounterexampleCumulativeLogs) {
  auto w = WeightSeq::counterexample_odd(201);
  for (Index n = 1; n <= 100; ++n) {
    EXPECT_NEAR(w.logW(2 * n), (n - 1) * std::log(2.0), 1e-12);
    EXPECT_NEAR(w.logW(2 * n + 1), 2 * n * std::log(2.0), 1e-12);
  }
}

TEST(Shifts, ExpNAlphaCumulative) {
  auto w = WeightSeq::exp_n_alpha(0.5, 100);
  for (Index n : {1, 4, 25, 100}) EXPECT_NEAR(w.logW(n), std::sqrt(static_cast<double>(n)), 1e-12);
}

TEST(Shifts, MkWeightProperties) {
  std::vector<Index> M{1, 3, 6, 10, 15, 21};
  auto w = WeightSeq::mk_weight(M, 21);
  for (Index n = 2; n <= 21; ++n) EXPECT_LE(w.log_w(n), w.log_w(n - 1) + 1e-15);
  // M[k] is M_{k+1}; the block identity starts at M_3.
  for (std::size_t k = 2; k < M.size(); ++k) {
    double kk = static_cast<double>(k);
    EXPECT_NEAR(w.logW(M[k]), w.logW(M[k - 1]) * (1 + 1 / kk), 1e-12 * std::abs(w.logW(M[k])));
  }
  for (std::size_t k = 3; k <= M.size(); ++k) {
    double prod = 1.0;
    for (std::size_t j = 2; j <= k - 1; ++j) prod *= 1.0 + 1.0 / static_cast<double>(j);
    EXPECT_NEAR(w.logW(M[k - 1]), w.logW(M[1]) * prod, 1e-12 * w.logW(M[k - 1]));
  }
}

TEST(Shifts, GammaConditionCounterexample) {
  Gamma g;
  g.form = Gamma::Form::CounterexampleOdd;
  auto sp = SpaceSpec::weighted_c0(g);
  auto w = WeightSeq::counterexample_odd(260);
  auto reps = check_gamma_condition(w, sp, 0.5, {0}, 200);
  ASSERT_EQ(reps.size(), 1u);
  for (const auto& [n, v] : reps[0].values) {
    if (n % 2 == 1) {
      EXPECT_NEAR(v, 1.0, 1e-12) << n;
    } else {
      Index k = n / 2;
      EXPECT_NEAR(std::log(v), -0.5 * (k - 1) * std::log(2.0), 1e-9) << n;
    }
  }
}

TEST(Shifts, GammaConditionRolewicz) {
  auto w = WeightSeq::rolewicz(2.0, 400);
  auto reps = check_gamma_condition(w, SpaceSpec::lp(1), 1.0, {0}, 200);
  for (const auto& [n, v] : reps[0].values) EXPECT_NEAR(std::log(v), -n * std::log(2.0), 1e-9);
  EXPECT_TRUE(reps[0].along_subsequence.pass);
}

TEST(Shifts, TendsToZero) {
  Samples dec, flat;
  for (Index n = 1; n <= 30; ++n) {
    dec.push_back({n, std::pow(0.5, n)});
    flat.push_back({n, 1.0});
  }
  EXPECT_TRUE(tends_to_zero(dec, 1e-6).pass);
  EXPECT_FALSE(tends_to_zero(flat, 1e-6).pass);
}

TEST(Shifts, RegularityExamples) {
  auto r1 = verify_regularity(SpaceSpec::lp(1), WeightSeq::rolewicz(2.0, 400), 1, 1, 1.0, 5, 2, 60);
  EXPECT_LE(r1.worst_c, 1.0 + 1e-12);
  EXPECT_FALSE(r1.pass);  // the weight product exceeds C = 1
  auto r1b = verify_regularity(SpaceSpec::lp(1), WeightSeq::explicit_list(std::vector<double>(400, 1.0)), 1, 1, 1.0, 5, 2,
                               60);
  EXPECT_TRUE(r1b.pass);
  auto r2 = verify_regularity(SpaceSpec::entire(4), WeightSeq::explicit_list(std::vector<double>(400, 1.0)), 3, 3, 1.0,
                              5, 2, 60);
  EXPECT_NEAR(r2.worst_c, 1.0, 1e-9);
  EXPECT_TRUE(r2.pass);
}

TEST(Shifts, InverseExample) {
  auto rows = check_inverse_example(1000);
  ASSERT_EQ(rows.size(), 1000u);
  EXPECT_NEAR(rows[0].forward, 1.0, 1e-12);
  EXPECT_NEAR(rows[9].forward, 1.0, 1e-12);
  EXPECT_NEAR(rows[9].backward, 1.0 / 11.0, 1e-12);
  for (const auto& r : rows) {
    EXPECT_LT(std::abs(r.forward_log_error), 1e-12);
    EXPECT_LT(std::abs(r.backward_log_error), 1e-12);
  }
}

TEST(Shifts, BilateralShiftWithinRange) {
  auto w = WeightSeq::bilateral_inverse_example(50);
  TruncatedSeq x(20, true);
  x.set(-3, XComplex(1.0));
  auto y = apply_shift(w, x, 2, Direction::Backward);
  EXPECT_NEAR(y.at(-5).log_abs(), w.log_product(-5, -3), 1e-12);
}

TEST(Shifts, WeightNames) {
  for (auto k : {WeightKind::Rolewicz, WeightKind::MkWeight, WeightKind::Derivative, WeightKind::Explicit})
    EXPECT_EQ(parse_weight_kind(weight_name(k)), k);
  EXPECT_ANY_THROW(parse_weight_kind("nonsense"));
}
