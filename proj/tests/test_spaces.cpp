#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hcalg/spaces.hpp"

using namespace hcalg;

namespace {

TruncatedSeq random_vec(std::mt19937_64& g, Index L) {
  std::normal_distribution<double> n(0.0, 1.0);
  TruncatedSeq x(L);
  for (Index i = 0; i <= L; ++i) x.set(i, XComplex(cplx(n(g), n(g))));
  return x;
}

}  // namespace

TEST(Spaces, BasisNormExamples) {
  EXPECT_DOUBLE_EQ(seminorm(TruncatedSeq::basis(0, 4), SpaceSpec::lp(1), 1), 1.0);
  EXPECT_NEAR(seminorm(TruncatedSeq::basis(3, 4), SpaceSpec::entire(4), 2), 8.0, 1e-12);
  auto ones = TruncatedSeq::from_values({1, 1, 1, 1, 1}, 4);
  EXPECT_NEAR(seminorm(ones, SpaceSpec::omega(6), 3), 4.0, 1e-12);
}

TEST(Spaces, LpAndC0) {
  auto x = TruncatedSeq::from_values({3.0, cplx(0, 4.0)}, 2);
  EXPECT_NEAR(seminorm(x, SpaceSpec::lp(1), 1), 7.0, 1e-12);
  EXPECT_NEAR(seminorm(x, SpaceSpec::lp(2), 1), 5.0, 1e-12);
  EXPECT_NEAR(seminorm(x, SpaceSpec::c0(), 1), 4.0, 1e-12);
}

TEST(Spaces, TailBoundIsAdded) {
  auto x = TruncatedSeq::basis(0, 4);
  x.set_tail_bound(0.25);
  EXPECT_NEAR(seminorm(x, SpaceSpec::lp(1), 1) + x.tail_bound(), 1.25, 1e-12);
}

TEST(Spaces, FNormExamples) {
  EXPECT_DOUBLE_EQ(f_norm(TruncatedSeq(3), SpaceSpec::lp(1)).total(), 0.0);
  EXPECT_NEAR(f_norm(TruncatedSeq::basis(0, 3), SpaceSpec::lp(1)).total(), 1.0, 1e-9);
  auto x = TruncatedSeq::basis(0, 3).scaled(XComplex(3.0));
  EXPECT_NEAR(f_norm(x, SpaceSpec::lp(1)).total(), 1.0, 1e-9);
  EXPECT_NEAR(f_norm(x, SpaceSpec::lp(1)).remainder, std::ldexp(1.0, -30), 1e-15);
}

TEST(Spaces, InBallExamples) {
  auto e0 = TruncatedSeq::basis(0, 8);
  auto sp = SpaceSpec::lp(1);
  EXPECT_TRUE(in_ball(e0, e0, 0.1, sp, 1));
  EXPECT_FALSE(in_ball(e0, TruncatedSeq(8), 0.5, sp, 1));
  auto x = e0 + TruncatedSeq::basis(5, 8).scaled(XComplex(0.01));
  EXPECT_TRUE(in_ball(x, e0, 0.1, sp, 1));
  EXPECT_FALSE(in_ball(x, e0, 0.005, sp, 1));
}

TEST(Spaces, TriangleInequality) {
  std::mt19937_64 g(11);
  std::vector<SpaceSpec> specs{SpaceSpec::lp(1), SpaceSpec::lp(2.5), SpaceSpec::c0(), SpaceSpec::entire(3),
                               SpaceSpec::omega(5)};
  for (int trial = 0; trial < 50; ++trial) {
    auto x = random_vec(g, 12), y = random_vec(g, 12);
    for (const auto& s : specs) {
      for (int q = 1; q <= s.Q; ++q) {
        double lhs = seminorm(x + y, s, q), rhs = seminorm(x, s, q) + seminorm(y, s, q);
        EXPECT_LE(lhs, rhs * (1 + 1e-12)) << s.kind_name() << " q=" << q;
      }
      double fl = f_norm(x + y, s).total(), fr = f_norm(x, s).total() + f_norm(y, s).total();
      EXPECT_LE(fl, fr * (1 + 1e-12));
    }
  }
}

TEST(Spaces, FNormScaling) {
  std::mt19937_64 g(12);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  auto s = SpaceSpec::lp(1);
  for (int trial = 0; trial < 50; ++trial) {
    auto x = random_vec(g, 6);
    cplx lam(u(g), u(g));
    EXPECT_LE(f_norm(x.scaled(XComplex(lam)), s).total(), (std::abs(lam) + 1) * f_norm(x, s).total() + 1e-12);
  }
}

TEST(Spaces, MonotoneInQ) {
  std::mt19937_64 g(13);
  for (const auto& s : {SpaceSpec::entire(6), SpaceSpec::omega(6)}) {
    auto x = random_vec(g, 10);
    for (int q = 1; q < 6; ++q) EXPECT_LE(seminorm(x, s, q), seminorm(x, s, q + 1) * (1 + 1e-14));
  }
}

TEST(Spaces, WeightedC0) {
  Gamma gm;
  gm.form = Gamma::Form::Explicit;
  gm.values = {1.0, 2.0, 4.0};
  auto s = SpaceSpec::weighted_c0(gm);
  EXPECT_EQ(s.Q, 1);
  auto x = TruncatedSeq::from_values({1.0, 1.0, 0.5}, 2);
  EXPECT_NEAR(seminorm(x, s, 1), 2.0, 1e-12);
}

TEST(Spaces, ExtremeMagnitudesSurvive) {
  auto x = TruncatedSeq::basis(0, 2).scaled(XComplex::polar_log(-20000.0, 0.0));
  double lg = log_seminorm(x, SpaceSpec::lp(1), 1);
  EXPECT_NEAR(lg, -20000.0, 1e-9);
}

TEST(Spaces, ValidateRejectsBadParameters) {
  EXPECT_ANY_THROW(SpaceSpec::lp(0.5).validate());
  EXPECT_ANY_THROW(SpaceSpec::omega(0).validate());
}
