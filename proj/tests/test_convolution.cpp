#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hcalg/convolution.hpp"

using namespace hcalg;

namespace {

EntireTrunc monomial_fn(int k, Index L) {
  EntireTrunc f;
  f.taylor.assign(static_cast<std::size_t>(L + 1), 0.0);
  f.taylor[static_cast<std::size_t>(k)] = 1.0;
  return f;
}

}  // namespace

TEST(Convolution, ExpVectorCoefficients) {
  auto e0 = exp_vector(0.0, 10);
  EXPECT_EQ(e0.taylor[0], cplx(1.0));
  for (Index n = 1; n <= 10; ++n) EXPECT_EQ(e0.taylor[static_cast<std::size_t>(n)], cplx(0.0));
  auto e1 = exp_vector(1.0, 10);
  EXPECT_NEAR(e1.taylor[3].real(), 1.0 / 6.0, 1e-15);
}

TEST(Convolution, ExpProductAddsExponents) {
  cplx l(0.3, -0.7), m(-1.1, 0.4);
  auto p = cauchy_product(exp_vector(l, 40), exp_vector(m, 40));
  auto e = exp_vector(l + m, 40);
  for (Index n = 0; n <= 40; ++n)
    EXPECT_NEAR(std::abs(p.taylor[static_cast<std::size_t>(n)] - e.taylor[static_cast<std::size_t>(n)]), 0.0, 1e-14);
}

TEST(Convolution, PhiOfDIsDifferentiation) {
  auto D = PhiSpec::polynomial({0.0, 1.0});
  auto r = phi_of_D(D, monomial_fn(2, 6));
  EXPECT_NEAR(r.taylor[1].real(), 2.0, 1e-15);
  for (std::size_t n = 0; n < r.taylor.size(); ++n)
    if (n != 1) EXPECT_EQ(r.taylor[n], cplx(0.0));
  auto D2 = PhiSpec::polynomial({0.0, 0.0, 1.0});
  auto r2 = phi_of_D(D2, monomial_fn(3, 6));
  EXPECT_NEAR(r2.taylor[1].real(), 6.0, 1e-15);
}

TEST(Convolution, EigenRelation) {
  std::vector<PhiSpec> phis{PhiSpec::polynomial({0.0, 1.0}), PhiSpec::poly_times_exp({0.0, 1.0}, 60),
                            PhiSpec::half_exp_plus_exp_i_minus_quarter(60)};
  for (const auto& phi : phis) {
    for (cplx l : {cplx(0.5, 0.2), cplx(-1.5, 1.0), cplx(0.0, 2.0)}) {
      auto e = check_eigen_relation(phi, l, 60, 1.0, 1e-8);
      EXPECT_TRUE(e.pass) << phi.name();
      EXPECT_LT(e.tolerance, 1e-8);
      EXPECT_LE(e.computed, e.tolerance);
    }
  }
}

TEST(Convolution, ClosedFormMatchesTaylor) {
  auto phi = PhiSpec::half_exp_plus_exp_i_minus_quarter(80);
  for (cplx z : {cplx(0.1, 0.2), cplx(-1.0, 1.5), cplx(2.0, -0.5)}) {
    EXPECT_NEAR(std::abs(phi.eval(z) - phi.eval_taylor(z)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(phi.eval(z) - eval_taylor_multiprecision(phi, z)), 0.0, 1e-12);
  }
}

TEST(Convolution, LatticeValuesOfWorkedExample) {
  auto phi = PhiSpec::half_exp_plus_exp_i_minus_quarter(60);
  const double pi = std::numbers::pi;
  for (int k = 1; k <= 2; ++k) {
    cplx a(0, 2 * pi * k), b(2 * pi * k, 0);
    auto c = check_condition_e(phi, {1, 2, 3}, 3, a, b, 1e-6);
    EXPECT_EQ(c.m, 3);
    for (const auto& row : c.rows) {
      EXPECT_FALSE(row.n == 3 && row.d == 3);
      double want = 0.5 * std::exp(2 * row.d * k * pi) + std::exp(-2.0 * (row.n - row.d) * k * pi) - 0.25;
      EXPECT_NEAR(row.lhs / std::abs(want), 1.0, 1e-9) << row.n << "," << row.d;
    }
  }
}

TEST(Convolution, SearchCertifiesWorkedExample) {
  SearchConfig cfg;
  cfg.k_max = 3;
  auto c = search_condition_e(PhiSpec::half_exp_plus_exp_i_minus_quarter(60), {1, 2, 3}, cfg);
  ASSERT_TRUE(c.found) << c.reason;
  EXPECT_EQ(c.m, 3);
  EXPECT_LE(c.k, 3);
  EXPECT_GT(c.min_margin, 0.0);
  EXPECT_LT(c.closed_vs_taylor, 1e-9);
}

TEST(Convolution, ExponentialHasNoCertificate) {
  SearchConfig cfg;
  cfg.mode = SearchConfig::Mode::Grid;
  cfg.steps = 5;
  auto c = search_condition_e(PhiSpec::poly_times_exp({1.0}, 60), {1, 2}, cfg);
  EXPECT_FALSE(c.found);
  EXPECT_FALSE(c.reason.empty());
  EXPECT_ANY_THROW(wellbehaved_search(PhiSpec::poly_times_exp({1.0}, 60), -1.0, {1, 2}));
}

TEST(Convolution, WellBehavedRay) {
  auto phi = PhiSpec::poly_times_exp({2.0, 1.0}, 60);
  for (double t : {0.5, 1.0, 3.0}) EXPECT_NEAR(std::abs(phi.eval(-t)), std::abs(2 - t) * std::exp(-t), 1e-12);
  auto wb = wellbehaved_search(phi, -1.0, {1, 2, 3});
  EXPECT_TRUE(wb.cert.found);
  EXPECT_GT(wb.cert.min_margin, 0.0);
}

TEST(Convolution, WitnessEigenScaling) {
  auto phi = PhiSpec::half_exp_plus_exp_i_minus_quarter(60);
  SearchConfig cfg;
  cfg.k_max = 3;
  auto cert = search_condition_e(phi, {1, 2, 3}, cfg);
  ASSERT_TRUE(cert.found);
  auto dc = find_delta(phi, {1, 2, 3}, cert.m, cert.a, cert.b);
  ASSERT_TRUE(dc.ok) << dc.failure;
  auto gam = place_gamma(dc, cert.a, 2);
  auto lam = place_lambda(dc, 1);
  for (cplx g : gam) EXPECT_LE(std::abs(g - cert.a), dc.delta + 1e-12);
  std::vector<std::pair<cplx, cplx>> U{{1.0, gam[0]}, {0.5, gam[1]}}, V{{1.0, lam[0]}};
  double prev = INFINITY;
  for (Index N : {4, 8, 16}) {
    auto W = build_convolution_witness(phi, {1, 2, 3}, cert.m, cert.a, cert.b, dc, U, V, N);
    EXPECT_LT(W.v3_rel_error, 1e-9);
    EXPECT_LT(W.log_u_minus_U, prev);
    prev = W.log_u_minus_U;
  }
}

TEST(Convolution, SingleDegreeReduction) {
  auto phi = PhiSpec::poly_times_exp({2.0, 1.0}, 60);
  auto wb = wellbehaved_search(phi, -1.0, {1});
  ASSERT_TRUE(wb.cert.found);
  EXPECT_EQ(wb.cert.m, 1);
  auto dc = find_delta(phi, {1}, 1, wb.cert.a, wb.cert.b);
  ASSERT_TRUE(dc.ok);
  auto gam = place_gamma(dc, wb.cert.a, 1);
  auto lam = place_lambda(dc, 1);
  auto W = build_convolution_witness(phi, {1}, 1, wb.cert.a, wb.cert.b, dc, {{1.0, gam[0]}}, {{1.0, lam[0]}}, 5);
  EXPECT_EQ(W.u.size(), 2u);
  EXPECT_LT(W.v3_rel_error, 1e-9);
}

TEST(Convolution, ParsePhi) {
  EXPECT_EQ(parse_phi("half_exp_plus_exp_i_minus_quarter", {}, 60).form, PhiSpec::Form::HalfExpPlusExpIMinusQuarter);
  EXPECT_EQ(parse_phi("poly_times_exp", {1.0}, 60).form, PhiSpec::Form::PolyTimesExp);
  EXPECT_EQ(parse_phi("", {0.0, 1.0}, 60).form, PhiSpec::Form::Taylor);
  EXPECT_ANY_THROW(parse_phi("bogus", {}, 60));
}
