#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hcalg/algebra.hpp"
#include "hcalg/oracle.hpp"

using namespace hcalg;

namespace {

TruncatedSeq vals(std::vector<cplx> v, Index L = 8) { return TruncatedSeq::from_values(v, L); }

void expect_seq(const TruncatedSeq& a, const std::vector<cplx>& want, double tol = 1e-12) {
  for (std::size_t i = 0; i < want.size(); ++i) {
    EXPECT_NEAR(std::abs(a.at(static_cast<Index>(i)).value() - want[i]), 0.0, tol) << "index " << i;
  }
  if (!a.empty()) EXPECT_LT(a.max_index(), static_cast<Index>(want.size()));
}

TruncatedSeq random_vec(std::mt19937_64& g, Index support, Index L) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  TruncatedSeq x(L);
  for (Index i = 0; i <= support; ++i) x.set(i, XComplex(cplx(u(g), u(g))));
  return x;
}

}  // namespace

TEST(Algebra, ProductExamples) {
  expect_seq(product(vals({1, 2}), vals({3, 4}), ProductKind::Coordinatewise), {3, 8});
  auto e1 = TruncatedSeq::basis(1, 8);
  expect_seq(product(e1, e1, ProductKind::Cauchy), {0, 0, 1});
  auto e4 = TruncatedSeq::basis(4, 8);
  expect_seq(product(e4, e4, ProductKind::Coordinatewise), {0, 0, 0, 0, 1});
}

TEST(Algebra, PowerExamples) {
  expect_seq(power(vals({2, 3}), 2, ProductKind::Coordinatewise), {4, 9});
  expect_seq(power(TruncatedSeq::basis(1, 8), 3, ProductKind::Cauchy), {0, 0, 0, 1});
  auto x = vals({0.5, cplx(1, 2), -3});
  for (auto k : {ProductKind::Coordinatewise, ProductKind::Cauchy}) expect_seq(power(x, 1, k), {0.5, cplx(1, 2), -3});
}

TEST(Algebra, EvalPolyExamples) {
  auto x = vals({1, 2, 3});
  expect_seq(eval_poly(Poly::power(1), {x}, ProductKind::Cauchy), {1, 2, 3});
  expect_seq(eval_poly(Poly::power(2), {vals({0, 1})}, ProductKind::Cauchy), {0, 0, 1});
  Poly P;
  P.d = 2;
  P.add({1, 1}, 1.0);
  expect_seq(eval_poly(P, {vals({1, 2}), vals({3, 4})}, ProductKind::Coordinatewise), {3, 8});
}

TEST(Algebra, PolyRejectsConstantTerm) {
  Poly P;
  P.d = 1;
  P.add({0}, 1.0);
  EXPECT_ANY_THROW(P.validate());
  EXPECT_ANY_THROW(P.add({1, 1}, 1.0));
}

TEST(Algebra, CauchyCommutativeAssociative) {
  std::mt19937_64 g(21);
  const Index L = 30;
  for (int t = 0; t < 20; ++t) {
    auto x = random_vec(g, 8, L), y = random_vec(g, 8, L), z = random_vec(g, 8, L);
    auto xy = product(x, y, ProductKind::Cauchy), yx = product(y, x, ProductKind::Cauchy);
    auto d = xy - yx;
    for (const auto& [n, v] : d.coeffs()) EXPECT_LT(v.abs(), 1e-12);
    auto a = product(xy, z, ProductKind::Cauchy), b = product(x, product(y, z, ProductKind::Cauchy), ProductKind::Cauchy);
    for (Index n = 0; n <= 24; ++n) EXPECT_LT(std::abs(a.at(n).value() - b.at(n).value()), 1e-12);
  }
}

TEST(Algebra, CauchyTruncationMovesMassToTail) {
  auto x = TruncatedSeq::basis(5, 6).scaled(XComplex(2.0));
  auto y = product(x, x, ProductKind::Cauchy);
  EXPECT_TRUE(y.empty());
  EXPECT_GT(y.tail_bound(), 0.0);
}

TEST(Algebra, Submultiplicative) {
  std::mt19937_64 g(22);
  struct Case {
    SpaceSpec s;
    ProductKind k;
  };
  std::vector<Case> cases{{SpaceSpec::lp(1), ProductKind::Coordinatewise}, {SpaceSpec::lp(2), ProductKind::Coordinatewise},
                          {SpaceSpec::c0(), ProductKind::Coordinatewise}, {SpaceSpec::lp(1), ProductKind::Cauchy},
                          {SpaceSpec::entire(4), ProductKind::Cauchy},    {SpaceSpec::omega(4), ProductKind::Cauchy}};
  for (int t = 0; t < 20; ++t) {
    auto x = random_vec(g, 6, 20), y = random_vec(g, 6, 20);
    for (const auto& c : cases)
      for (int q = 1; q <= c.s.Q; ++q)
        EXPECT_LE(seminorm(product(x, y, c.k), c.s, q), seminorm(x, c.s, q) * seminorm(y, c.s, q) * (1 + 1e-12));
  }
}

TEST(Algebra, MatchesBruteForceOracle) {
  std::mt19937_64 g(23);
  for (auto k : {ProductKind::Coordinatewise, ProductKind::Cauchy}) {
    auto x = random_vec(g, 5, 40), y = random_vec(g, 5, 40);
    auto fast = monomial({x, y}, {2, 3}, k);
    auto brute = oracle::monomial({oracle::from_seq(x), oracle::from_seq(y)}, {2, 3}, k);
    EXPECT_TRUE(oracle::compare(brute, fast).pass);
  }
}

TEST(Algebra, FreeGeneratorExample) {
  auto b = [](Index n) { return std::ldexp(1.0, -static_cast<int>(n)); };
  auto fg = free_generators(1, SpaceSpec::lp(1), b, {0.5}, 6);
  ASSERT_EQ(fg.g.size(), 1u);
  EXPECT_DOUBLE_EQ(fg.g[0].at(0).value().real(), 1.0);
  for (Index k = 1; k <= 6; ++k)
    EXPECT_NEAR(fg.g[0].at(k).value().real(), std::pow(0.5, k) * fg.c[static_cast<std::size_t>(k)], 1e-15);
}

TEST(Algebra, FreeGeneratorsHaveUnitLeadingCoefficient) {
  auto sp = SpaceSpec::lp(1);
  auto fg = free_generators(4, sp, default_b(sp), seeded_lambdas(4, 99), 40);
  for (int n = 0; n < 4; ++n) {
    EXPECT_DOUBLE_EQ(fg.g[n].at(n).value().real(), 1.0);
    EXPECT_EQ(fg.g[n].min_index(), n);
  }
}

TEST(Algebra, GeneratorPowersApproachBasisVector) {
  auto sp = SpaceSpec::lp(1);
  auto fg = free_generators(2, sp, default_b(sp), seeded_lambdas(2, 5), 80);
  for (int n = 0; n < 2; ++n) {
    auto en = TruncatedSeq::basis(n, 80);
    double prev = INFINITY;
    bool reached = false;
    for (int p = 1; p <= 200 && !reached; ++p) {
      auto gp = power(fg.g[n], p, ProductKind::Coordinatewise);
      double d = seminorm(gp - en, sp, 1) + gp.tail_bound();
      if (p > 20) EXPECT_LE(d, prev * (1 + 1e-12));
      prev = d;
      reached = d < 1e-6;
    }
    EXPECT_TRUE(reached) << "n=" << n;
  }
}

TEST(Algebra, GeneratorBlocks) {
  EXPECT_EQ(generator_block(0), (std::pair<Index, Index>{0, 1}));
  EXPECT_EQ(generator_block(1), (std::pair<Index, Index>{1, 3}));
  EXPECT_EQ(generator_block(2), (std::pair<Index, Index>{1, 3}));
  EXPECT_EQ(generator_block(3), (std::pair<Index, Index>{3, 6}));
}

TEST(Algebra, VandermondeCertificate) {
  auto cert = vandermonde_certificate(seeded_lambdas(3, 99), 2);
  EXPECT_TRUE(cert.nonzero);
  EXPECT_GT(cert.min_gap, 0.0);
  EXPECT_TRUE(std::isfinite(cert.log_abs_det));
  // repeated lambda collapses two nodes
  auto bad = vandermonde_certificate({0.5, 0.5}, 1);
  EXPECT_FALSE(bad.nonzero);
}

TEST(Algebra, SeededLambdasReproducible) {
  EXPECT_EQ(seeded_lambdas(5, 7), seeded_lambdas(5, 7));
  EXPECT_NE(seeded_lambdas(5, 7), seeded_lambdas(5, 8));
}
