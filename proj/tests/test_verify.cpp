#include <gtest/gtest.h>

#include <json.hpp>
#include <sstream>

#include "hcalg/json_io.hpp"
#include "hcalg/oracle.hpp"
#include "hcalg/verify.hpp"
#include "hcalg/witnesses.hpp"

using namespace hcalg;

namespace {

WitnessReport zero_orbit(Index horizon, Index stride, double radius = 0.5, Index burn_in = 0) {
  auto w = WeightSeq::rolewicz(2.0, horizon + 64);
  std::vector<OrbitTarget> t{{TruncatedSeq(4), radius, 1, "zero"}};
  return orbit_hit_density(w, TruncatedSeq(4), Poly::power(2), t, horizon, stride, SpaceSpec::lp(1),
                           ProductKind::Cauchy, burn_in);
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST(Verify, ZeroOrbitAlwaysHits) {
  auto r = zero_orbit(100, 1);
  ASSERT_EQ(r.densities.size(), 1u);
  EXPECT_DOUBLE_EQ(r.densities[0].lower_min, 1.0);
  EXPECT_DOUBLE_EQ(r.densities[0].upper_max, 1.0);
  EXPECT_EQ(r.status, "pass");
}

TEST(Verify, CsvRowCount) {
  for (auto [H, s] : {std::pair<Index, Index>{100, 1}, {100, 7}, {1000, 10}}) {
    auto r = zero_orbit(H, s);
    auto csv = hit_csv(r);
    EXPECT_EQ(count_lines(csv), static_cast<std::size_t>(H / s + 1) + 1) << "header plus rows";
    EXPECT_EQ(r.hit_rows.size(), static_cast<std::size_t>(H / s + 1));
  }
}

TEST(Verify, StrideBracketsDensity) {
  auto r = zero_orbit(1000, 10, 0.5, 100);
  const auto& d = r.densities[0];
  EXPECT_LE(d.lower_min, d.lower_max);
  EXPECT_LE(d.upper_min, d.upper_max);
  EXPECT_NEAR(d.lower_min, 0.1, 0.02);
  EXPECT_DOUBLE_EQ(d.lower_max, 1.0);
}

TEST(Verify, DensityMonotoneInRadius) {
  auto w = WeightSeq::rolewicz(2.0, 600);
  auto sp = SpaceSpec::lp(1);
  auto v = TruncatedSeq::basis(0, 0);
  auto W = build_ufhc_coordwise(1, 3, v, TruncatedSeq(0), w, sp, 5, 1, 100);
  double prev = -1.0;
  for (double rad : {0.01, 0.05, 0.2, 1.0}) {
    std::vector<OrbitTarget> t{{v.with_horizon(W.u.horizon()), rad, 1, "ball"}};
    auto r = orbit_hit_density(w, W.u, Poly::power(1), t, 400, 1, sp, ProductKind::Coordinatewise);
    EXPECT_GE(r.densities[0].lower_min, prev);
    prev = r.densities[0].lower_min;
  }
}

TEST(Verify, CheckInstanceCoordwiseWitness) {
  auto w = WeightSeq::rolewicz(2.0, 4096);
  auto sp = SpaceSpec::lp(1);
  std::vector<MultiIndex> A{{1}, {2}, {3}};
  auto kb = kappa_beta_from(A, {1.0});
  std::vector<TruncatedSeq> x{TruncatedSeq::from_values({0.2, 0.1}, 1)};
  auto y = TruncatedSeq::from_values({1.0, -0.5}, 1);
  Index nk = search_coordwise_nk(A, x, y, kb, w, sp, 1e-9, 1e-6, 2000);
  auto W = build_coordwise_witness(A, x, y, nk, kb, w);
  CriterionInstance inst{A, kb.beta, W.u, nk, y, 1e-9, 1, 1e-6, ProductKind::Coordinatewise, &w, sp};
  auto rep = check_instance(inst);
  EXPECT_EQ(rep.status, "pass");
  ASSERT_EQ(rep.alphas.size(), 3u);
  int betas = 0;
  for (const auto& a : rep.alphas) betas += a.is_beta;
  EXPECT_EQ(betas, 1);
}

TEST(Verify, CheckInstanceFlagsCauchyZeros) {
  auto w = WeightSeq::rolewicz(2.0, 4096);
  auto sp = SpaceSpec::lp(1);
  std::vector<MultiIndex> A{{1}, {2}};
  std::vector<TruncatedSeq> x{TruncatedSeq(1)};
  auto y = TruncatedSeq::basis(1, 1);
  Index J = search_cauchy_J(A, x, y, w, sp, 1, 1.0, 1e-3, 500);
  auto W = build_cauchy_witness(A, x, y, J, w, sp, 1, 1.0);
  CriterionInstance inst{A, W.beta, W.u, W.N, y.with_horizon(W.horizon), 1e-3, 1, 1e-12, ProductKind::Cauchy, &w, sp};
  auto rep = check_instance(inst);
  EXPECT_EQ(rep.status, "pass");
  for (const auto& a : rep.alphas)
    if (!a.is_beta) EXPECT_TRUE(a.exact_zero);
}

TEST(Verify, SmallerTailStillPasses) {
  auto w = WeightSeq::rolewicz(2.0, 200);
  auto u = TruncatedSeq::basis(10, 40).scaled(XComplex(std::ldexp(1.0, -10)));
  u.set_tail_bound(1e-7);  // pushed through B^10 the tail grows by 2^10
  auto y = TruncatedSeq::basis(0, 40);
  CriterionInstance inst{{{1}}, {1}, {u}, 10, y, 0.01, 1, 0.01, ProductKind::Coordinatewise, &w, SpaceSpec::lp(1)};
  EXPECT_EQ(check_instance(inst).status, "pass");
  inst.u[0].set_tail_bound(1e-10);
  EXPECT_EQ(check_instance(inst).status, "pass");
  inst.u[0].set_tail_bound(1e-3);
  EXPECT_EQ(check_instance(inst).status, "fail");
}

TEST(Verify, ValidateRejectsMissingWeight) {
  CriterionInstance inst;
  inst.A = {{1}};
  inst.beta = {1};
  inst.u = {TruncatedSeq(1)};
  EXPECT_ANY_THROW(check_instance(inst));
}

TEST(Verify, EmptyReportIsValidJson) {
  WitnessReport r;
  auto j = nlohmann::json::parse(report_json(r));
  EXPECT_EQ(j.at("schema_version"), kSchemaVersion);
  EXPECT_EQ(j.at("status"), "pass");
}

TEST(Verify, ReportsAreDeterministic) {
  auto a = report_json(zero_orbit(200, 3)), b = report_json(zero_orbit(200, 3));
  EXPECT_EQ(a, b);
  WitnessReport r;
  r.numbers["inf"] = INFINITY;
  r.numbers["nan"] = NAN;
  auto j = nlohmann::json::parse(report_json(r));
  EXPECT_EQ(j["numbers"]["inf"], "inf");
  EXPECT_EQ(j["numbers"]["nan"], "nan");
}

TEST(Verify, ExitCodes) {
  EXPECT_EQ(exit_code("pass"), 0);
  EXPECT_EQ(exit_code("fail"), 1);
  EXPECT_EQ(exit_code("inconclusive"), 2);
}

TEST(Verify, FailIfOverridesInconclusive) {
  WitnessReport r;
  r.status = "inconclusive";
  r.fail_if(false, "fine");
  EXPECT_EQ(r.status, "inconclusive");
  r.fail_if(true, "broken");
  EXPECT_EQ(r.status, "fail");
}

TEST(Verify, OracleCompareDetectsMismatch) {
  auto x = TruncatedSeq::from_values({1.0, 2.0}, 4);
  auto brute = oracle::from_seq(x);
  EXPECT_TRUE(oracle::compare(brute, x).pass);
  auto y = x;
  y.set(1, XComplex(2.0 + 1e-6));
  EXPECT_FALSE(oracle::compare(brute, y).pass);
  auto c = oracle::compare({}, TruncatedSeq(4));
  EXPECT_TRUE(c.pass);
  EXPECT_TRUE(c.zero_a && c.zero_b);
}

TEST(Verify, OracleStepShiftMatchesFast) {
  auto w = WeightSeq::exp_n_alpha(0.5, 400);
  auto x = TruncatedSeq::from_values({0.0, 1.0, cplx(0, 2), 0.0, 0.5}, 300);
  x.set(250, XComplex(3.0));
  for (Index N : {1, 5, 100, 249}) {
    auto fast = apply_shift(w, x, N, Direction::Backward);
    EXPECT_TRUE(oracle::compare(oracle::shift_backward(oracle::from_seq(x), w, N, 0), fast).pass) << N;
  }
}
