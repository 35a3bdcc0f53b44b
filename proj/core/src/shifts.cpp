#include "hcalg/shifts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hcalg/error.hpp"

namespace hcalg {

namespace {

double log_op_norm_estimate(const WeightSeq& w, Index steps, Direction dir, const SpaceSpec* space, Index lo,
                            Index hi) {
  double best = -std::numeric_limits<double>::infinity();
  for (Index j = lo; j + steps <= hi; ++j) {
    double v = w.log_product(j, j + steps);
    if (space) {
      double a = space->log_basis_norm(j, 1), b = space->log_basis_norm(j + steps, 1);
      v += dir == Direction::Backward ? a - b : b - a;
    }
    best = std::max(best, v);
  }
  return best;
}

}  // namespace

TruncatedSeq apply_shift(const WeightSeq& w, const TruncatedSeq& x, Index steps, Direction dir,
                         const SpaceSpec* space) {
  if (steps < 0) throw Error("shift steps must be nonnegative");
  if (x.bilateral() && !w.bilateral()) throw Error("bilateral vector needs a bilateral weight");
  TruncatedSeq y(x.horizon(), x.bilateral());
  if (steps == 0) return x;
  for (const auto& [k, v] : x.coeffs()) {
    if (dir == Direction::Backward) {
      Index n = k - steps;
      if (n < y.lower()) {
        if (!x.bilateral()) continue;
        throw Error("backward shift moves index " + std::to_string(k) + " below -L");
      }
      y.set(n, v.scaled_log(w.log_product(n, k)));
    } else {
      Index n = k + steps;
      if (n > x.horizon()) throw Error("forward shift moves index " + std::to_string(k) + " past the horizon");
      y.set(n, v.scaled_log(w.log_product(k, n)));
    }
  }
  if (std::isfinite(x.log_tail_bound())) {
    Index lo = x.bilateral() ? -std::min(x.horizon(), w.horizon()) : 0;
    double lg = log_op_norm_estimate(w, steps, dir, space, lo, w.horizon());
    y.set_log_tail_bound(x.log_tail_bound() + lg);
  }
  return y;
}

ZeroJudgement tends_to_zero(const Samples& s, double tol) {
  ZeroJudgement j;
  if (s.empty()) return j;
  j.final_value = s.back().second;
  std::size_t start = s.size() - std::max<std::size_t>(1, s.size() / 3);
  j.monotone_tail = true;
  for (std::size_t i = start + 1; i < s.size(); ++i)
    if (s[i].second > s[i - 1].second) j.monotone_tail = false;
  j.pass = j.final_value < tol && j.monotone_tail;
  return j;
}

std::vector<GammaOffsetReport> check_gamma_condition(const WeightSeq& w, const SpaceSpec& spec, double gamma,
                                                     const std::vector<Index>& offsets, Index horizon, int q,
                                                     double tol) {
  if (!(gamma > 0.0)) throw Error("gamma must be positive");
  std::vector<GammaOffsetReport> out;
  for (Index l : offsets) {
    GammaOffsetReport rep;
    rep.l = l;
    rep.inf = std::numeric_limits<double>::infinity();
    Samples sub;
    for (Index n = 1; n <= horizon; ++n) {
      double lg = -gamma * w.log_product(l, n + l) + spec.log_basis_norm(n + l, q);
      double v = std::exp(lg);
      rep.values.emplace_back(n, v);
      rep.inf = std::min(rep.inf, v);
      if (v < 1.0 / std::log(M_E + static_cast<double>(n))) {
        rep.subsequence.push_back(n);
        sub.emplace_back(n, v);
      }
    }
    rep.along_subsequence = tends_to_zero(sub, tol);
    out.push_back(std::move(rep));
  }
  return out;
}

RegularityReport verify_regularity(const SpaceSpec& spec, const WeightSeq& w, int r, int q, double C, Index M,
                                   Index rho, Index horizon) {
  if (r > q) throw Error("regularity check needs r <= q");
  if (!(C > 0.0)) throw Error("C must be positive");
  constexpr double kTol = 1e-12;
  RegularityReport rep;
  double lc = std::log(C);
  double worst_c = -std::numeric_limits<double>::infinity();
  for (Index n = 0; n <= horizon; ++n)
    for (Index k = 0; n + k <= horizon; ++k)
      worst_c = std::max(worst_c, spec.log_basis_norm(n, r) + spec.log_basis_norm(k, r) - lc -
                                      spec.log_basis_norm(n + k, q));
  // For fixed (u,v) the worst tuple (k_j) takes the largest weight in the
  // window v-u times, so scanning that maximum is the exhaustive check.
  double worst_l = -std::numeric_limits<double>::infinity();
  for (Index n = M; n <= horizon; ++n) {
    double max_lw = -std::numeric_limits<double>::infinity();
    for (Index k = std::max<Index>(n - M + rho, 1); k <= n + rho; ++k) max_lw = std::max(max_lw, w.log_w(k));
    for (Index u = n - M; u <= n; ++u)
      for (Index v = u + 1; v <= n; ++v) {
        if (u < 0) continue;
        double lhs = static_cast<double>(v - u) * max_lw + spec.log_basis_norm(u, r);
        worst_l = std::max(worst_l, lhs - lc - spec.log_basis_norm(v, q));
      }
  }
  rep.worst_c = std::exp(worst_c);
  rep.worst_lemma = std::exp(worst_l);
  rep.pass = worst_c <= kTol && worst_l <= kTol;
  return rep;
}

std::vector<InverseExampleRow> check_inverse_example(Index horizon) {
  auto w = WeightSeq::bilateral_inverse_example(horizon + 1);
  Gamma g;
  g.form = Gamma::Form::AbsPlusOne;
  auto space = SpaceSpec::weighted_c0(g, true);
  std::vector<InverseExampleRow> rows;
  for (Index n = 1; n <= horizon; ++n) {
    // log(w_{-n} ... w_{-1}); the inverse has rho_k = 1/w_k.
    double lw = w.log_product(-n - 1, -1);
    double le = space.log_basis_norm(-n, 1);
    InverseExampleRow row;
    row.n = n;
    double lf = 0.5 * lw + le;
    double lb = lw + le;
    row.forward = std::exp(lf);
    row.backward = std::exp(lb);
    row.forward_log_error = std::abs(lf);
    row.backward_log_error = std::abs(lb + std::log(static_cast<double>(n + 1)));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace hcalg
