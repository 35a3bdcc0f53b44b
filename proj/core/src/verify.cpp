#include "hcalg/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hcalg/error.hpp"
#include "hcalg/shifts.hpp"

namespace hcalg {

namespace {

double distance(const TruncatedSeq& a, const TruncatedSeq& b, const SpaceSpec& space, int q) {
  TruncatedSeq d = a - b;
  d.set_log_tail_bound(-std::numeric_limits<double>::infinity());
  return seminorm(d, space, q);
}

}  // namespace

void CriterionInstance::validate() const {
  if (!w) throw Error("instance has no weight");
  if (std::find(A.begin(), A.end(), beta) == A.end()) throw Error("beta is not in A");
  if (!(radius > 0.0) || !(W_radius > 0.0)) throw Error("radii must be positive");
  for (const auto& a : A)
    if (a.size() != u.size()) throw Error("multi-index dimension differs from the number of vectors");
  if (N < 0) throw Error("N must be nonnegative");
}

void WitnessReport::fail_if(bool bad, const std::string& why) {
  if (!bad) return;
  status = "fail";
  auto& s = strings["failure"];
  s += s.empty() ? why : "; " + why;
}

WitnessReport check_instance(const CriterionInstance& inst) {
  inst.validate();
  WitnessReport rep;
  rep.kind = "instance";
  rep.numbers["N"] = static_cast<double>(inst.N);
  rep.numbers["radius"] = inst.radius;
  rep.numbers["W_radius"] = inst.W_radius;
  rep.numbers["q"] = inst.q;
  rep.strings["product"] = product_name(inst.product);
  rep.strings["space"] = inst.space.kind_name();
  rep.strings["weight"] = weight_name(inst.w->kind());
  rep.strings["beta"] = to_string(inst.beta);
  Index reach = 0;
  for (const auto& v : inst.u) reach = std::max(reach, v.horizon());
  if (inst.N > inst.w->horizon()) throw Inconclusive("N beyond the weight horizon");
  for (const auto& a : inst.A) {
    AlphaResult r;
    r.alpha = a;
    r.is_beta = a == inst.beta;
    TruncatedSeq img = apply_shift(*inst.w, monomial(inst.u, a, inst.product), inst.N, Direction::Backward,
                                   &inst.space);
    r.tail = img.tail_bound() + (r.is_beta ? inst.center.tail_bound() : 0.0);
    r.exact_zero = img.empty() && !std::isfinite(img.log_tail_bound());
    if (r.is_beta) {
      r.radius = inst.radius;
      r.norm = distance(img, inst.center, inst.space, inst.q);
    } else {
      r.radius = inst.W_radius;
      TruncatedSeq zero(img.horizon(), img.bilateral());
      r.norm = distance(img, zero, inst.space, inst.q);
    }
    r.in_ball = r.norm + r.tail < r.radius;
    rep.fail_if(!r.in_ball, "alpha " + to_string(a) + " outside its ball");
    rep.alphas.push_back(r);
  }
  return rep;
}

WitnessReport orbit_hit_density(const WeightSeq& w, const TruncatedSeq& x, const Poly& P,
                                const std::vector<OrbitTarget>& targets, Index horizon_N, Index stride,
                                const SpaceSpec& space, ProductKind product, Index burn_in) {
  if (stride < 1) throw Error("stride must be >= 1");
  if (horizon_N < 1) throw Error("orbit horizon must be >= 1");
  for (const auto& t : targets)
    if (!(t.radius > 0.0)) throw Error("target radius must be positive");
  if (horizon_N > w.horizon()) throw Inconclusive("orbit horizon beyond the weight horizon");
  WitnessReport rep;
  rep.kind = "orbit";
  rep.numbers["horizon_N"] = static_cast<double>(horizon_N);
  rep.numbers["stride"] = static_cast<double>(stride);
  rep.numbers["burn_in"] = static_cast<double>(burn_in);
  rep.strings["product"] = product_name(product);
  rep.strings["space"] = space.kind_name();
  rep.strings["weight"] = weight_name(w.kind());

  std::vector<TruncatedSeq> u{x};
  TruncatedSeq cur = eval_poly(P, u, product);
  std::vector<std::vector<Index>> hits(targets.size());
  Index scanned = 0;
  for (Index p = 0; p <= horizon_N; p += stride) {
    if (p > 0) cur = apply_shift(w, cur, stride, Direction::Backward, &space);
    ++scanned;
    std::vector<int> row{static_cast<int>(p)};
    for (std::size_t t = 0; t < targets.size(); ++t) {
      const auto& tg = targets[t];
      bool hit = distance(cur, tg.center, space, tg.q) + cur.tail_bound() < tg.radius;
      row.push_back(hit ? 1 : 0);
      if (hit && p >= 1) hits[t].push_back(p);
    }
    rep.hit_rows.push_back(std::move(row));
  }
  std::vector<bool> sampled(static_cast<std::size_t>(horizon_N) + 1, false);
  for (Index p = 0; p <= horizon_N; p += stride) sampled[static_cast<std::size_t>(p)] = true;
  for (std::size_t t = 0; t < targets.size(); ++t) {
    DensityResult d;
    d.target = targets[t].name.empty() ? "target" + std::to_string(t) : targets[t].name;
    d.hits = hits[t];
    d.scanned = scanned;
    d.horizon = horizon_N;
    d.stride = stride;
    IntSet hi;
    auto it = hits[t].begin();
    for (Index p = 1; p <= horizon_N; ++p) {
      bool h = it != hits[t].end() && *it == p;
      if (h) ++it;
      if (h || !sampled[static_cast<std::size_t>(p)]) hi.push_back(p);
    }
    d.lower_min = density_estimate(hits[t], horizon_N, burn_in, true);
    d.upper_min = density_estimate(hits[t], horizon_N, burn_in, false);
    d.lower_max = density_estimate(hi, horizon_N, burn_in, true);
    d.upper_max = density_estimate(hi, horizon_N, burn_in, false);
    rep.densities.push_back(std::move(d));
  }
  return rep;
}

int exit_code(const std::string& status) {
  if (status == "pass") return 0;
  if (status == "inconclusive") return 2;
  return 1;
}

}  // namespace hcalg
