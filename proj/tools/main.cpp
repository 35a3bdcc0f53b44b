// hcalg command-line front end.
//
//   hcalg sets build --count 3 --horizon 100000 --gap 1,2,3
//   hcalg witness cauchy --job job.json --out report.json
//   hcalg conv search-e --closed-form half_exp_plus_exp_i_minus_quarter --I 1,2,3
//   hcalg check condition-b --job job.json
//   hcalg orbit --job job.json --csv hits.csv
//   hcalg suite --quick --jobs 4
//
// Exit codes: 0 pass, 1 fail, 2 inconclusive, 64 usage or config error, 74 I/O error.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hcalg/algebra.hpp"
#include "hcalg/convolution.hpp"
#include "hcalg/densitysets.hpp"
#include "hcalg/error.hpp"
#include "hcalg/json_io.hpp"
#include "hcalg/oracle.hpp"
#include "hcalg/shifts.hpp"
#include "hcalg/suite.hpp"
#include "hcalg/targets.hpp"
#include "hcalg/verify.hpp"
#include "hcalg/witnesses.hpp"

using nlohmann::json;
using namespace hcalg;

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitIo = 74;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json read_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read " + path);
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void write_out(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) throw IoError("cannot write " + path);
}

json num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

// ---------------------------------------------------------------------------
// Job parsing

template <class T>
T get_or(const json& j, const char* key, T def) {
  return j.contains(key) ? j.at(key).get<T>() : def;
}

cplx parse_cplx(const json& v) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2) return {v[0].get<double>(), v[1].get<double>()};
  throw ConfigError("complex numbers are written as x or [re, im]");
}

// Dense list starting at index 0; each entry a number or [re, im].
TruncatedSeq parse_vec(const json& v, Index horizon_floor = 0) {
  if (!v.is_array()) throw ConfigError("vectors are JSON arrays");
  Index top = static_cast<Index>(v.size()) - 1;
  TruncatedSeq x(std::max<Index>(std::max<Index>(top, 0), horizon_floor));
  for (std::size_t i = 0; i < v.size(); ++i) x.set(static_cast<Index>(i), XComplex(parse_cplx(v[i])));
  return x;
}

std::vector<Index> parse_index_list(const std::string& s) {
  std::vector<Index> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(std::stoll(tok));
  return out;
}

std::vector<MultiIndex> parse_A(const json& j) {
  std::vector<MultiIndex> A;
  for (const auto& a : j) {
    if (a.is_number_integer())
      A.push_back({a.get<int>()});
    else
      A.push_back(a.get<MultiIndex>());
  }
  if (A.empty()) throw ConfigError("A must be non-empty");
  return A;
}

SpaceSpec parse_space(const json& j) {
  auto kind = get_or<std::string>(j, "kind", "lp");
  bool bil = get_or(j, "bilateral", false);
  if (kind == "lp") return SpaceSpec::lp(get_or(j, "p", 1.0), bil);
  if (kind == "c0") return SpaceSpec::c0(bil);
  if (kind == "omega") return SpaceSpec::omega(get_or(j, "Q", 8));
  if (kind == "entire") return SpaceSpec::entire(get_or(j, "Q", 8));
  if (kind == "weighted_c0") {
    Gamma g;
    const auto& gj = j.at("gamma");
    if (gj.is_array()) {
      g.form = Gamma::Form::Explicit;
      g.values = gj.get<std::vector<double>>();
    } else {
      auto name = gj.get<std::string>();
      if (name == "counterexample_odd") g.form = Gamma::Form::CounterexampleOdd;
      else if (name == "abs_plus_one") g.form = Gamma::Form::AbsPlusOne;
      else if (name == "pow2") g.form = Gamma::Form::Pow2;
      else throw ConfigError("unknown gamma '" + name + "'");
    }
    return SpaceSpec::weighted_c0(g, bil);
  }
  throw ConfigError("unknown space kind '" + kind + "'");
}

WeightSeq parse_weight(const json& j) {
  auto kind = parse_weight_kind(get_or<std::string>(j, "kind", "rolewicz"));
  Index H = get_or<Index>(j, "horizon", 4096);
  switch (kind) {
    case WeightKind::Rolewicz: return WeightSeq::rolewicz(get_or(j, "lambda", 2.0), H);
    case WeightKind::OnePlusLambdaOverN: return WeightSeq::one_plus_lambda_over_n(get_or(j, "lambda", 1.0), H);
    case WeightKind::ExpNAlpha: return WeightSeq::exp_n_alpha(get_or(j, "alpha", 0.5), H);
    case WeightKind::CounterexampleOdd: return WeightSeq::counterexample_odd(H);
    case WeightKind::MkWeight: return WeightSeq::mk_weight(j.at("M").get<std::vector<Index>>(), H);
    case WeightKind::BilateralInverseExample: return WeightSeq::bilateral_inverse_example(H);
    case WeightKind::Derivative: return WeightSeq::derivative(H);
    case WeightKind::Explicit:
      return WeightSeq::explicit_list(j.at("values").get<std::vector<double>>(), get_or(j, "bilateral", false));
  }
  throw ConfigError("unsupported weight");
}

struct Job {
  json raw;
  SpaceSpec space;
  json weight_json;
  ProductKind product = ProductKind::Coordinatewise;
  std::uint64_t seed = 1;
  json task;
};

Job load_job(const std::string& path) {
  Job job;
  job.raw = read_json(path);
  try {
    job.space = parse_space(job.raw.value("space", json::object()));
    job.weight_json = job.raw.value("weight", json::object());
    job.product = parse_product(job.raw.value("product", std::string("coordinatewise")));
    job.seed = job.raw.value("seed", std::uint64_t{1});
    job.task = job.raw.value("task", json::object());
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return job;
}

void stamp(WitnessReport& rep, const Job& job) {
  rep.seed = job.seed;
  rep.strings["space"] = job.space.kind_name();
  rep.strings["product"] = product_name(job.product);
  rep.strings["weight"] = job.weight_json.value("kind", std::string("rolewicz"));
  rep.numbers["weight_horizon"] = static_cast<double>(job.weight_json.value("horizon", Index{4096}));
  for (const auto& [k, v] : job.weight_json.items())
    if (v.is_number()) rep.numbers["weight_" + k] = v.get<double>();
  if (job.space.kind == SpaceKind::Lp) rep.numbers["space_p"] = job.space.p;
  if (!job.space.single_norm()) rep.numbers["space_Q"] = job.space.Q;
}

int finish(const WitnessReport& rep, const std::string& out, const std::string& csv) {
  try {
    emit_report(rep, out.empty() ? "-" : out, csv);
  } catch (const Error& e) {
    throw IoError(e.what());
  }
  return exit_code(rep.status);
}

// ---------------------------------------------------------------------------
// witness

WitnessReport witness_coordwise(const Job& job, const WeightSeq& w) {
  const auto& t = job.task;
  auto A = parse_A(t.at("A"));
  std::vector<TruncatedSeq> x;
  for (const auto& xi : t.at("x")) x.push_back(parse_vec(xi));
  auto y = parse_vec(t.at("y"));
  double tb = get_or(t, "tol_beta", 1e-9), ta = get_or(t, "tol_alpha", 1e-6);
  Index budget = get_or<Index>(t, "budget", 2000);
  auto kb = select_kappa_beta(A, job.seed);
  Index nk = search_coordwise_nk(A, x, y, kb, w, job.space, tb, ta, budget);
  auto W = build_coordwise_witness(A, x, y, nk, kb, w);
  CriterionInstance inst{A, kb.beta, W.u, nk, y, tb, 1, ta, ProductKind::Coordinatewise, &w, job.space};
  auto rep = check_instance(inst);
  rep.kind = "witness/coordwise";
  rep.numbers["n_k"] = static_cast<double>(nk);
  rep.numbers["kappa_draws"] = kb.draws;
  rep.numbers["tol_beta"] = tb;
  rep.numbers["tol_alpha"] = ta;
  rep.numbers["budget"] = static_cast<double>(budget);
  for (std::size_t j = 0; j < kb.kappa.size(); ++j) rep.numbers["kappa_" + std::to_string(j + 1)] = kb.kappa[j];
  std::vector<oracle::Sparse> us;
  for (const auto& u : W.u) us.push_back(oracle::from_seq(u));
  double worst = 0.0;
  for (const auto& a : A) {
    auto brute = oracle::shift_backward(oracle::monomial(us, a, ProductKind::Coordinatewise), w, nk, 0);
    auto c = oracle::compare(brute, W.predicted.at(a));
    worst = std::max(worst, c.rel_error);
    rep.fail_if(!c.pass, "oracle disagrees for " + to_string(a));
  }
  rep.numbers["oracle_rel_error"] = worst;
  rep.strings["root_branch"] = "principal";
  return rep;
}

WitnessReport witness_cauchy(const Job& job, const WeightSeq& w) {
  const auto& t = job.task;
  auto A = parse_A(t.at("A"));
  std::vector<TruncatedSeq> x;
  for (const auto& xi : t.at("x")) x.push_back(parse_vec(xi));
  auto y = parse_vec(t.at("y"));
  int r = get_or(t, "r", 1);
  double delta = get_or(t, "delta", 1.0), tol = get_or(t, "tol", 1e-3);
  Index budget = get_or<Index>(t, "budget", 500);
  Index J = t.contains("J") ? t.at("J").get<Index>() : search_cauchy_J(A, x, y, w, job.space, r, delta, tol, budget);
  auto W = build_cauchy_witness(A, x, y, J, w, job.space, r, delta);
  CriterionInstance inst{A, W.beta, W.u, W.N, y.with_horizon(W.horizon), tol, r, get_or(t, "W_radius", 1e-12),
                         ProductKind::Cauchy, &w, job.space};
  auto rep = check_instance(inst);
  rep.kind = "witness/cauchy";
  for (const auto& a : rep.alphas)
    if (!a.is_beta) rep.fail_if(!a.exact_zero, "alpha " + to_string(a.alpha) + " is not exactly zero");
  rep.numbers["J"] = static_cast<double>(J);
  rep.numbers["N"] = static_cast<double>(W.N);
  rep.numbers["p"] = static_cast<double>(W.p);
  rep.numbers["m"] = W.m;
  rep.numbers["delta"] = delta;
  rep.numbers["tol"] = tol;
  rep.numbers["r"] = r;
  rep.numbers["budget"] = static_cast<double>(budget);
  rep.numbers["log_eps"] = W.log_eps;
  rep.numbers["residual"] = seminorm(W.residual, job.space, r);
  std::string s;
  for (Index v : W.s) s += (s.empty() ? "" : ",") + std::to_string(v);
  rep.strings["shift_amounts"] = s;
  return rep;
}

WitnessReport witness_bilateral(const Job& job, const WeightSeq& w) {
  const auto& t = job.task;
  int m0 = get_or(t, "m0", 1);
  Index nk = t.at("n_k").get<Index>();
  // Bilateral vectors: {"entries": [[n, re, im], ...]}.
  auto bil = [&](const json& v) {
    TruncatedSeq x(nk + static_cast<Index>(v.at("entries").size()) + w.horizon() / 2, true);
    x = TruncatedSeq(w.horizon(), true);
    for (const auto& e : v.at("entries")) x.set(e.at(0).get<Index>(), XComplex(cplx(e.at(1).get<double>(), e.at(2).get<double>())));
    return x;
  };
  auto x = bil(t.at("x")), y = bil(t.at("y"));
  auto W = build_bilateral_witness(m0, x, y, w, nk);
  WitnessReport rep;
  rep.kind = "witness/bilateral";
  rep.numbers["n_k"] = static_cast<double>(nk);
  rep.numbers["m0"] = m0;
  auto img = apply_shift(w, power(W.u, m0, ProductKind::Coordinatewise), nk, Direction::Backward, &job.space);
  auto expect = W.target_part + W.spill;
  auto c = oracle::compare(oracle::from_seq(img), expect);
  rep.numbers["rel_error_vs_target_plus_spill"] = c.rel_error;
  rep.numbers["spill_norm"] = seminorm(W.spill, job.space, 1);
  rep.fail_if(!c.pass, "B^n u^m0 differs from target + spill");
  return rep;
}

WitnessReport witness_ufhc_coordwise(const Job& job, const WeightSeq& w) {
  const auto& t = job.task;
  int m0 = get_or(t, "m0", 1), m1 = get_or(t, "m1", 3);
  auto v = parse_vec(t.at("v"));
  TruncatedSeq x = t.contains("x") ? parse_vec(t.at("x")) : TruncatedSeq(0);
  double eps = get_or(t, "eps", 0.1);
  Index window = get_or<Index>(t, "window", 10000), N1 = get_or<Index>(t, "N1", 1);
  double M = 1.0;
  for (const auto& [l, vl] : v.coeffs()) M = std::max(M, vl.pow(1.0 / m0).abs());
  Index p = std::max<Index>(0, v.max_index());
  Index N = get_or<Index>(t, "N", std::max(p + 1, find_tail_threshold(w, job.space, eps, p, M)));
  Index terms = get_or<Index>(t, "terms", (window + 2 * N) / N + 1);
  auto W = build_ufhc_coordwise(m0, m1, v, x, w, job.space, N, N1, terms);
  std::vector<OrbitTarget> targets{{v.with_horizon(W.u.horizon()), 2.0 * eps, 1, "B(v,2eps)"}};
  auto rep = orbit_hit_density(w, W.u, Poly::power(m0), targets, window, N, job.space, ProductKind::Coordinatewise, N);
  rep.kind = "witness/ufhc-coordwise";
  rep.numbers["N"] = static_cast<double>(N);
  rep.numbers["N1"] = static_cast<double>(N1);
  rep.numbers["terms"] = static_cast<double>(terms);
  rep.numbers["eps"] = eps;
  rep.numbers["m0"] = m0;
  rep.numbers["m1"] = m1;
  rep.numbers["u_tail"] = W.u.tail_bound();
  const auto& d = rep.densities.front();
  rep.fail_if(d.lower_min < 1.0 / (2.0 * static_cast<double>(N)), "lower density below 1/(2N)");
  return rep;
}

WitnessReport witness_ufhc_cauchy(const Job& job, const WeightSeq& w) {
  const auto& t = job.task;
  int m = get_or(t, "m", 2);
  auto y = parse_vec(t.at("y"));
  TruncatedSeq x = t.contains("x") ? parse_vec(t.at("x")) : TruncatedSeq(0);
  double c = get_or(t, "c", 0.5), d = get_or(t, "d", 0.6), eta = get_or(t, "eta", 0.05);
  Index sigma = get_or<Index>(t, "sigma", 1000);
  Index q = get_or<Index>(t, "q", choose_q(w, job.space, y, eta));
  auto W = build_ufhc_cauchy(m, y, x, w, c, d, q, sigma);
  WitnessReport rep;
  rep.kind = "witness/ufhc-cauchy";
  rep.numbers["q"] = static_cast<double>(q);
  rep.numbers["sigma"] = static_cast<double>(sigma);
  rep.numbers["c"] = c;
  rep.numbers["d"] = d;
  rep.numbers["eta"] = eta;
  rep.numbers["m"] = m;
  rep.numbers["E_size"] = static_cast<double>(W.E.size());
  rep.numbers["density_ratio"] = W.density_ratio;
  rep.numbers["density_limit"] = W.density_limit;
  auto um = power(W.u, m, ProductKind::Cauchy);
  auto yh = y.with_horizon(um.horizon());
  double worst = 0.0;
  Index nonzero = 0;
  for (Index s : W.E) {
    for (int n = 1; n < m; ++n) {
      auto b = apply_shift(w, power(W.u, n, ProductKind::Cauchy), s, Direction::Backward, &job.space);
      if (!b.empty() || std::isfinite(b.log_tail_bound())) ++nonzero;
    }
    auto b = apply_shift(w, um, s, Direction::Backward, &job.space);
    worst = std::max(worst, seminorm(b - yh, job.space, 1) + b.tail_bound());
  }
  rep.numbers["worst_residual"] = worst;
  rep.numbers["nonzero_lower_powers"] = static_cast<double>(nonzero);
  rep.fail_if(nonzero > 0, "lower powers do not vanish on E_sigma");
  rep.fail_if(!(worst < 2.0 * eta), "B^s u^m leaves B(y, 2 eta)");
  return rep;
}

WitnessReport witness_c0(const Job& job) {
  const auto& t = job.task;
  int count = get_or(t, "count", 3);
  Index horizon = get_or<Index>(t, "horizon", 20000);
  auto gap = get_or<std::vector<Index>>(t, "gap", {1, 2, 3});
  auto fam = enforce_pairwise_gap(build_family_far(count, horizon), gap);
  auto M = compute_Mk_prefix(fam, 64).M;
  const Index wh = horizon + count + 16;
  if (M.back() < wh) M.push_back(std::max(wh, M.size() >= 2 ? 2 * M.back() - M[M.size() - 2] : M.back() + 1));
  auto w = WeightSeq::mk_weight(M, wh);
  auto targets = dense_targets(count, horizon, job.seed);
  Index vh = get_or<Index>(t, "verify_horizon", horizon / 2);
  int extra = get_or(t, "extra_degrees", 3);
  auto W = build_c0_fhc(targets, fam, w, horizon, vh, extra);
  WitnessReport rep;
  rep.kind = "witness/c0";
  rep.numbers["horizon"] = static_cast<double>(horizon);
  rep.numbers["verify_horizon"] = static_cast<double>(vh);
  rep.numbers["extra_degrees"] = extra;
  rep.numbers["M_count"] = static_cast<double>(M.size());
  bool any_inconclusive = false;
  for (const auto& r : W.reports) {
    std::string k = "p" + std::to_string(r.p) + "_";
    rep.numbers[k + "N"] = static_cast<double>(r.Np);
    rep.numbers[k + "checked"] = static_cast<double>(r.checked);
    rep.numbers[k + "worst_target"] = r.worst_target;
    rep.numbers[k + "worst_higher"] = r.worst_higher;
    rep.numbers[k + "worst_cross"] = r.worst_cross;
    rep.strings[k + "status"] = r.pass ? "pass" : (r.inconclusive || !r.reason.empty()) ? "inconclusive" : "fail";
    if (!r.reason.empty()) rep.strings[k + "reason"] = r.reason;
    if (!r.pass && (r.inconclusive || !r.reason.empty())) any_inconclusive = true;
    rep.fail_if(!r.pass && !r.inconclusive && r.reason.empty(), "p=" + std::to_string(r.p) + " fails");
  }
  if (rep.status == "pass" && any_inconclusive) rep.status = "inconclusive";
  return rep;
}

int cmd_witness(const std::string& kind, const std::string& job_path, const std::string& out) {
  Job job = load_job(job_path);
  WitnessReport rep;
  if (kind == "c0") {
    rep = witness_c0(job);
  } else {
    auto w = parse_weight(job.weight_json);
    if (kind == "coordwise") rep = witness_coordwise(job, w);
    else if (kind == "cauchy") rep = witness_cauchy(job, w);
    else if (kind == "bilateral") rep = witness_bilateral(job, w);
    else if (kind == "ufhc-coordwise") rep = witness_ufhc_coordwise(job, w);
    else if (kind == "ufhc-cauchy") rep = witness_ufhc_cauchy(job, w);
    else throw ConfigError("unknown witness kind '" + kind + "'");
  }
  stamp(rep, job);
  return finish(rep, out, "");
}

// ---------------------------------------------------------------------------
// orbit

int cmd_orbit(const std::string& job_path, const std::string& out, const std::string& csv) {
  Job job = load_job(job_path);
  auto w = parse_weight(job.weight_json);
  const auto& t = job.task;
  auto x = parse_vec(t.at("x"), get_or<Index>(t, "x_horizon", 0));
  Poly P;
  if (t.contains("poly")) {
    P.d = 1;
    for (const auto& term : t.at("poly")) P.add({term.at("m").get<int>()}, parse_cplx(term.at("c")));
  } else {
    P = Poly::power(get_or(t, "m", 1));
  }
  std::vector<OrbitTarget> targets;
  for (const auto& tg : t.at("targets")) {
    OrbitTarget o;
    o.center = parse_vec(tg.at("center")).with_horizon(x.horizon());
    o.radius = tg.at("radius").get<double>();
    o.q = get_or(tg, "q", 1);
    o.name = get_or<std::string>(tg, "name", "");
    targets.push_back(std::move(o));
  }
  Index horizon_N = t.at("horizon_N").get<Index>();
  Index stride = get_or<Index>(t, "stride", 1);
  Index burn = get_or<Index>(t, "burn_in", 0);
  auto rep = orbit_hit_density(w, x, P, targets, horizon_N, stride, job.space, job.product, burn);
  stamp(rep, job);
  return finish(rep, out, csv);
}

// ---------------------------------------------------------------------------
// sets

int cmd_sets(int count, Index horizon, const std::string& gap, Index burn_in, int mk, bool with_sets,
             const std::string& out) {
  auto fam = build_family_far(count, horizon, burn_in);
  if (!gap.empty()) fam = enforce_pairwise_gap(fam, parse_index_list(gap));
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "density_family";
  j["count"] = count;
  j["horizon"] = fam.horizon;
  j["burn_in"] = fam.burn_in;
  j["a"] = fam.a;
  json kap = json::object();
  for (const auto& [C, k] : fam.kappa) kap[std::to_string(C)] = k;
  j["kappa"] = kap;
  j["lower_density"] = json::array();
  for (double d : fam.lower_density) j["lower_density"].push_back(num(d));
  j["sizes"] = json::array();
  for (const auto& s : fam.sets) j["sizes"].push_back(s.size());
  if (with_sets) j["sets"] = fam.sets;
  j["separation"] = check_separation(fam).empty() ? "ok" : check_separation(fam);
  if (mk > 0) {
    auto pre = compute_Mk_prefix(fam, mk);
    j["M"] = pre.M;
    j["M_exhausted"] = pre.exhausted;
  }
  write_out(out, j.dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------
// conv

struct PhiArgs {
  std::string closed_form = "half_exp_plus_exp_i_minus_quarter";
  std::string poly;
  int taylor_len = 60;
  std::string phi_file;
};

std::vector<cplx> parse_cplx_list(const std::string& s) {
  std::vector<cplx> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    auto colon = tok.find(':');
    if (colon == std::string::npos)
      out.emplace_back(std::stod(tok), 0.0);
    else
      out.emplace_back(std::stod(tok.substr(0, colon)), std::stod(tok.substr(colon + 1)));
  }
  return out;
}

PhiSpec make_phi(const PhiArgs& a) {
  if (!a.phi_file.empty()) {
    auto j = read_json(a.phi_file);
    std::vector<cplx> poly;
    for (const auto& c : j.value("poly", json::array())) poly.push_back(parse_cplx(c));
    return parse_phi(j.value("closed_form", std::string("taylor")), poly, j.value("taylor_len", 60));
  }
  return parse_phi(a.closed_form, parse_cplx_list(a.poly), a.taylor_len);
}

std::vector<int> parse_I(const std::string& s) {
  std::vector<int> I;
  for (Index v : parse_index_list(s)) I.push_back(static_cast<int>(v));
  if (I.empty()) throw ConfigError("I must be non-empty");
  return I;
}

json cert_json(const ConditionECert& c) {
  json j;
  j["found"] = c.found;
  j["m"] = c.m;
  j["a"] = {c.a.real(), c.a.imag()};
  j["b"] = {c.b.real(), c.b.imag()};
  j["k"] = c.k;
  j["phi_mb"] = num(c.phi_mb);
  j["min_margin"] = num(c.min_margin);
  j["closed_vs_taylor"] = num(c.closed_vs_taylor);
  j["tried"] = c.tried;
  j["reason"] = c.reason;
  j["rows"] = json::array();
  for (const auto& r : c.rows)
    j["rows"].push_back({{"n", r.n}, {"d", r.d}, {"lhs", num(r.lhs)}, {"rhs", num(r.rhs)}, {"log_margin", num(r.log_margin)}});
  return j;
}

int cmd_conv(const std::string& sub, const PhiArgs& pa, const std::string& Is, const std::string& mode, Index k_max,
             double radius, int steps, double margin, const std::string& v, const std::string& lambda, Index L,
             Index N, const std::string& U, const std::string& V, const std::string& out) {
  auto phi = make_phi(pa);
  json j;
  j["schema_version"] = kSchemaVersion;
  j["phi"] = phi.name();
  int code = 0;
  if (sub == "eigen") {
    auto lam = parse_cplx_list(lambda);
    if (lam.size() != 1) throw ConfigError("--lambda takes one complex number re:im");
    auto e = check_eigen_relation(phi, lam[0], L, 1.0, 1e-8);
    j["kind"] = "conv/eigen";
    j["L"] = L;
    j["computed"] = num(e.computed);
    j["tolerance"] = num(e.tolerance);
    j["status"] = e.pass ? "pass" : "fail";
    code = e.pass ? 0 : 1;
  } else {
    auto I = parse_I(Is);
    SearchConfig cfg;
    cfg.mode = mode == "grid" ? SearchConfig::Mode::Grid : SearchConfig::Mode::Lattice;
    cfg.k_max = k_max;
    cfg.radius = radius;
    cfg.steps = steps;
    cfg.margin = margin;
    j["I"] = I;
    ConditionECert cert;
    if (sub == "wellbehaved") {
      auto vv = parse_cplx_list(v);
      if (vv.size() != 1) throw ConfigError("--v takes one complex number re:im");
      auto wb = wellbehaved_search(phi, vv[0], I);
      j["kind"] = "conv/wellbehaved";
      j["t0"] = num(wb.t0);
      j["t1"] = num(wb.t1);
      j["a0"] = num(wb.a0);
      cert = wb.cert;
    } else {
      cert = search_condition_e(phi, I, cfg);
      j["kind"] = sub == "witness" ? "conv/witness" : "conv/search-e";
      j["search"] = {{"mode", mode}, {"k_max", k_max}, {"radius", radius}, {"steps", steps}, {"margin", margin}};
    }
    j["certificate"] = cert_json(cert);
    code = cert.found ? 0 : 2;
    if (sub == "witness" && cert.found) {
      auto dc = find_delta(phi, I, cert.m, cert.a, cert.b);
      auto ua = parse_cplx_list(U), vb = parse_cplx_list(V);
      auto gam = place_gamma(dc, cert.a, static_cast<int>(ua.size()));
      auto lam = place_lambda(dc, static_cast<int>(vb.size()));
      std::vector<std::pair<cplx, cplx>> Up, Vp;
      for (std::size_t i = 0; i < ua.size(); ++i) Up.emplace_back(ua[i], gam[i]);
      for (std::size_t i = 0; i < vb.size(); ++i) Vp.emplace_back(vb[i], lam[i]);
      auto W = build_convolution_witness(phi, I, cert.m, cert.a, cert.b, dc, Up, Vp, N);
      j["delta"] = {{"delta", num(dc.delta)}, {"halvings", dc.halvings}, {"samples", dc.samples}};
      j["N"] = N;
      j["log_TN_v1"] = num(W.log_TN_v1);
      j["log_TN_v2"] = num(W.log_TN_v2);
      j["v3_rel_error"] = num(W.v3_rel_error);
      j["log_u_minus_U"] = num(W.log_u_minus_U);
      j["terms"] = W.u.size();
      json other = json::array();
      for (const auto& [n, lb] : W.other_powers) other.push_back({{"n", n}, {"log_bound", num(lb)}});
      j["other_powers"] = other;
    }
    j["status"] = code == 0 ? "pass" : "inconclusive";
  }
  write_out(out, j.dump(2) + "\n");
  return code;
}

// ---------------------------------------------------------------------------
// check

int cmd_check(const std::string& what, const std::string& job_path, const std::string& out) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "check/" + what;
  bool pass = true;
  if (what == "inverse") {
    auto rows = check_inverse_example(1000);
    double f = 0.0, b = 0.0;
    for (const auto& r : rows) {
      f = std::max(f, std::abs(r.forward_log_error));
      b = std::max(b, std::abs(r.backward_log_error));
    }
    j["rows"] = rows.size();
    j["forward_log_error"] = f;
    j["backward_log_error"] = b;
    pass = f < 1e-12 && b < 1e-12;
  } else {
    Job job = load_job(job_path);
    auto w = parse_weight(job.weight_json);
    const auto& t = job.task;
    j["seed"] = job.seed;
    if (what == "condition-b") {
      auto sig = t.at("sigmas").get<std::vector<Index>>();
      auto rep = check_condition_b(w, job.space, get_or(t, "m", 2), get_or(t, "c", 0.5), sig, get_or(t, "r", 1));
      json vals = json::array();
      for (const auto& [s, v] : rep.values) vals.push_back({{"sigma", s}, {"value", num(v)}});
      j["values"] = vals;
      j["decreasing"] = rep.decreasing;
      j["converged"] = rep.converged;
      pass = rep.decreasing && rep.converged;
    } else if (what == "gamma") {
      auto offs = get_or<std::vector<Index>>(t, "offsets", {0});
      auto reps = check_gamma_condition(w, job.space, get_or(t, "gamma", 0.5), offs, get_or<Index>(t, "horizon", 200),
                                        get_or(t, "q", 1), get_or(t, "tol", 1e-3));
      json arr = json::array();
      for (const auto& r : reps) {
        arr.push_back({{"l", r.l}, {"inf", num(r.inf)}, {"subsequence_size", r.subsequence.size()},
                       {"final", num(r.along_subsequence.final_value)}, {"pass", r.along_subsequence.pass}});
        pass = pass && r.along_subsequence.pass;
      }
      j["offsets"] = arr;
    } else if (what == "regularity") {
      auto r = verify_regularity(job.space, w, get_or(t, "r", 1), get_or(t, "q", 1), get_or(t, "C", 1.0),
                                 get_or<Index>(t, "M", 10), get_or<Index>(t, "rho", 1), get_or<Index>(t, "horizon", 200));
      j["worst_c"] = num(r.worst_c);
      j["worst_lemma"] = num(r.worst_lemma);
      pass = r.pass;
    } else if (what == "tail-threshold") {
      Index N = find_tail_threshold(w, job.space, get_or(t, "eps", 0.1), get_or<Index>(t, "p", 0), get_or(t, "M", 1.0));
      j["N"] = N;
    } else {
      throw ConfigError("unknown check '" + what + "'");
    }
  }
  j["status"] = pass ? "pass" : "fail";
  write_out(out, j.dump(2) + "\n");
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// suite

int cmd_suite(bool quick, unsigned jobs, const std::string& out) {
  auto res = run_acceptance(quick, jobs);
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "suite";
  j["quick"] = quick;
  j["criteria"] = json::array();
  for (const auto& r : res.criteria) {
    std::printf("%s criterion %2d %-32s %s\n", r.status.c_str(), r.id, r.name.c_str(), r.detail.c_str());
    j["criteria"].push_back({{"id", r.id}, {"name", r.name}, {"status", r.status}, {"detail", r.detail}, {"limit_s", r.limit}});
  }
  j["oracle_comparisons"] = res.oracle.size();
  if (!out.empty()) write_out(out, j.dump(2) + "\n");
  if (res.all_pass()) return 0;
  for (const auto& r : res.criteria)
    if (r.status == "FAIL") return 1;
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hcalg: numerical laboratory for hypercyclic algebras of weighted shifts"};
  app.require_subcommand(1);
  std::string out, csv, job;

  auto* sets = app.add_subcommand("sets", "Density-set families");
  auto* sets_build = sets->add_subcommand("build", "Build a family with far-apart sets");
  sets->require_subcommand(1);
  int count = 3, mk = 0;
  Index horizon = 100000, burn_in = 0;
  std::string gap;
  bool with_sets = false;
  sets_build->add_option("--count", count, "Number of sets")->capture_default_str();
  sets_build->add_option("--horizon", horizon, "Integer horizon")->capture_default_str();
  sets_build->add_option("--gap", gap, "Comma list a(1),a(2),... for the pairwise gap property");
  sets_build->add_option("--burn-in", burn_in, "Density burn-in (0 = horizon/100)");
  sets_build->add_option("--mk", mk, "Also compute this many M_k");
  sets_build->add_flag("--with-sets", with_sets, "Include the full sets");
  sets_build->add_option("--out", out, "Output path (default stdout)");

  auto* wit = app.add_subcommand("witness", "Build and verify a witness from a job file");
  std::string wkind;
  wit->add_option("kind", wkind, "coordwise | cauchy | bilateral | ufhc-coordwise | ufhc-cauchy | c0")->required();
  wit->add_option("--job", job, "Job JSON")->required();
  wit->add_option("--out", out, "Report path (default stdout)");

  auto* conv = app.add_subcommand("conv", "Convolution operators phi(D)");
  std::string csub = "search-e", Is = "1,2,3", mode = "lattice", v = "-1", lambda = "1:0", U = "1", V = "1";
  PhiArgs pa;
  Index k_max = 10, L = 60, N = 10;
  double radius = 4.0, margin = 1e-6;
  int steps = 9;
  conv->add_option("action", csub, "search-e | wellbehaved | witness | eigen")->required();
  conv->add_option("--phi", pa.phi_file, "PhiSpec JSON");
  conv->add_option("--closed-form", pa.closed_form, "half_exp_plus_exp_i_minus_quarter | poly_times_exp | taylor")
      ->capture_default_str();
  conv->add_option("--poly", pa.poly, "Comma list of coefficients, re or re:im");
  conv->add_option("--taylor-len", pa.taylor_len)->capture_default_str();
  conv->add_option("--I", Is, "Comma list of degrees")->capture_default_str();
  conv->add_option("--mode", mode, "lattice | grid")->capture_default_str();
  conv->add_option("--k-max", k_max)->capture_default_str();
  conv->add_option("--radius", radius)->capture_default_str();
  conv->add_option("--steps", steps)->capture_default_str();
  conv->add_option("--margin", margin)->capture_default_str();
  conv->add_option("--v", v, "Ray direction re:im")->capture_default_str();
  conv->add_option("--lambda", lambda, "Eigenvalue point re:im")->capture_default_str();
  conv->add_option("--L", L, "Taylor truncation")->capture_default_str();
  conv->add_option("--N", N, "Orbit index for the witness")->capture_default_str();
  conv->add_option("--U", U, "Coefficients of the U combination")->capture_default_str();
  conv->add_option("--V", V, "Coefficients of the V combination")->capture_default_str();
  conv->add_option("--out", out);

  auto* chk = app.add_subcommand("check", "Standalone property checks");
  std::string what;
  chk->add_option("what", what, "inverse | condition-b | gamma | regularity | tail-threshold")->required();
  chk->add_option("--job", job, "Job JSON (not needed for inverse)");
  chk->add_option("--out", out);

  auto* orb = app.add_subcommand("orbit", "Orbit hitting densities");
  orb->add_option("--job", job, "Job JSON")->required();
  orb->add_option("--out", out);
  orb->add_option("--csv", csv, "CSV of (p, hit) rows");

  auto* suite = app.add_subcommand("suite", "Run the acceptance battery");
  bool quick = false;
  unsigned jobs = 0;
  suite->add_flag("--quick", quick, "Spec-sized runs");
  suite->add_option("--out", out);
  suite->add_option("--jobs", jobs, "Worker threads (0 = available parallelism)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }
  try {
    if (sets->parsed()) return cmd_sets(count, horizon, gap, burn_in, mk, with_sets, out);
    if (wit->parsed()) return cmd_witness(wkind, job, out);
    if (conv->parsed())
      return cmd_conv(csub, pa, Is, mode, k_max, radius, steps, margin, v, lambda, L, N, U, V, out);
    if (chk->parsed()) {
      if (what != "inverse" && job.empty()) throw ConfigError("--job is required for " + what);
      return cmd_check(what, job, out);
    }
    if (orb->parsed()) return cmd_orbit(job, out, csv);
    if (suite->parsed()) return cmd_suite(quick, jobs, out);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitUsage;
  } catch (const json::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitUsage;
  } catch (const IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return kExitIo;
  } catch (const Inconclusive& e) {
    std::fprintf(stderr, "inconclusive: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
