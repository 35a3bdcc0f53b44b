#include "hcalg/witnesses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "hcalg/error.hpp"
#include "hcalg/rng.hpp"

namespace hcalg {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kInf = std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

double norm_power(const SpaceSpec& s) { return s.kind == SpaceKind::Lp ? s.p : 1.0; }
bool sup_norm(const SpaceSpec& s) { return s.kind == SpaceKind::C0 || s.kind == SpaceKind::WeightedC0; }

Index support_max(const TruncatedSeq& x) { return x.empty() ? -1 : x.max_index(); }

Index support_max(const std::vector<TruncatedSeq>& x) {
  Index m = -1;
  for (const auto& v : x) m = std::max(m, support_max(v));
  return m;
}


void check_A(const std::vector<MultiIndex>& A, std::size_t d) {
  if (A.empty()) throw Error("multi-index set is empty");
  for (const auto& a : A) {
    if (a.size() != d) throw Error("multi-index " + to_string(a) + " has the wrong arity");
    for (int v : a)
      if (v < 0) throw Error("negative exponent in " + to_string(a));
    if (degree(a) == 0) throw Error("0 is not allowed in A");
  }
}

}  // namespace

double SeriesBound::total() const { return std::exp(log_total()); }
double SeriesBound::log_total() const { return log_add(log_value, log_remainder); }

SeriesBound series_bound(std::vector<double> logs, const SpaceSpec& spec) {
  SeriesBound b;
  std::vector<double> copy = logs;
  b.log_value = combine_log_terms(copy, spec);
  b.log_remainder = kNegInf;
  if (logs.empty() || logs.back() == kNegInf) return b;
  std::size_t span = std::max<std::size_t>(2, logs.size() / 4);
  std::size_t start = logs.size() > span ? logs.size() - span : 0;
  double lr = kNegInf;
  int pairs = 0;
  for (std::size_t i = start + 1; i < logs.size(); ++i) {
    if (!std::isfinite(logs[i]) || !std::isfinite(logs[i - 1])) continue;
    lr = std::max(lr, logs[i] - logs[i - 1]);
    ++pairs;
  }
  if (pairs == 0 || lr >= 0.0) {
    b.ratio = pairs == 0 ? kInf : std::exp(lr);
    b.converged = false;
    b.log_remainder = kInf;
    return b;
  }
  b.ratio = std::exp(lr);
  if (sup_norm(spec)) {
    b.log_remainder = logs.back() + lr;
  } else {
    double pw = norm_power(spec);
    b.log_remainder = logs.back() + lr - std::log1p(-std::exp(pw * lr)) / pw;
  }
  return b;
}

// ---------------------------------------------------------------------------

double L_alpha(const MultiIndex& a, const std::vector<double>& kappa) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * kappa[j];
  return s;
}

namespace {

std::optional<KappaBeta> try_kappa(const std::vector<MultiIndex>& A, const std::vector<double>& kappa0) {
  std::size_t best = 0;
  double lo = kInf, second = kInf;
  for (std::size_t i = 0; i < A.size(); ++i) {
    double L = L_alpha(A[i], kappa0);
    if (L < lo) {
      second = lo;
      lo = L;
      best = i;
    } else if (L < second) {
      second = L;
    }
  }
  if (A.size() > 1 && !(second - lo > 1e-9 * std::max(1.0, lo))) return std::nullopt;
  KappaBeta kb;
  kb.beta = A[best];
  for (double k : kappa0) kb.kappa.push_back(k / lo);
  return kb;
}

}  // namespace

KappaBeta kappa_beta_from(const std::vector<MultiIndex>& A, const std::vector<double>& kappa0) {
  check_A(A, kappa0.size());
  for (double k : kappa0)
    if (!(k > 0.0)) throw Error("kappa0 must be positive");
  auto kb = try_kappa(A, kappa0);
  if (!kb) throw Error("argmin of L_alpha(kappa0) over A is not unique");
  kb->draws = 1;
  return *kb;
}

KappaBeta select_kappa_beta(const std::vector<MultiIndex>& A, std::uint64_t seed, int budget) {
  if (A.empty()) throw Error("multi-index set is empty");
  std::size_t d = A.front().size();
  check_A(A, d);
  Rng rng(seed);
  for (int draw = 1; draw <= budget; ++draw) {
    std::vector<double> k0(d);
    for (auto& k : k0) k = rng.uniform();
    if (auto kb = try_kappa(A, k0)) {
      kb->draws = draw;
      return *kb;
    }
  }
  throw Error("no direction with a unique argmin after " + std::to_string(budget) + " draws");
}

CoordWitness build_coordwise_witness(const std::vector<MultiIndex>& A, const std::vector<TruncatedSeq>& x,
                                     const TruncatedSeq& y, Index n_k, const KappaBeta& kb, const WeightSeq& w) {
  const std::size_t d = kb.kappa.size();
  check_A(A, d);
  if (x.size() != d) throw Error("need one x per coordinate");
  if (y.bilateral()) throw Error("coordinatewise witness is unilateral");
  CoordWitness W;
  W.kb = kb;
  W.n_k = n_k;
  W.p = std::max<Index>(0, support_max(y));
  Index px = support_max(x);
  if (n_k <= px + W.p) throw Error("n_k must exceed the x supports plus p");
  Index H = n_k + W.p;
  for (const auto& xi : x) H = std::max(H, xi.horizon());
  for (std::size_t j = 0; j < d; ++j) {
    TruncatedSeq u = x[j].with_horizon(H);
    for (const auto& [l, yl] : y.coeffs())
      u.set(n_k + l, yl.pow(kb.kappa[j]).scaled_log(-kb.kappa[j] * w.log_product(l, n_k + l)));
    W.u.push_back(std::move(u));
  }
  for (const auto& a : A) {
    double L = L_alpha(a, kb.kappa);
    TruncatedSeq pred(H);
    for (const auto& [l, yl] : y.coeffs()) pred.set(l, yl.pow(L).scaled_log((1.0 - L) * w.log_product(l, n_k + l)));
    W.predicted[a] = std::move(pred);
  }
  return W;
}

Index search_coordwise_nk(const std::vector<MultiIndex>& A, const std::vector<TruncatedSeq>& x, const TruncatedSeq& y,
                          const KappaBeta& kb, const WeightSeq& w, const SpaceSpec& space, double tol_beta,
                          double tol_alpha, Index budget) {
  check_A(A, kb.kappa.size());
  Index p = std::max<Index>(0, support_max(y));
  Index n0 = support_max(x) + p + 1;
  for (Index n = n0; n < n0 + budget; ++n) {
    bool ok = true;
    for (const auto& a : A) {
      double L = L_alpha(a, kb.kappa);
      bool is_beta = a == kb.beta;
      std::vector<double> logs;
      for (const auto& [l, yl] : y.coeffs()) {
        double lg = L * yl.log_abs() + (1.0 - L) * w.log_product(l, n + l) + space.log_basis_norm(l, 1);
        // For beta the closed form is y itself; only rounding separates them.
        logs.push_back(is_beta ? lg + std::log(1e-15) : lg);
      }
      double lv = combine_log_terms(logs, space);
      if (lv >= std::log(is_beta ? tol_beta : tol_alpha)) {
        ok = false;
        break;
      }
    }
    if (ok) return n;
  }
  throw Inconclusive("no n_k passes within the search budget");
}

BilateralWitness build_bilateral_witness(int m0, const TruncatedSeq& x, const TruncatedSeq& y, const WeightSeq& w,
                                         Index n_k) {
  if (m0 < 1) throw Error("m0 must be >= 1");
  if (!w.bilateral()) throw Error("bilateral witness needs a bilateral weight");
  Index p = 0, px = 0;
  for (const auto& [l, v] : y.coeffs()) p = std::max(p, std::abs(l));
  for (const auto& [l, v] : x.coeffs()) px = std::max(px, std::abs(l));
  if (n_k <= p + px) throw Error("n_k must exceed p + max|supp x|");
  Index H = n_k + std::max(p, px);
  if (w.horizon() < H) throw Error("horizon insufficient for the spill term");
  BilateralWitness W;
  W.n_k = n_k;
  W.m0 = m0;
  W.u = x.with_horizon(H);
  if (!W.u.bilateral()) W.u = TruncatedSeq(H, true) + x.with_horizon(H);
  const double inv = 1.0 / m0;
  for (const auto& [l, yl] : y.coeffs()) W.u.set(n_k + l, yl.pow(inv).scaled_log(-inv * w.log_product(l, n_k + l)));
  W.target_part = TruncatedSeq(H, true);
  for (const auto& [l, yl] : y.coeffs()) W.target_part.set(l, yl);
  W.spill = TruncatedSeq(H, true);
  for (const auto& [l, xl] : x.coeffs()) {
    XComplex v = xl;
    for (int i = 1; i < m0; ++i) v *= xl;
    W.spill.set(l - n_k, v.scaled_log(w.log_product(l - n_k, l)));
  }
  return W;
}

// ---------------------------------------------------------------------------

MultiIndex lex_max(const std::vector<MultiIndex>& A) {
  if (A.empty()) throw Error("multi-index set is empty");
  return *std::max_element(A.begin(), A.end());
}

std::vector<Index> choose_shift_amounts(const std::vector<MultiIndex>& A, const MultiIndex& beta, Index p) {
  const std::size_t d = beta.size();
  check_A(A, d);
  std::vector<Index> s(d, 0);
  for (std::size_t ii = d; ii-- > 0;) {
    Index need = 4 * p + 1;
    for (const auto& a : A) {
      if (a == beta) continue;
      bool agree = true;
      for (std::size_t j = 0; j < ii; ++j) agree = agree && a[j] == beta[j];
      if (!agree) continue;
      Index diff = beta[ii] - a[ii];
      if (diff <= 0) {
        if (diff < 0) throw Error("beta is not the lexicographic maximum of A");
        continue;
      }
      Index rest = 0;
      for (std::size_t j = ii + 1; j < d; ++j) rest += (beta[j] - a[j]) * s[j];
      Index gap = 3 * p - rest;
      // smallest s with diff * s > gap
      Index lo = gap < 0 ? 0 : gap / diff + 1;
      need = std::max(need, lo);
    }
    s[ii] = need;
  }
  return s;
}

namespace {

struct Permuted {
  std::vector<int> perm;
  std::vector<MultiIndex> A;
  MultiIndex beta;
  std::vector<TruncatedSeq> x;
};

Permuted permute_leading(const std::vector<MultiIndex>& A, const std::vector<TruncatedSeq>& x) {
  if (x.empty()) throw Error("need at least one coordinate");
  check_A(A, x.size());
  const std::size_t d = x.size();
  MultiIndex beta = lex_max(A);
  std::size_t i0 = 0;
  while (beta[i0] == 0) ++i0;
  Permuted P;
  for (std::size_t k = 0; k < d; ++k) P.perm.push_back(static_cast<int>((i0 + k) % d));
  for (const auto& a : A) {
    MultiIndex b(d);
    for (std::size_t k = 0; k < d; ++k) b[k] = a[static_cast<std::size_t>(P.perm[k])];
    P.A.push_back(b);
  }
  P.beta = lex_max(P.A);
  for (std::size_t k = 0; k < d; ++k) P.x.push_back(x[static_cast<std::size_t>(P.perm[k])]);
  return P;
}

Index cauchy_p(const std::vector<TruncatedSeq>& x, const TruncatedSeq& y) {
  return std::max<Index>({1, support_max(y), support_max(x)});
}

}  // namespace

Index cauchy_min_J(const std::vector<MultiIndex>& A, const std::vector<TruncatedSeq>& x, const TruncatedSeq& y) {
  auto P = permute_leading(A, x);
  Index p = cauchy_p(x, y);
  auto s = choose_shift_amounts(P.A, P.beta, p);
  return std::max(s[0], 3 * p + std::max<Index>(0, support_max(x)) + 1);
}

CauchyWitness build_cauchy_witness(const std::vector<MultiIndex>& A, const std::vector<TruncatedSeq>& x,
                                   const TruncatedSeq& y, Index J, const WeightSeq& w, const SpaceSpec& space, int r,
                                   double delta) {
  if (!(delta > 0.0)) throw Error("delta must be positive");
  if (y.bilateral()) throw Error("Cauchy witness is unilateral");
  auto P = permute_leading(A, x);
  const std::size_t d = x.size();
  CauchyWitness W;
  W.perm = P.perm;
  W.beta = lex_max(A);
  W.m = P.beta[0];
  W.p = cauchy_p(x, y);
  const Index p = W.p;
  W.s = choose_shift_amounts(P.A, P.beta, p);
  Index Jmin = cauchy_min_J(A, x, y);
  if (J < Jmin) throw Error("J = " + std::to_string(J) + " too small for support separation (need " +
                            std::to_string(Jmin) + ")");
  W.J = J;
  W.rho = 0;
  for (std::size_t i = 1; i < d; ++i) W.rho += P.beta[i] * W.s[i];
  W.eta.assign(d, 0.0);
  double log_eta_beta = 0.0;
  for (std::size_t i = 1; i < d; ++i) {
    W.eta[i] = delta / (2.0 * space.basis_norm(W.s[i], r));
    log_eta_beta += P.beta[i] * std::log(W.eta[i]);
  }
  const int m = W.m;
  const Index rho = W.rho;
  std::vector<Index> top(d);  // largest index of each u_i
  for (std::size_t i = 1; i < d; ++i) top[i] = std::max<Index>(W.s[i], support_max(P.x[i]));

  Index H = 0;
  Index block_start = 0;
  if (m >= 2) {
    W.N = m * J - 3 * p + rho;
    double a = kNegInf;
    for (Index l = 0; l <= p; ++l)
      a = std::max(a, (space.log_basis_norm(J - 3 * p + l, r) - w.logW(m * J - 3 * p + l + rho)) / (2.0 * (m - 1)));
    double b = std::min(-space.log_basis_norm(J, r), -w.logW(m * J + rho) / m);
    W.log_eps = a + 0.5 * b;
    if (!std::isfinite(W.log_eps)) throw Error("log eps is not finite");
    block_start = J - 3 * p;
    top[0] = J;
  } else {
    W.N = J + rho;
    block_start = J;
    top[0] = J + p;
  }
  for (const auto& a : P.A) {
    Index h = 0;
    for (std::size_t i = 0; i < d; ++i) h += a[i] * top[i];
    H = std::max(H, h);
  }
  H = std::max(H, W.N + 3 * p);
  for (const auto& xi : x) H = std::max(H, xi.horizon());
  W.horizon = H;

  W.d.assign(static_cast<std::size_t>(p) + 1, XComplex());
  for (Index j = 0; j <= p; ++j) {
    XComplex yj = y.at(j);
    if (yj.is_zero()) continue;
    double lg = w.logW(j) - log_eta_beta;
    if (m >= 2)
      lg += -std::log(static_cast<double>(m)) - (m - 1) * W.log_eps - w.logW(m * J - 3 * p + j + rho);
    else
      lg += -w.logW(J + j + rho);
    W.d[static_cast<std::size_t>(j)] = yj.scaled_log(lg);
  }

  std::vector<TruncatedSeq> u(d);
  u[0] = P.x[0].with_horizon(H);
  for (Index j = 0; j <= p; ++j) u[0].add(block_start + j, W.d[static_cast<std::size_t>(j)]);
  if (m >= 2) u[0].add(J, XComplex::polar_log(W.log_eps, 0.0));
  for (std::size_t i = 1; i < d; ++i) {
    u[i] = P.x[i].with_horizon(H);
    u[i].add(W.s[i], XComplex(W.eta[i]));
  }
  W.u.assign(d, TruncatedSeq());
  for (std::size_t k = 0; k < d; ++k) W.u[static_cast<std::size_t>(P.perm[k])] = std::move(u[k]);

  W.residual = TruncatedSeq(H);
  if (m >= 2)
    W.residual.set(3 * p, XComplex::polar_log(m * W.log_eps + log_eta_beta + w.logW(m * J + rho) - w.logW(3 * p), 0.0));
  return W;
}

Index search_cauchy_J(const std::vector<MultiIndex>& A, const std::vector<TruncatedSeq>& x, const TruncatedSeq& y,
                      const WeightSeq& w, const SpaceSpec& space, int r, double delta, double tol, Index budget) {
  Index J0 = cauchy_min_J(A, x, y);
  for (Index J = J0; J < J0 + budget; ++J) {
    auto W = build_cauchy_witness(A, x, y, J, w, space, r, delta);
    if (seminorm(W.residual, space, r) < tol) return J;
  }
  throw Inconclusive("no J within the search budget brings the residual below tolerance");
}

// ---------------------------------------------------------------------------

namespace {

// Terms c_i (with basis weights) for i in [N, w.horizon], worst case |y| = M.
std::vector<double> tail_terms(const WeightSeq& w, const SpaceSpec& space, Index N, Index p, double M, int q) {
  std::vector<double> prefix(static_cast<std::size_t>(p) + 1);
  double s = kNegInf;
  for (Index l = 0; l <= p; ++l) prefix[static_cast<std::size_t>(l)] = s = log_add(s, w.logW(l));
  std::vector<double> logs;
  const double lm = std::log(M);
  for (Index i = N; i <= w.horizon(); ++i) {
    Index k = std::min(p, i - N);
    logs.push_back(lm + prefix[static_cast<std::size_t>(k)] - w.logW(i) + space.log_basis_norm(i, q));
  }
  return logs;
}

}  // namespace

SeriesBound tail_threshold_bound(const WeightSeq& w, const SpaceSpec& space, Index N, Index p, double M, int q) {
  if (N < 0 || p < 0) throw Error("N and p must be nonnegative");
  if (N > w.horizon()) throw Inconclusive("N beyond the weight horizon");
  return series_bound(tail_terms(w, space, N, p, M, q), space);
}

Index find_tail_threshold(const WeightSeq& w, const SpaceSpec& space, double eps, Index p, double M, int q) {
  if (!(eps > 0.0) || !(M > 0.0)) throw Error("eps and M must be positive");
  if (p > w.horizon() / 2) throw Inconclusive("weight horizon too short for p");
  // The remainder estimate is taken once from the widest scan so the predicate
  // is monotone in N.
  auto full = series_bound(tail_terms(w, space, p, p, M, q), space);
  if (!full.converged) throw Inconclusive("tail series does not look convergent at the horizon");
  auto bound = [&](Index N) {
    auto logs = tail_terms(w, space, N, p, M, q);
    return log_add(combine_log_terms(logs, space), full.log_remainder);
  };
  const double le = std::log(eps);
  Index lo = p, hi = w.horizon() - p;
  if (bound(lo) < le) return lo;
  if (!(bound(hi) < le)) throw Inconclusive("no N below the weight horizon meets eps");
  while (hi - lo > 1) {
    Index mid = lo + (hi - lo) / 2;
    (bound(mid) < le ? hi : lo) = mid;
  }
  return hi;
}

UfhcCoordWitness build_ufhc_coordwise(int m0, int m1, const TruncatedSeq& v, const TruncatedSeq& x,
                                      const WeightSeq& w, const SpaceSpec& space, Index N, Index N1, Index terms) {
  if (m0 < 1 || m1 < m0) throw Error("need 1 <= m0 <= m1");
  if (terms < 1) throw Error("need at least one block");
  UfhcCoordWitness W;
  W.m0 = m0;
  W.m1 = m1;
  W.N = N;
  W.N1 = N1;
  W.terms = terms;
  W.p = std::max<Index>(0, support_max(v));
  if (N <= W.p) throw Error("blocks collide: N must exceed p");
  if (N * N1 <= support_max(x)) throw Error("N_1 must place the first block past supp(x)");
  Index H = N * (N1 + terms - 1) + W.p;
  W.u = x.with_horizon(std::max(H, x.horizon()));
  const double inv = 1.0 / m0;
  for (Index k = N1; k < N1 + terms; ++k)
    for (const auto& [l, vl] : v.coeffs()) W.u.set(N * k + l, vl.pow(inv).scaled_log(-inv * w.log_product(l, N * k + l)));
  if (v.empty()) return W;
  // Tail over the dropped blocks, one mass per block.
  std::vector<double> blocks;
  for (Index k = N1 + terms; N * k + W.p <= w.horizon(); ++k) {
    std::vector<double> logs;
    for (const auto& [l, vl] : v.coeffs())
      logs.push_back(inv * vl.log_abs() - inv * w.log_product(l, N * k + l) + space.log_basis_norm(N * k + l, 1));
    blocks.push_back(combine_log_terms(logs, space));
  }
  if (blocks.size() < 2) throw Inconclusive("weight horizon leaves no room for the tail estimate");
  auto sb = series_bound(blocks, space);
  if (!sb.converged) throw Inconclusive("dropped blocks do not look summable");
  W.u.set_log_tail_bound(sb.log_total());
  return W;
}

ConditionBReport check_condition_b(const WeightSeq& w, const SpaceSpec& space, int m, double c,
                                   const std::vector<Index>& sigmas, int r) {
  if (m < 2) throw Error("condition (b) needs m >= 2");
  if (!(c > 0.0 && c < 1.0)) throw Error("c must lie in (0,1)");
  ConditionBReport rep;
  rep.decreasing = true;
  const double a = static_cast<double>(m - 1) / m;
  for (Index sigma : sigmas) {
    if (m * sigma > w.horizon()) throw Inconclusive("sigma beyond the weight horizon");
    Index n0 = static_cast<Index>(std::ceil(c * static_cast<double>(sigma)));
    std::vector<double> logs;
    double top = a * w.logW(m * sigma);
    for (Index n = n0; (m - 1) * sigma + n <= w.horizon(); ++n)
      logs.push_back(top - w.logW((m - 1) * sigma + n) + space.log_basis_norm(n, r));
    auto sb = series_bound(logs, space);
    rep.converged = rep.converged && sb.converged;
    double val = sb.total();
    if (!rep.values.empty() && val > rep.values.back().second) rep.decreasing = false;
    rep.values.emplace_back(sigma, val);
  }
  return rep;
}

Index choose_q(const WeightSeq& w, const SpaceSpec& space, const TruncatedSeq& y, double eta, int r) {
  Index p = std::max<Index>(0, support_max(y));
  double ly = kNegInf, lw = 0.0;
  for (const auto& [l, v] : y.coeffs()) ly = std::max(ly, v.log_abs());
  if (ly == kNegInf) return p + 1;
  for (Index k = 1; k <= p; ++k) lw = std::max(lw, w.log_w(k));
  double M = std::exp(ly + static_cast<double>(p + 1) * lw);
  return std::max(p + 1, find_tail_threshold(w, space, eta, 0, M, r));
}

UfhcCauchyWitness build_ufhc_cauchy(int m, const TruncatedSeq& y, const TruncatedSeq& x, const WeightSeq& w, double c,
                                    double d, Index q, Index sigma) {
  if (m < 2) throw Error("m must be >= 2");
  if (!(c > 0.0 && c < d && d < 1.0 && d < (1.0 + c) / 2.0)) throw Error("need 0 < c < d < min(1, (1+c)/2)");
  UfhcCauchyWitness W;
  W.m = m;
  W.c = c;
  W.d = d;
  W.q = q;
  W.sigma = sigma;
  W.p = std::max<Index>(0, support_max(y));
  if (q <= W.p) throw Error("q must exceed p");
  const auto sg = static_cast<double>(sigma);
  W.j_lo = static_cast<Index>(std::ceil(c * sg));
  W.j_hi = static_cast<Index>(std::ceil(d * sg)) - 1;
  if (W.j_hi < W.j_lo) throw Error("sigma too small: E_sigma is empty");
  Index px = support_max(x);
  if (px >= W.j_lo) throw Error("supp(x) must lie below c sigma");
  Index H = m * q * sigma;
  W.u = x.with_horizon(std::max(H, x.horizon()));
  W.log_eps = -w.logW(m * q * sigma) / m;
  for (Index j = W.j_lo; j <= W.j_hi; ++j)
    for (const auto& [l, yl] : y.coeffs()) {
      double lg = -std::log(static_cast<double>(m)) - (m - 1) * W.log_eps -
                  w.log_product(l, (m - 1) * q * sigma + q * j + l);
      W.u.add(q * j + l, yl.scaled_log(lg));
    }
  W.u.add(q * sigma, XComplex::polar_log(W.log_eps, 0.0));
  for (Index j = W.j_lo; j <= W.j_hi; ++j) W.E.push_back((m - 1) * q * sigma + q * j);
  Index maxD = std::max(q * W.j_hi + W.p, px);
  W.zmax = px < 0 ? 0 : (m - 1) * q * sigma + px;
  for (int k = 0; k <= m - 2; ++k) W.zmax = std::max(W.zmax, k * q * sigma + (m - k) * maxD);
  if (W.zmax >= W.E.front())
    throw Error("support separation fails: index " + std::to_string(W.zmax) + " reaches min E_sigma = " +
                std::to_string(W.E.front()));
  W.density_ratio = static_cast<double>(W.E.size()) / static_cast<double>(W.E.back());
  W.density_limit = (d - c) / (static_cast<double>(m - 1) * q + q * d);
  return W;
}

TruncatedSeq ufhc_cauchy_predicted(const UfhcCauchyWitness& W, const TruncatedSeq& y, const WeightSeq& w, Index k) {
  if (k < W.j_lo || k > W.j_hi) throw Error("k outside [j_lo, j_hi]");
  const Index q = W.q, sigma = W.sigma;
  TruncatedSeq out(W.u.horizon());
  for (const auto& [l, yl] : y.coeffs()) out.add(l, yl);
  for (Index j = k + 1; j <= W.j_hi; ++j)
    for (const auto& [l, yl] : y.coeffs()) out.add(q * (j - k) + l, yl.scaled_log(-w.log_product(l, q * (j - k) + l)));
  out.add(q * sigma - q * k, XComplex::polar_log(-w.logW(q * sigma - q * k), 0.0));
  return out;
}

// ---------------------------------------------------------------------------

OmegaFhcWitness build_omega_fhc(const std::vector<Target>& targets, const DensityFamily& fam, const WeightSeq& w,
                                Index horizon) {
  OmegaFhcWitness W;
  W.u = TruncatedSeq(horizon);
  std::size_t count = std::min(targets.size(), fam.sets.size());
  std::set<Index> used_idx;
  for (std::size_t t = 0; t < count; ++t) {
    const Target& T = targets[t];
    W.used.emplace_back();
    const double inv = 1.0 / T.m;
    for (Index n : fam.sets[t]) {
      if (n + T.p > horizon) break;
      for (Index l = 0; l <= T.p; ++l)
        if (!used_idx.insert(n + l).second)
          throw Error("family separation insufficient: blocks overlap at index " + std::to_string(n + l));
      for (const auto& [l, vl] : T.v.coeffs()) W.u.set(n + l, vl.pow(inv).scaled_log(-inv * w.log_product(l, n + l)));
      W.used.back().push_back(n);
    }
  }
  return W;
}

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::A1: return "A1";
    case Regime::A2: return "A2";
    case Regime::A3: return "A3";
  }
  return "?";
}

std::vector<Regime> classify_regimes(const WeightSeq& w, Index p, Index horizon) {
  const double T = std::log(1e6);
  if (horizon - p < 2) throw Inconclusive("horizon too short to classify regimes");
  std::vector<Regime> out;
  for (Index l = 0; l <= p; ++l) {
    double lo = kInf, hi = -kInf, all = 0.0;
    for (Index n = 1; n + l <= horizon; ++n) {
      double g = w.log_product(l, n + l);
      all = std::max(all, std::abs(g));
      if (n >= horizon / 2) {
        lo = std::min(lo, g);
        hi = std::max(hi, g);
      }
    }
    if (lo > T)
      out.push_back(Regime::A1);
    else if (hi < -T)
      out.push_back(Regime::A2);
    else if (all < T)
      out.push_back(Regime::A3);
    else
      throw Inconclusive("regime of offset " + std::to_string(l) + " is ambiguous at the horizon");
  }
  return out;
}

OmegaMixedWitness build_omega_hc_mixed(const TruncatedSeq& u_target, const TruncatedSeq& v_target,
                                       const std::vector<int>& I, const WeightSeq& w, Index horizon,
                                       std::uint64_t seed) {
  if (I.empty()) throw Error("degree set I is empty");
  for (int m : I)
    if (m < 1) throw Error("degrees must be >= 1");
  OmegaMixedWitness W;
  W.m0 = *std::min_element(I.begin(), I.end());
  W.m1 = *std::max_element(I.begin(), I.end());
  W.p = std::max<Index>({0, support_max(u_target), support_max(v_target)});
  const Index p = W.p;
  W.regimes = classify_regimes(w, p, horizon);
  for (Index n = std::max(p + 1, horizon / 2); n + p <= horizon; n += p + 1) W.n.push_back(n);
  if (W.n.empty()) throw Inconclusive("horizon leaves no block");
  W.abz = dense_complex_vectors(static_cast<int>(W.n.size()), static_cast<int>(p) + 3, 2, seed);
  W.x = u_target.with_horizon(horizon);
  const double i0 = 1.0 / W.m0, i1 = 1.0 / W.m1;
  for (std::size_t k = 0; k < W.n.size(); ++k) {
    const auto& abz = W.abz[k];
    XComplex al(abz[0]), be(abz[1]);
    for (Index l = 0; l <= p; ++l) {
      XComplex vl = v_target.at(l);
      double lg = w.log_product(l, W.n[k] + l);
      XComplex c;
      switch (W.regimes[static_cast<std::size_t>(l)]) {
        case Regime::A1:
          if (!vl.is_zero()) c = (vl.pow(i0) / al.pow(i0)).scaled_log(-i0 * lg);
          break;
        case Regime::A2:
          if (!vl.is_zero()) c = (vl.pow(i1) / be.pow(i1)).scaled_log(-i1 * lg);
          break;
        case Regime::A3:
          c = XComplex(abz[static_cast<std::size_t>(l) + 2]);
          break;
      }
      W.x.set(W.n[k] + l, c);
    }
  }
  return W;
}

cplx mixed_coordinate(const OmegaMixedWitness& W, const WeightSeq& w, const Poly& P, std::size_t k, Index l) {
  if (P.d != 1) throw Error("mixed witness uses a single-variable polynomial");
  XComplex y = W.x.at(W.n.at(k) + l);
  XComplex s;
  for (const auto& [a, c] : P.terms) {
    XComplex t(c);
    for (int i = 0; i < a[0]; ++i) t *= y;
    s += t;
  }
  return s.scaled_log(w.log_product(l, W.n[k] + l)).value();
}

// ---------------------------------------------------------------------------

NrResult compute_Nr(int r, const WeightSeq& w, const std::vector<Target>& targets, double C,
                    const DensityFamily* fam) {
  if (r < 1) throw Error("r must be >= 1");
  if (static_cast<int>(targets.size()) < r) throw Error("not enough targets for r");
  const auto& M = w.M();
  if (M.size() < 3) throw Inconclusive("M sequence too short");
  NrResult R;
  if (C <= 0.0) {
    C = 1.0;
    for (int s = 0; s < r; ++s)
      for (const auto& [l, v] : targets[static_cast<std::size_t>(s)].v.coeffs()) C = std::max(C, v.abs());
  }
  R.C = C;
  const double lr = std::log(static_cast<double>(r)), lc = std::log(C);
  const Index H = w.horizon();
  const Target& T = targets[static_cast<std::size_t>(r - 1)];

  R.N0 = -1;
  for (Index n = 1; n <= H; ++n)
    if (2.0 * lc - w.logW(n) < -lr) {
      R.N0 = n;
      break;
    }
  if (R.N0 < 0) throw Inconclusive("N_0 not reached within the weight horizon");

  auto cond_i = [&](Index n) {
    for (const auto& [l, v] : T.v.coeffs())
      if (!((v.log_abs() - w.log_product(l, n + l) / (T.m + 1)) / T.m < -lr)) return false;
    return true;
  };
  R.Ni = -1;
  for (Index n = 1; n + r <= H; ++n)
    if (cond_i(n)) {
      R.Ni = n;
      break;
    }
  if (R.Ni < 0) throw Inconclusive("condition (i) not reached within the weight horizon");

  R.k0 = 0;
  for (std::size_t k = 0; k < M.size(); ++k)
    if (M[k] >= R.N0) {
      R.k0 = static_cast<int>(k) + 1;
      break;
    }
  if (R.k0 == 0 || R.k0 + 1 > static_cast<int>(M.size())) throw Inconclusive("M sequence too short for k_0");

  int maxm = 1;
  for (int s = 0; s < r; ++s) maxm = std::max(maxm, targets[static_cast<std::size_t>(s)].m);
  const double a0 = 1.0 / maxm;
  auto cond_k = [&](std::size_t k) {  // 1-based k >= 2 with M_{k+1} <= H
    double hi = w.logW(M[k]), lo = w.logW(M[k - 2]);
    return hi - lo + lc - a0 * hi < -lr;
  };
  std::size_t last = 0;  // largest 1-based k with M_{k+1} materialized
  for (std::size_t k = 2; k < M.size() && M[k] <= H; ++k) last = k;
  if (last < 2) throw Inconclusive("M sequence too short for k_1");
  R.k1 = 0;
  for (std::size_t k = last + 1; k-- > 2;) {
    if (!cond_k(k)) break;
    R.k1 = static_cast<int>(k);
  }
  if (R.k1 == 0) throw Inconclusive("k_1 not reached within the materialized M sequence");

  R.N = std::max({R.N0, R.Ni, M[static_cast<std::size_t>(R.k0)], M[static_cast<std::size_t>(R.k1 - 1)]});
  R.verified = true;
  if (!fam) return R;

  // Re-check (i) on every n in range and (ii) on sampled pairs.
  for (Index n = R.N; n + r <= H; ++n) {
    ++R.samples;
    if (!cond_i(n)) {
      R.verified = false;
      R.failure = "condition (i) fails at n = " + std::to_string(n);
      return R;
    }
  }
  if (static_cast<int>(fam->sets.size()) < r) return R;
  auto sample = [](const IntSet& S, Index from, Index to) {
    IntSet out;
    auto it = std::lower_bound(S.begin(), S.end(), from);
    std::vector<Index> all;
    for (; it != S.end() && *it <= to; ++it) all.push_back(*it);
    std::size_t stride = std::max<std::size_t>(1, all.size() / 40);
    for (std::size_t i = 0; i < all.size(); i += stride) out.push_back(all[i]);
    if (!all.empty() && out.back() != all.back()) out.push_back(all.back());
    return out;
  };
  const std::vector<double> alphas = {a0, 0.5 * (a0 + 1.0), 1.0, 2.0, 3.0};
  IntSet Jr = sample(fam->sets[static_cast<std::size_t>(r - 1)], R.N, H - r);
  for (int s = 1; s < r; ++s) {
    const Target& S = targets[static_cast<std::size_t>(s - 1)];
    IntSet Js = sample(fam->sets[static_cast<std::size_t>(s - 1)], 1, H - r);
    for (Index j : Jr)
      for (Index jp : Js) {
        if (j == jp) continue;
        // the larger of (j, j') carries its own target, shifted by the smaller
        Index big = std::max(j, jp), small = std::min(j, jp);
        const TruncatedSeq& v = big == j ? T.v : S.v;
        for (double al : alphas)
          for (const auto& [l, vl] : v.coeffs()) {
            if (big + l > H) continue;
            double lhs = w.log_product(l + big - small, big + l) + al * vl.log_abs() - al * w.log_product(l, big + l);
            ++R.samples;
            if (!(lhs < -lr)) {
              R.verified = false;
              R.failure = "condition (ii) fails at j=" + std::to_string(j) + " j'=" + std::to_string(jp) +
                          " l=" + std::to_string(l) + " alpha=" + std::to_string(al);
              return R;
            }
          }
      }
  }
  return R;
}

TruncatedSeq c0_block_vector(const std::vector<Index>& B, const TruncatedSeq& v, int m, const WeightSeq& w,
                             Index horizon) {
  TruncatedSeq u(horizon);
  Index q = std::max<Index>(0, support_max(v));
  const double inv = 1.0 / m;
  for (Index n : B) {
    if (n + q > horizon) break;
    for (const auto& [l, vl] : v.coeffs()) u.set(n + l, vl.pow(inv).scaled_log(-inv * w.log_product(l, n + l)));
  }
  return u;
}

double c0_log_norm_power(const std::vector<Index>& B, const TruncatedSeq& v, int mq, int m, const WeightSeq& w,
                         Index n, Index horizon, bool strict) {
  Index q = std::max<Index>(0, support_max(v));
  const double al = static_cast<double>(m) / mq;
  double best = kNegInf;
  for (auto it = std::lower_bound(B.begin(), B.end(), strict ? n + 1 : n); it != B.end(); ++it) {
    Index np = *it;
    if (np + q > horizon) break;
    for (const auto& [l, vl] : v.coeffs())
      best = std::max(best, al * vl.log_abs() - al * w.log_product(l, np + l) + w.log_product(np - n + l, np + l));
  }
  return best;
}

namespace {

// Bound on the blocks n' >= D dropped at the horizon, in log form; needs w
// non-increasing with w >= 1.
double c0_log_tail(const TruncatedSeq& v, int mq, int m, const WeightSeq& w, Index n, Index D) {
  const double al = static_cast<double>(m) / mq;
  const Index K = D - n;
  double best = kNegInf;
  for (const auto& [l, vl] : v.coeffs()) {
    double t;
    if (al >= 1.0)
      t = (1.0 - al) * w.logW(D + l) - w.logW(K + l) + al * w.logW(l);
    else
      t = (1.0 - al) * (w.logW(D + l) - w.logW(K + l)) - al * (w.logW(K + l) - w.logW(l));
    best = std::max(best, al * vl.log_abs() + t);
  }
  return best;
}

}  // namespace

C0FhcWitness build_c0_fhc(const std::vector<Target>& targets, const DensityFamily& fam, const WeightSeq& w,
                          Index horizon, Index verify_horizon, int extra_degrees) {
  if (horizon > w.horizon()) throw Error("construction horizon beyond the weight horizon");
  for (Index k = 2; k <= horizon; ++k)
    if (w.log_w(k) > w.log_w(k - 1) + 1e-12 || w.log_w(k) < -1e-12)
      throw Error("c0 tail bounds need a non-increasing weight with w >= 1");
  C0FhcWitness W;
  W.horizon = horizon;
  W.verify_horizon = verify_horizon;
  W.extra_degrees = extra_degrees;
  W.u = TruncatedSeq(horizon);
  const std::size_t count = std::min(targets.size(), fam.sets.size());
  std::vector<TruncatedSeq> parts(count);
  for (std::size_t i = 0; i < count; ++i) {
    C0PReport rep;
    rep.p = static_cast<int>(i) + 1;
    try {
      NrResult nr = compute_Nr(rep.p, w, targets, 0.0, &fam);
      rep.Np = nr.N;
      if (!nr.verified) {
        rep.reason = nr.failure;
        W.reports.push_back(rep);
        continue;
      }
      for (Index n : thin_separate(fam.sets[i], nr.N))
        if (n + rep.p <= horizon) rep.B.push_back(n);
      if (rep.B.empty() || rep.B.front() > verify_horizon) throw Inconclusive("no n in B(p) within the horizon");
    } catch (const Inconclusive& e) {
      rep.inconclusive = true;
      rep.reason = e.what();
      W.reports.push_back(rep);
      continue;
    }
    parts[i] = c0_block_vector(rep.B, targets[i].v, targets[i].m, w, horizon);
    for (const auto& [k, c] : parts[i].coeffs()) rep.norm_up = std::max(rep.norm_up, c.abs());
    W.u += parts[i];
    W.reports.push_back(rep);
  }
  Index maxp = static_cast<Index>(count);
  if (verify_horizon >= horizon - maxp) throw Error("verify horizon must stay below horizon - p");
  for (auto& rep : W.reports) {
    if (rep.inconclusive || rep.B.empty()) continue;
    const std::size_t i = static_cast<std::size_t>(rep.p) - 1;
    const Target& T = targets[i];
    const double lim = 1.0 / rep.p;
    double w_target = 0.0, w_higher = 0.0, w_cross = 0.0;
    for (Index n : rep.B) {
      if (n > verify_horizon) break;
      ++rep.checked;
      auto val = [&](const std::vector<Index>& B, const Target& S, int m, bool strict) {
        Index D = horizon - S.p + 1;
        return std::exp(c0_log_norm_power(B, S.v, S.m, m, w, n, horizon, strict)) +
               std::exp(c0_log_tail(S.v, S.m, m, w, n, D));
      };
      w_target = std::max(w_target, val(rep.B, T, T.m, true));
      for (int m = T.m + 1; m <= T.m + extra_degrees; ++m) w_higher = std::max(w_higher, val(rep.B, T, m, false));
      for (const auto& other : W.reports) {
        if (other.p == rep.p || other.inconclusive || other.B.empty()) continue;
        const Target& S = targets[static_cast<std::size_t>(other.p) - 1];
        for (int m = T.m; m <= T.m + extra_degrees; ++m) w_cross = std::max(w_cross, val(other.B, S, m, false));
      }
    }
    rep.worst_target = w_target;
    rep.worst_higher = w_higher;
    rep.worst_cross = w_cross;
    rep.pass = rep.checked > 0 && rep.norm_up < lim && w_target < lim && w_higher < lim && w_cross < lim;
  }
  return W;
}

}  // namespace hcalg
