#include "hcalg/algebra.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "hcalg/error.hpp"
#include "hcalg/rng.hpp"

namespace hcalg {

std::string product_name(ProductKind k) { return k == ProductKind::Cauchy ? "cauchy" : "coordinatewise"; }

ProductKind parse_product(const std::string& s) {
  if (s == "cauchy") return ProductKind::Cauchy;
  if (s == "coordinatewise") return ProductKind::Coordinatewise;
  throw Error("unknown product '" + s + "'");
}

int degree(const MultiIndex& a) {
  int s = 0;
  for (int v : a) s += v;
  return s;
}

std::string to_string(const MultiIndex& a) {
  std::string s = "(";
  for (std::size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + std::to_string(a[i]);
  return s + ")";
}

Poly Poly::monomial(const MultiIndex& a, cplx c) {
  Poly P;
  P.d = static_cast<int>(a.size());
  P.add(a, c);
  return P;
}

void Poly::add(const MultiIndex& a, cplx c) {
  if (static_cast<int>(a.size()) != d) throw Error("multi-index arity mismatch");
  terms[a] += c;
}

void Poly::validate() const {
  if (d < 1) throw Error("polynomial arity must be >= 1");
  bool any = false;
  for (const auto& [a, c] : terms) {
    if (static_cast<int>(a.size()) != d) throw Error("multi-index arity mismatch");
    for (int v : a)
      if (v < 0) throw Error("negative exponent");
    if (degree(a) == 0) throw Error("polynomial must vanish at 0");
    if (c != cplx(0.0)) any = true;
  }
  if (!any) throw Error("polynomial has no nonzero coefficient");
}

std::vector<MultiIndex> Poly::support() const {
  std::vector<MultiIndex> out;
  for (const auto& [a, c] : terms)
    if (c != cplx(0.0)) out.push_back(a);
  return out;
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

double log_l1_mass(const TruncatedSeq& x) {
  XComplex s;
  for (const auto& [n, v] : x.coeffs()) s += XComplex::polar_log(v.log_abs(), 0.0);
  return s.log_abs();
}

double log_sup_mass(const TruncatedSeq& x) {
  double m = kNegInf;
  for (const auto& [n, v] : x.coeffs()) m = std::max(m, v.log_abs());
  return m;
}

// Tail of a product: tx (|y| + ty) + ty |x|, all in logs.
double product_tail(double tx, double mx, double ty, double my) {
  double a = tx == kNegInf ? kNegInf : tx + log_add(my, ty);
  double b = ty == kNegInf ? kNegInf : ty + mx;
  return log_add(a, b);
}

XComplex ipow(XComplex v, int m) {
  XComplex r(1.0);
  while (m > 0) {
    if (m & 1) r *= v;
    v *= v;
    m >>= 1;
  }
  return r;
}

}  // namespace

TruncatedSeq product(const TruncatedSeq& x, const TruncatedSeq& y, ProductKind kind) {
  if (x.bilateral() != y.bilateral()) throw Error("product of bilateral and unilateral sequences");
  Index L = std::max(x.horizon(), y.horizon());
  TruncatedSeq out(L, x.bilateral());
  if (kind == ProductKind::Coordinatewise) {
    const auto& big = x.support_size() <= y.support_size() ? y : x;
    const auto& small = x.support_size() <= y.support_size() ? x : y;
    for (const auto& [n, v] : small.coeffs()) {
      auto it = big.coeffs().find(n);
      if (it != big.coeffs().end()) out.set(n, v * it->second);
    }
    out.set_log_tail_bound(
        product_tail(x.log_tail_bound(), log_sup_mass(x), y.log_tail_bound(), log_sup_mass(y)));
    return out;
  }
  if (x.bilateral()) throw Error("Cauchy product needs unilateral sequences");
  std::map<Index, XComplex> acc;
  XComplex dropped;
  for (const auto& [i, a] : x.coeffs()) {
    for (const auto& [j, b] : y.coeffs()) {
      XComplex ab = a * b;
      if (i + j > L)
        dropped += XComplex::polar_log(ab.log_abs(), 0.0);
      else
        acc[i + j] += ab;
    }
  }
  for (const auto& [n, v] : acc) out.set(n, v);
  out.set_log_tail_bound(log_add(
      dropped.log_abs(), product_tail(x.log_tail_bound(), log_l1_mass(x), y.log_tail_bound(), log_l1_mass(y))));
  return out;
}

TruncatedSeq power(const TruncatedSeq& x, int m, ProductKind kind) {
  if (m < 1) throw Error("power exponent must be >= 1");
  if (m == 1) return x;
  if (kind == ProductKind::Coordinatewise) {
    TruncatedSeq out(x.horizon(), x.bilateral());
    for (const auto& [n, v] : x.coeffs()) out.set(n, ipow(v, m));
    // (S + t)^m - S^m <= m t (S + t)^{m-1}
    double t = x.log_tail_bound();
    if (t != kNegInf)
      out.set_log_tail_bound(std::log(static_cast<double>(m)) + t + (m - 1) * log_add(log_sup_mass(x), t));
    return out;
  }
  TruncatedSeq result;
  TruncatedSeq base = x;
  bool have = false;
  while (m > 0) {
    if (m & 1) {
      result = have ? product(result, base, kind) : base;
      have = true;
    }
    m >>= 1;
    if (m > 0) base = product(base, base, kind);
  }
  return result;
}

TruncatedSeq monomial(const std::vector<TruncatedSeq>& u, const MultiIndex& alpha, ProductKind kind) {
  if (u.size() != alpha.size()) throw Error("monomial arity mismatch");
  TruncatedSeq acc;
  bool have = false;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] == 0) continue;
    TruncatedSeq f = power(u[i], alpha[i], kind);
    acc = have ? product(acc, f, kind) : f;
    have = true;
  }
  if (!have) throw Error("monomial with zero multi-index");
  return acc;
}

TruncatedSeq eval_poly(const Poly& P, const std::vector<TruncatedSeq>& u, ProductKind kind) {
  P.validate();
  if (static_cast<int>(u.size()) != P.d) throw Error("polynomial arity mismatch");
  TruncatedSeq acc(u.front().horizon(), u.front().bilateral());
  for (const auto& [a, c] : P.terms) {
    if (c == cplx(0.0)) continue;
    acc += monomial(u, a, kind).scaled(XComplex(c));
  }
  return acc;
}

BSeq default_b(const SpaceSpec& spec) {
  return [spec](Index n) {
    double en = spec.basis_norm(n, static_cast<int>(std::max<Index>(n, 1)));
    return std::ldexp(1.0, -static_cast<int>(n)) / (1.0 + en);
  };
}

std::vector<double> seeded_lambdas(int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(rng.uniform());
  return out;
}

std::pair<Index, Index> generator_block(Index n) {
  Index lo = 0;
  for (Index m = 1;; ++m) {
    Index hi = lo + m;
    if (n < hi) return {lo, hi};
    lo = hi;
  }
}

FreeGenerators free_generators(int count, const SpaceSpec& spec, const BSeq& b, const std::vector<double>& lambda,
                               Index horizon) {
  if (spec.kind == SpaceKind::Entire) throw Error("free generators need a coordinatewise algebra");
  if (static_cast<int>(lambda.size()) < count) throw Error("need one lambda per generator");
  for (double l : lambda)
    if (!(l > 0.0 && l < 1.0)) throw Error("lambda must lie in (0,1)");

  // Convergence of sum b_n ||e_n||_n judged on the materialized range.
  std::vector<double> terms;
  for (Index n = 0; n <= horizon; ++n) {
    double t = b(n) * spec.basis_norm(n, static_cast<int>(std::max<Index>(n, 1)));
    if (!std::isfinite(t) || t < 0.0) throw Error("sum b_n ||e_n||_n diverges at index " + std::to_string(n));
    terms.push_back(t);
  }
  double head = 0.0, last = 0.0;
  std::size_t cut = terms.size() * 2 / 3;
  for (std::size_t i = 0; i < terms.size(); ++i) (i < cut ? head : last) += terms[i];
  if (terms.size() >= 6 && last > head) throw Error("sum b_n ||e_n||_n does not settle at the horizon");

  FreeGenerators out;
  out.lambda.assign(lambda.begin(), lambda.begin() + count);
  for (Index n = 0; n <= horizon; ++n) {
    auto [lo, hi] = generator_block(n);
    double c = std::numeric_limits<double>::infinity();
    for (Index l = lo; l < hi; ++l) c = std::min(c, b(l));
    out.c.push_back(c);
  }
  for (int n = 0; n < count; ++n) {
    TruncatedSeq g(horizon);
    g.set(n, XComplex(1.0));
    double ll = std::log(lambda[static_cast<std::size_t>(n)]);
    for (Index j = n + 1; j <= horizon; ++j)
      g.set(j, XComplex::polar_log(static_cast<double>(j) * ll + std::log(out.c[static_cast<std::size_t>(j)]), 0.0));
    // Discarded part: c_j <= b_j, so its q=1 norm is below sum_{j>L} lambda^j b_j ||e_j||_1.
    // Summed over 400 terms; the rest by the worst ratio over the last 100.
    double tail = 0.0, prev = 0.0, ratio = 0.0;
    for (Index j = horizon + 1; j <= horizon + 400; ++j) {
      double t = std::exp(static_cast<double>(j) * ll) * b(j) * spec.basis_norm(j, 1);
      if (j > horizon + 300 && prev > 0.0) ratio = std::max(ratio, t / prev);
      tail += t;
      prev = t;
    }
    if (prev > 0.0) {
      if (!(ratio < 1.0)) throw Error("generator tail does not look summable at the horizon");
      tail += prev * ratio / (1.0 - ratio);
    } else {
      tail = std::max(tail, std::numeric_limits<double>::min());  // terms underflowed
    }
    g.set_tail_bound(tail);
    out.g.push_back(std::move(g));
  }
  return out;
}

namespace {

void enumerate(int p, int max_degree, MultiIndex& cur, std::size_t pos, std::vector<MultiIndex>& out) {
  if (pos == cur.size()) {
    int d = degree(cur);
    if (d >= 1 && d <= max_degree) out.push_back(cur);
    return;
  }
  for (int v = 0; v <= max_degree; ++v) {
    cur[pos] = v;
    if (degree(cur) > max_degree) break;
    enumerate(p, max_degree, cur, pos + 1, out);
  }
  cur[pos] = 0;
}

}  // namespace

VandermondeCertificate vandermonde_certificate(const std::vector<double>& lambda, int max_degree) {
  if (lambda.empty() || max_degree < 1) throw Error("empty Vandermonde request");
  VandermondeCertificate cert;
  MultiIndex cur(lambda.size(), 0);
  enumerate(static_cast<int>(lambda.size()), max_degree, cur, 0, cert.alphas);
  for (const auto& a : cert.alphas) {
    double lg = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) lg += a[j] * std::log(lambda[j]);
    cert.nodes.push_back(std::exp(lg));
  }
  const auto q = static_cast<Eigen::Index>(cert.nodes.size());
  // The proof's matrix, with column i divided by b_m^{|alpha(i)|} (lambda^alpha(i))^N:
  // row r then holds node_i^r.
  Eigen::MatrixXd V(q, q);
  for (Eigen::Index r = 0; r < q; ++r)
    for (Eigen::Index i = 0; i < q; ++i) V(r, i) = std::pow(cert.nodes[static_cast<std::size_t>(i)], static_cast<double>(r));
  cert.det_lu = V.partialPivLu().determinant();
  cert.det_product = 1.0;
  cert.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cert.nodes.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) {
      double g = cert.nodes[i] - cert.nodes[j];
      cert.det_product *= g;
      cert.log_abs_det += std::log(std::abs(g));
      cert.min_gap = std::min(cert.min_gap, std::abs(g));
    }
  // The determinant of a Vandermonde matrix is the product of the node gaps,
  // which is astronomically small for more than a handful of nodes in (0,1);
  // the certificate is that every gap clears rounding by a wide margin.
  cert.nonzero = std::isfinite(cert.log_abs_det) && cert.min_gap > 1e-12;
  return cert;
}

}  // namespace hcalg
