#include "hcalg/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "hcalg/error.hpp"

namespace hcalg::oracle {

namespace {

Sparse from_map(const std::map<Index, XComplex>& m) {
  Sparse out;
  out.reserve(m.size());
  for (const auto& [k, v] : m)
    if (!v.is_zero()) out.emplace_back(k, v);
  return out;
}

double log_sup(const Sparse& a) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& [k, v] : a) best = std::max(best, v.log_abs());
  return best;
}

}  // namespace

Sparse from_seq(const TruncatedSeq& x) {
  Sparse out;
  for (const auto& [k, v] : x.coeffs())
    if (!v.is_zero()) out.emplace_back(k, v);
  return out;
}

Sparse multiply(const Sparse& a, const Sparse& b, ProductKind kind) {
  std::map<Index, XComplex> acc;
  if (kind == ProductKind::Coordinatewise) {
    for (const auto& [i, x] : a)
      for (const auto& [j, y] : b)
        if (i == j) acc[i] += x * y;
  } else {
    for (const auto& [i, x] : a)
      for (const auto& [j, y] : b) acc[i + j] += x * y;
  }
  return from_map(acc);
}

Sparse power(const Sparse& x, int m, ProductKind kind) {
  if (m < 1) throw Error("oracle power needs m >= 1");
  Sparse r = x;
  for (int i = 1; i < m; ++i) r = multiply(r, x, kind);
  return r;
}

Sparse monomial(const std::vector<Sparse>& u, const MultiIndex& alpha, ProductKind kind) {
  if (alpha.size() != u.size()) throw Error("oracle monomial: dimension mismatch");
  Sparse r;
  bool first = true;
  for (std::size_t i = 0; i < u.size(); ++i) {
    for (int k = 0; k < alpha[i]; ++k) {
      r = first ? u[i] : multiply(r, u[i], kind);
      first = false;
    }
  }
  if (first) throw Error("oracle monomial: alpha = 0");
  return r;
}

Sparse step_backward(const Sparse& x, const WeightSeq& w, Index lower) {
  Sparse y;
  y.reserve(x.size());
  for (const auto& [k, v] : x) {
    Index n = k - 1;
    if (n < lower) continue;
    y.emplace_back(n, v * XComplex::polar_log(w.log_w(n + 1), 0.0));
  }
  return y;
}

Sparse shift_backward(Sparse x, const WeightSeq& w, Index steps, Index lower) {
  for (Index s = 0; s < steps && !x.empty(); ++s) x = step_backward(x, w, lower);
  return x;
}

Comparison compare(const Sparse& brute, const TruncatedSeq& fast, double tol) {
  Comparison c;
  Sparse f = from_seq(fast);
  c.zero_a = brute.empty();
  c.zero_b = f.empty();
  if (c.zero_a && c.zero_b) {
    c.pass = true;
    c.detail = "both exactly zero";
    return c;
  }
  double scale = std::max(log_sup(brute), log_sup(f));
  std::map<Index, XComplex> diff;
  for (const auto& [k, v] : brute) diff[k] += v;
  for (const auto& [k, v] : f) diff[k] += -v;
  double worst = -std::numeric_limits<double>::infinity();
  Index at = 0;
  for (const auto& [k, v] : diff) {
    double l = v.log_abs();
    if (l > worst) {
      worst = l;
      at = k;
    }
  }
  c.rel_error = std::exp(worst - scale);
  c.pass = c.rel_error < tol;
  if (!c.pass) c.detail = "worst at index " + std::to_string(at);
  return c;
}

}  // namespace hcalg::oracle
