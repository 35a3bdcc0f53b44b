#include "hcalg/convolution.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_complex.hpp>
#include <cmath>
#include <functional>
#include <limits>

#include "hcalg/error.hpp"

namespace hcalg {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

double log_abs(cplx z) {
  double r = std::abs(z);
  return r == 0.0 ? kNegInf : std::log(r);
}

cplx ipow_i(int k) {
  switch (k % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

// Upper bound for |c_k| beyond the stored coefficients.
double coef_bound(const PhiSpec& phi, Index k) {
  double lf = std::lgamma(static_cast<double>(k) + 1.0);
  switch (phi.form) {
    case PhiSpec::Form::HalfExpPlusExpIMinusQuarter:
      return std::exp(std::log(1.5) - lf);
    case PhiSpec::Form::PolyTimesExp: {
      double s = 0.0;
      for (std::size_t j = 0; j < phi.poly.size(); ++j)
        s += std::abs(phi.poly[j]) * std::pow(static_cast<double>(k), static_cast<double>(j));
      return s * std::exp(-lf);
    }
    case PhiSpec::Form::Taylor:
      return 0.0;
  }
  return 0.0;
}

double abs_coef(const PhiSpec& phi, Index k) {
  if (k < static_cast<Index>(phi.taylor.size())) return std::abs(phi.taylor[static_cast<std::size_t>(k)]);
  return coef_bound(phi, k);
}

// sum_{k > k0} |c_k| r^k, summed until the terms are negligible.
double coef_tail(const PhiSpec& phi, Index k0, double r) {
  double s = 0.0;
  for (Index k = k0 + 1; k < k0 + 4000; ++k) {
    double c = abs_coef(phi, k);
    if (c == 0.0) {
      if (k >= static_cast<Index>(phi.taylor.size()) && phi.form == PhiSpec::Form::Taylor) break;
      continue;
    }
    double t = std::exp(std::log(c) + static_cast<double>(k) * std::log(std::max(r, 1e-300)));
    s += t;
    if (k > r + 10 && t < 1e-300 + 1e-20 * s) break;
  }
  return s;
}

}  // namespace

double EntireTrunc::seminorm(double q) const {
  double s = 0.0;
  for (std::size_t n = 0; n < taylor.size(); ++n) s += std::abs(taylor[n]) * std::pow(q, static_cast<double>(n));
  return s;
}

PhiSpec PhiSpec::half_exp_plus_exp_i_minus_quarter(int K) {
  if (K < 1) throw Error("taylor length must be >= 1");
  PhiSpec p;
  p.form = Form::HalfExpPlusExpIMinusQuarter;
  double f = 1.0;
  for (int k = 0; k <= K; ++k) {
    if (k > 0) f *= k;
    p.taylor.push_back((0.5 + ipow_i(k)) / f);
  }
  p.taylor[0] -= 0.25;
  return p;
}

PhiSpec PhiSpec::poly_times_exp(std::vector<cplx> P, int K) {
  if (K < 1) throw Error("taylor length must be >= 1");
  PhiSpec p;
  p.form = Form::PolyTimesExp;
  p.poly = std::move(P);
  for (int k = 0; k <= K; ++k) {
    cplx s = 0.0;
    for (int j = 0; j <= k && j < static_cast<int>(p.poly.size()); ++j)
      s += p.poly[static_cast<std::size_t>(j)] * std::exp(-std::lgamma(static_cast<double>(k - j) + 1.0));
    p.taylor.push_back(s);
  }
  p.validate();
  return p;
}

PhiSpec PhiSpec::polynomial(std::vector<cplx> c) {
  PhiSpec p;
  p.form = Form::Taylor;
  p.poly = c;
  p.taylor = std::move(c);
  p.validate();
  return p;
}

std::string PhiSpec::name() const {
  switch (form) {
    case Form::HalfExpPlusExpIMinusQuarter: return "half_exp_plus_exp_i_minus_quarter";
    case Form::PolyTimesExp: return "poly_times_exp";
    case Form::Taylor: return "taylor";
  }
  return "?";
}

void PhiSpec::validate() const {
  bool any = false;
  for (std::size_t k = 1; k < taylor.size(); ++k) any = any || taylor[k] != cplx(0.0);
  if (!any) throw Error("phi must be nonconstant");
  for (auto c : taylor)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw Error("non-finite Taylor coefficient");
}

cplx PhiSpec::eval(cplx z) const {
  switch (form) {
    case Form::HalfExpPlusExpIMinusQuarter:
      return 0.5 * std::exp(z) + std::exp(cplx(0.0, 1.0) * z) - 0.25;
    case Form::PolyTimesExp: {
      cplx s = 0.0;
      for (std::size_t j = poly.size(); j-- > 0;) s = s * z + poly[j];
      return s * std::exp(z);
    }
    case Form::Taylor:
      return eval_taylor(z);
  }
  return 0.0;
}

cplx PhiSpec::eval_taylor(cplx z) const {
  cplx s = 0.0;
  for (std::size_t k = taylor.size(); k-- > 0;) s = s * z + taylor[k];
  return s;
}

double PhiSpec::factorial_constant() const {
  double C = 0.0;
  for (std::size_t k = 0; k < taylor.size(); ++k)
    C = std::max(C, std::abs(taylor[k]) * std::exp(std::lgamma(static_cast<double>(k) + 1.0)));
  return C;
}

PhiSpec parse_phi(const std::string& closed_form, const std::vector<cplx>& poly, int taylor_len) {
  if (closed_form == "half_exp_plus_exp_i_minus_quarter") return PhiSpec::half_exp_plus_exp_i_minus_quarter(taylor_len);
  if (closed_form == "poly_times_exp") return PhiSpec::poly_times_exp(poly, taylor_len);
  if (closed_form == "taylor" || closed_form.empty()) return PhiSpec::polynomial(poly);
  throw Error("unknown closed form '" + closed_form + "'");
}

EntireTrunc exp_vector(cplx lambda, Index L) {
  if (L < 0) throw Error("L must be >= 0");
  EntireTrunc f;
  f.type_bound = std::abs(lambda);
  const double la = log_abs(lambda), arg = std::arg(lambda);
  for (Index n = 0; n <= L; ++n) {
    if (n == 0) {
      f.taylor.emplace_back(1.0, 0.0);
      continue;
    }
    double lg = static_cast<double>(n) * la - std::lgamma(static_cast<double>(n) + 1.0);
    f.taylor.push_back(la == kNegInf ? cplx(0.0) : std::polar(std::exp(lg), static_cast<double>(n) * arg));
  }
  double r = f.type_bound, t = 0.0;
  for (Index n = L + 1; n < L + 4000 && r > 0.0; ++n) {
    double term = std::exp(static_cast<double>(n) * std::log(r) - std::lgamma(static_cast<double>(n) + 1.0));
    t += term;
    if (term < 1e-20 * t || term == 0.0) break;
  }
  f.tail_bound = t;
  return f;
}

EntireTrunc cauchy_product(const EntireTrunc& f, const EntireTrunc& g) {
  Index L = std::min(f.L(), g.L());
  EntireTrunc h;
  h.taylor.assign(static_cast<std::size_t>(L) + 1, 0.0);
  for (Index i = 0; i <= L; ++i)
    for (Index j = 0; i + j <= L; ++j)
      h.taylor[static_cast<std::size_t>(i + j)] += f.taylor[static_cast<std::size_t>(i)] * g.taylor[static_cast<std::size_t>(j)];
  if (f.type_bound >= 0.0 && g.type_bound >= 0.0) h.type_bound = f.type_bound + g.type_bound;
  return h;
}

EntireTrunc phi_of_D(const PhiSpec& phi, const EntireTrunc& f) {
  const Index L = f.L(), K = static_cast<Index>(phi.taylor.size()) - 1;
  EntireTrunc out;
  out.taylor.assign(f.taylor.size(), 0.0);
  for (Index n = 0; n <= L; ++n) {
    cplx s = 0.0;
    const double ln = std::lgamma(static_cast<double>(n) + 1.0);
    for (Index k = 0; k <= std::min(K, L - n); ++k) {
      cplx c = phi.taylor[static_cast<std::size_t>(k)];
      if (c == cplx(0.0)) continue;
      double ratio = std::exp(std::lgamma(static_cast<double>(n + k) + 1.0) - ln);
      s += c * f.taylor[static_cast<std::size_t>(n + k)] * ratio;
    }
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
      throw Error("non-finite coefficient at n = " + std::to_string(n));
    out.taylor[static_cast<std::size_t>(n)] = s;
  }
  if (f.type_bound >= 0.0) {
    // |a_m| <= r^m/m! beyond L: the dropped part of coefficient n is bounded by
    // r^n/n! sum_{k > L-n} |c_k| r^k; beyond L the image is r^n/n! sum |c_k| r^k.
    const double r = f.type_bound;
    double t = 0.0;
    for (Index n = 0; n <= L; ++n)
      t += std::exp(static_cast<double>(n) * std::log(std::max(r, 1e-300)) - std::lgamma(static_cast<double>(n) + 1.0)) *
           coef_tail(phi, L - n, r);
    double whole = coef_tail(phi, -1, r);
    for (Index n = L + 1; n < L + 4000; ++n) {
      double term =
          std::exp(static_cast<double>(n) * std::log(std::max(r, 1e-300)) - std::lgamma(static_cast<double>(n) + 1.0)) * whole;
      t += term;
      if (term <= 1e-20 * t) break;
    }
    out.tail_bound = t;
    out.type_bound = r;
  }
  return out;
}

double eigen_tolerance(const PhiSpec& phi, cplx lambda, Index L, double q) {
  const double r = std::abs(lambda);
  const Index K = static_cast<Index>(phi.taylor.size()) - 1;
  const double lr = std::log(std::max(r, 1e-300)), lq = std::log(q);
  double t = 0.0;
  for (Index n = 0; n <= L; ++n) {
    double base = std::exp(static_cast<double>(n) * (lr + lq) - std::lgamma(static_cast<double>(n) + 1.0));
    t += base * coef_tail(phi, std::min(K, L - n), r);
  }
  double phil = std::abs(phi.eval(lambda));
  for (Index n = L + 1; n < L + 4000; ++n) {
    double term = phil * std::exp(static_cast<double>(n) * (lr + lq) - std::lgamma(static_cast<double>(n) + 1.0));
    t += term;
    if (term <= 1e-20 * t) break;
  }
  // Rounding in the double evaluation: each coefficient of phi(D)E and of
  // phi(lambda)E carries relative error below (K + L + 4) * 64 eps, applied to
  // the sum of the magnitudes that were added up.
  const double rel = 64.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(K + L + 4);
  double mag = 0.0;
  for (Index n = 0; n <= L; ++n) {
    double base = static_cast<double>(n) * (lr + lq) - std::lgamma(static_cast<double>(n) + 1.0);
    double s = phil;
    for (Index k = 0; k <= std::min(K, L - n); ++k)
      s += std::abs(phi.taylor[static_cast<std::size_t>(k)]) * std::exp(static_cast<double>(k) * lr);
    mag += std::exp(base) * s;
  }
  return t + rel * mag;
}

EigenCheck check_eigen_relation(const PhiSpec& phi, cplx lambda, Index L, double q, double tol) {
  EigenCheck c;
  auto E = exp_vector(lambda, L);
  auto img = phi_of_D(phi, E);
  cplx pl = phi.eval(lambda);
  for (Index n = 0; n <= L; ++n)
    c.computed += std::abs(img.taylor[static_cast<std::size_t>(n)] - pl * E.taylor[static_cast<std::size_t>(n)]) *
                  std::pow(q, static_cast<double>(n));
  c.tolerance = eigen_tolerance(phi, lambda, L, q);
  c.pass = c.computed < tol && c.tolerance < tol;
  return c;
}

cplx eval_taylor_multiprecision(const PhiSpec& phi, cplx z) {
  using boost::multiprecision::cpp_bin_float_100;
  using boost::multiprecision::cpp_complex_100;
  cpp_complex_100 Z(cpp_bin_float_100(z.real()), cpp_bin_float_100(z.imag()));
  cpp_complex_100 sum(0), zk(1);
  cpp_bin_float_100 fact(1);
  const double az = std::abs(z);
  const cpp_bin_float_100 tiny("1e-60");
  for (int k = 0; k < 20000; ++k) {
    if (k > 0) {
      zk *= Z;
      fact *= k;
    }
    cpp_complex_100 c(0);
    switch (phi.form) {
      case PhiSpec::Form::HalfExpPlusExpIMinusQuarter: {
        cplx ik = ipow_i(k);
        c = (cpp_complex_100(cpp_bin_float_100("0.5")) + cpp_complex_100(ik.real(), ik.imag())) / fact;
        if (k == 0) c -= cpp_complex_100(cpp_bin_float_100("0.25"));
        break;
      }
      case PhiSpec::Form::PolyTimesExp: {
        cpp_bin_float_100 f(1);
        for (int j = 0; j <= k; ++j) {
          if (j > 0) f *= (k - j + 1);  // k!/(k-j)!
          if (j < static_cast<int>(phi.poly.size())) {
            cplx pj = phi.poly[static_cast<std::size_t>(j)];
            c += cpp_complex_100(pj.real(), pj.imag()) * f;
          }
        }
        c /= fact;
        break;
      }
      case PhiSpec::Form::Taylor:
        if (k < static_cast<int>(phi.taylor.size())) {
          cplx ck = phi.taylor[static_cast<std::size_t>(k)];
          c = cpp_complex_100(ck.real(), ck.imag());
        }
        break;
    }
    cpp_complex_100 term = c * zk;
    sum += term;
    if (phi.form == PhiSpec::Form::Taylor && k + 1 >= static_cast<int>(phi.taylor.size())) break;
    if (k > 2.0 * az + 20 && abs(term) < tiny * (1 + abs(sum))) break;
  }
  return {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
}

ConditionECert check_condition_e(const PhiSpec& phi, const std::vector<int>& I, int m, cplx a, cplx b,
                                 double margin) {
  if (I.empty()) throw Error("I must be nonempty");
  if (std::find(I.begin(), I.end(), m) == I.end()) throw Error("m must belong to I");
  ConditionECert c;
  c.m = m;
  c.a = a;
  c.b = b;
  c.tried = 1;
  const double lmb = log_abs(phi.eval(static_cast<double>(m) * b));
  c.phi_mb = std::exp(lmb);
  c.min_margin = lmb;
  bool ok = lmb > margin;
  if (!ok) c.reason = "|phi(mb)| <= 1";
  auto compare = [&](cplx z) {
    cplx hi = eval_taylor_multiprecision(phi, z), lo = phi.eval(z);
    c.closed_vs_taylor = std::max(c.closed_vs_taylor, std::abs(hi - lo) / std::max(std::abs(hi), 1e-12));
  };
  compare(static_cast<double>(m) * b);
  for (int n : I)
    for (int d = 0; d <= n; ++d) {
      if (n == m && d == m) continue;
      ConditionRow row;
      row.n = n;
      row.d = d;
      cplx z = static_cast<double>(d) * b + static_cast<double>(n - d) * a;
      double l = log_abs(phi.eval(z));
      double rhs = static_cast<double>(d) / m * lmb;
      row.lhs = std::exp(l);
      row.rhs = std::exp(rhs);
      row.log_margin = rhs - l;
      c.min_margin = std::min(c.min_margin, row.log_margin);
      if (!(row.log_margin > margin) && ok) {
        ok = false;
        c.reason = "inequality fails at (n,d) = (" + std::to_string(n) + "," + std::to_string(d) + ")";
      }
      compare(z);
      c.rows.push_back(row);
    }
  c.found = ok;
  return c;
}

ConditionECert search_condition_e(const PhiSpec& phi, const std::vector<int>& I, const SearchConfig& cfg) {
  if (I.empty()) throw Error("I must be nonempty");
  std::vector<int> ms(I.begin(), I.end());
  std::sort(ms.rbegin(), ms.rend());
  ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
  Index tried = 0;
  ConditionECert last;
  auto attempt = [&](int m, cplx a, cplx b) {
    ++tried;
    // Cheap pass in double first; the multiprecision comparison only runs on
    // candidates that already satisfy every inequality.
    double lmb = log_abs(phi.eval(static_cast<double>(m) * b));
    if (!(lmb > cfg.margin)) return false;
    for (int n : I)
      for (int d = 0; d <= n; ++d) {
        if (n == m && d == m) continue;
        double l = log_abs(phi.eval(static_cast<double>(d) * b + static_cast<double>(n - d) * a));
        if (!(static_cast<double>(d) / m * lmb - l > cfg.margin)) return false;
      }
    last = check_condition_e(phi, I, m, a, b, cfg.margin);
    return last.found;
  };
  if (cfg.mode == SearchConfig::Mode::Lattice) {
    for (Index k = 1; k <= cfg.k_max; ++k)
      for (int m : ms) {
        cplx a(0.0, 2.0 * kPi * static_cast<double>(k)), b(2.0 * kPi * static_cast<double>(k), 0.0);
        if (attempt(m, a, b)) {
          last.k = k;
          last.tried = tried;
          return last;
        }
      }
  } else {
    const int S = std::max(cfg.steps, 2);
    auto at = [&](int i) { return -cfg.radius + 2.0 * cfg.radius * i / (S - 1); };
    for (int m : ms)
      for (int br = 0; br < S; ++br)
        for (int bi = 0; bi < S; ++bi)
          for (int ar = 0; ar < S; ++ar)
            for (int ai = 0; ai < S; ++ai) {
              if (tried >= cfg.budget) goto done;
              if (attempt(m, {at(ar), at(ai)}, {at(br), at(bi)})) {
                last.tried = tried;
                return last;
              }
            }
  }
done:
  ConditionECert none;
  none.tried = tried;
  none.reason = "search budget exhausted without a certificate";
  return none;
}

WellBehavedCert wellbehaved_search(const PhiSpec& phi, cplx v, const std::vector<int>& I, double t_max,
                                   double margin) {
  if (I.empty()) throw Error("I must be nonempty");
  if (v == cplx(0.0)) throw Error("direction v must be nonzero");
  auto f = [&](double t) { return log_abs(phi.eval(t * v)); };
  const double h = 1e-3;
  double last_above = -1.0;
  for (double t = h; t <= t_max; t += h)
    if (f(t) > 0.0) last_above = t;
  if (last_above < 0.0) throw Error("no t with |phi(tv)| > 1 on the ray");
  if (last_above > t_max - 2 * h) throw Error("no decay of |phi(tv)| detected before t_max");
  double lo = last_above, hi = last_above + h;
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  WellBehavedCert W;
  W.v = v;
  W.t0 = hi;
  const int m = *std::min_element(I.begin(), I.end());
  double eta = 0.99 * W.t0 / (m + 1);
  for (int j = 0; j < 60 && !(f(W.t0 - eta) > margin); ++j) eta *= 0.5;
  W.t1 = W.t0 - eta;
  if (!(f(W.t1) > margin)) throw Error("no t_1 below t_0 with |phi(t_1 v)| > 1");
  cplx b = (W.t1 / m) * v;
  W.a0 = W.t0 + 1.0;
  const double eps = 0.25;
  for (int i = 0; i <= 100; ++i) {
    double s = (i % 2 == 0 ? 1.0 : -1.0) * eps * ((i + 1) / 2) / 50.0;
    auto c = check_condition_e(phi, I, m, (W.a0 + s) * v, b, margin);
    if (c.found) {
      c.tried = i + 1;
      W.cert = c;
      return W;
    }
  }
  W.cert.reason = "no a in [a0 - eps, a0 + eps] satisfies every inequality";
  return W;
}

double exp_sum_log_norm_bound(const ExpSum& s, double q) {
  double t = kNegInf;
  for (const auto& e : s) t = log_add(t, e.coef.log_abs() + q * std::abs(e.node));
  return t;
}

ExpSum apply_phi_power(const PhiSpec& phi, const ExpSum& s, Index N) {
  ExpSum out;
  for (const auto& e : s) {
    cplx p = phi.eval(e.node);
    XComplex pn = XComplex::polar_log(static_cast<double>(N) * log_abs(p), static_cast<double>(N) * std::arg(p));
    out.push_back({e.coef * pn, e.node});
  }
  return out;
}

EntireTrunc to_entire(const ExpSum& s, Index L) {
  EntireTrunc f;
  f.taylor.assign(static_cast<std::size_t>(L) + 1, 0.0);
  double r = 0.0;
  for (const auto& e : s) {
    r = std::max(r, std::abs(e.node));
    auto E = exp_vector(e.node, L);
    cplx c = e.coef.value();
    for (Index n = 0; n <= L; ++n) f.taylor[static_cast<std::size_t>(n)] += c * E.taylor[static_cast<std::size_t>(n)];
  }
  f.type_bound = -1.0;
  return f;
}

DeltaCert find_delta(const PhiSpec& phi, const std::vector<int>& I, int m, cplx a, cplx b, double delta0,
                     int max_halvings) {
  DeltaCert dc;
  dc.w0 = static_cast<double>(m) * b;
  auto lphi = [&](cplx z) {
    ++dc.samples;
    return log_abs(phi.eval(z));
  };
  const int kAngles = 16;
  auto disc = [&](cplx c, double R, const std::function<void(cplx)>& fn) {
    fn(c);
    for (double rho : {0.5, 1.0})
      for (int i = 0; i < kAngles; ++i) fn(c + std::polar(rho * R, 2.0 * kPi * i / kAngles));
  };
  double delta = delta0;
  for (int h = 0; h <= max_halvings; ++h, delta *= 0.5) {
    dc.halvings = h;
    dc.delta = delta;
    // (i) |phi| > 1 on the ball around w0
    double min_in = std::numeric_limits<double>::infinity();
    disc(dc.w0, delta, [&](cplx z) { min_in = std::min(min_in, lphi(z)); });
    if (!(min_in > 0.0)) {
      dc.failure = "|phi| <= 1 somewhere in B(mb, delta)";
      continue;
    }
    // (ii) a direction in which log|phi| is strictly convex on [w1, w2]
    bool convex = false;
    for (int i = 0; i < kAngles && !convex; ++i) {
      cplx dir = std::polar(0.9 * delta, kPi * i / kAngles);
      cplx w1 = dc.w0 + dir, w2 = dc.w0 - dir;
      auto g = [&](double t) { return lphi(t * w1 + (1.0 - t) * w2); };
      const int S = 8;
      std::vector<double> gv(S + 1);
      for (int j = 0; j <= S; ++j) gv[static_cast<std::size_t>(j)] = g(static_cast<double>(j) / S);
      bool ok = true;
      for (int x = 0; x <= S && ok; ++x)
        for (int y = x + 2; y <= S && ok; ++y) {
          double mid = g(0.5 * (x + y) / S);
          ok = mid < 0.5 * (gv[static_cast<std::size_t>(x)] + gv[static_cast<std::size_t>(y)]);
        }
      if (ok) {
        convex = true;
        dc.w1 = w1;
        dc.w2 = w2;
      }
    }
    if (!convex) {
      dc.failure = "no sampled direction with strictly convex log|phi|";
      continue;
    }
    // (iii) perturbed inequalities
    bool ok = true;
    for (int n : I)
      for (int d = 0; d <= n && ok; ++d) {
        if (n == m && d == m) continue;
        cplx c = static_cast<double>(d) * b + static_cast<double>(n - d) * a;
        double R = (static_cast<double>(d) / m + (n - d)) * delta;
        double worst = kNegInf;
        disc(c, R, [&](cplx z) { worst = std::max(worst, lphi(z)); });
        if (!(worst < static_cast<double>(d) / m * min_in)) {
          ok = false;
          dc.failure = "perturbed inequality fails at (n,d) = (" + std::to_string(n) + "," + std::to_string(d) + ")";
        }
      }
    if (!ok) continue;
    dc.ok = true;
    dc.failure.clear();
    return dc;
  }
  throw Error("delta conditions unverifiable at sampled resolution: " + dc.failure);
}

std::vector<cplx> place_gamma(const DeltaCert& dc, cplx a, int count) {
  std::vector<cplx> out;
  for (int j = 0; j < count; ++j)
    out.push_back(a + std::polar(0.5 * dc.delta * (j + 1) / (count + 1), 2.0 * kPi * j / std::max(count, 1)));
  return out;
}

std::vector<cplx> place_lambda(const DeltaCert& dc, int count) {
  std::vector<cplx> out;
  for (int j = 0; j < count; ++j) {
    double t = static_cast<double>(j + 1) / (count + 1);
    out.push_back(t * dc.w1 + (1.0 - t) * dc.w2);
  }
  return out;
}

namespace {

// All count vectors k over P slots with sum n.
void compositions(int P, int n, std::vector<int>& cur, const std::function<void(const std::vector<int>&)>& fn) {
  if (static_cast<int>(cur.size()) == P - 1) {
    cur.push_back(n);
    fn(cur);
    cur.pop_back();
    return;
  }
  for (int k = 0; k <= n; ++k) {
    cur.push_back(k);
    compositions(P, n - k, cur, fn);
    cur.pop_back();
  }
}

}  // namespace

ConvWitness build_convolution_witness(const PhiSpec& phi, const std::vector<int>& I, int m, cplx a, cplx b,
                                      const DeltaCert& dc, const std::vector<std::pair<cplx, cplx>>& U,
                                      const std::vector<std::pair<cplx, cplx>>& V, Index N, double q) {
  if (!dc.ok) throw Error("delta certificate is not valid");
  if (N < 0) throw Error("N must be >= 0");
  if (std::find(I.begin(), I.end(), m) == I.end()) throw Error("m must belong to I");
  (void)b;
  for (const auto& [al, g] : U)
    if (!(std::abs(g - a) < dc.delta)) throw Error("gamma outside B(a, delta)");
  const cplx seg = dc.w1 - dc.w2;
  for (const auto& [bj, lam] : V) {
    double t = std::real((lam - dc.w2) * std::conj(seg)) / std::norm(seg);
    if (t < 0.0 || t > 1.0 || std::abs(lam - (dc.w2 + t * seg)) > 1e-12 * (1.0 + std::abs(lam)))
      throw Error("lambda not on the segment [w1, w2]");
  }
  ConvWitness W;
  W.N = N;
  W.m = m;
  std::vector<ExpTerm> terms;
  for (const auto& [al, g] : U) terms.push_back({XComplex(al), g});
  double lc = kNegInf;
  for (const auto& [bj, lam] : V) {
    cplx p = phi.eval(lam);
    double lg = (log_abs(bj) - static_cast<double>(N) * log_abs(p)) / m;
    double arg = std::remainder(std::arg(bj) - static_cast<double>(N) * std::arg(p), 2.0 * kPi) / m;
    XComplex c = XComplex::polar_log(lg, arg);
    W.c.push_back(c);
    terms.push_back({c, lam / static_cast<double>(m)});
    lc = log_add(lc, lg + q * std::abs(lam) / m);
    XComplex back = XComplex::polar_log(static_cast<double>(N) * log_abs(p), static_cast<double>(N) * std::arg(p));
    XComplex cm(1.0);
    for (int i = 0; i < m; ++i) cm *= c;
    cm *= back;
    double rel = std::abs(cm.value() - bj) / std::abs(bj);
    W.v3_rel_error = std::max(W.v3_rel_error, rel);
  }
  W.log_u_minus_U = lc;
  W.u = terms;
  const int P = static_cast<int>(terms.size());
  const int p = static_cast<int>(U.size());
  auto expand = [&](int n, const std::function<void(const std::vector<int>&, const ExpTerm&)>& sink) {
    std::vector<int> cur;
    compositions(P, n, cur, [&](const std::vector<int>& k) {
      double lm = std::lgamma(n + 1.0);
      XComplex coef(1.0);
      cplx node = 0.0;
      for (int i = 0; i < P; ++i) {
        lm -= std::lgamma(k[static_cast<std::size_t>(i)] + 1.0);
        for (int r = 0; r < k[static_cast<std::size_t>(i)]; ++r) coef *= terms[static_cast<std::size_t>(i)].coef;
        node += static_cast<double>(k[static_cast<std::size_t>(i)]) * terms[static_cast<std::size_t>(i)].node;
      }
      if (coef.is_zero()) return;
      sink(k, {coef.scaled_log(lm), node});
    });
  };
  expand(m, [&](const std::vector<int>& k, const ExpTerm& t) {
    int d = 0, slots = 0;
    for (int i = p; i < P; ++i) {
      d += k[static_cast<std::size_t>(i)];
      if (k[static_cast<std::size_t>(i)] > 0) ++slots;
    }
    if (d < m)
      W.v1.push_back(t);
    else if (slots == 1)
      W.v3.push_back(t);
    else
      W.v2.push_back(t);
  });
  W.log_TN_v1 = exp_sum_log_norm_bound(apply_phi_power(phi, W.v1, N), q);
  W.log_TN_v2 = exp_sum_log_norm_bound(apply_phi_power(phi, W.v2, N), q);
  for (int n : I) {
    if (n == m) continue;
    ExpSum s;
    expand(n, [&](const std::vector<int>&, const ExpTerm& t) { s.push_back(t); });
    W.other_powers.emplace_back(n, exp_sum_log_norm_bound(apply_phi_power(phi, s, N), q));
  }
  return W;
}

}  // namespace hcalg
