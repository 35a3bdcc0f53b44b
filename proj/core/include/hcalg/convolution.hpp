#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hcalg/seq.hpp"

namespace hcalg {

// Truncated entire function: Taylor coefficients a_0..a_L. When type_bound r
// is set (>= 0), the dropped coefficients satisfy |a_n| <= r^n / n!.
struct EntireTrunc {
  std::vector<cplx> taylor;
  double type_bound = -1.0;
  double tail_bound = 0.0;  // in the q = 1 seminorm sum |a_n|

  Index L() const { return static_cast<Index>(taylor.size()) - 1; }
  // sum |a_n| q^n over the stored coefficients
  double seminorm(double q = 1.0) const;
};

struct PhiSpec {
  enum class Form { Taylor, HalfExpPlusExpIMinusQuarter, PolyTimesExp };
  Form form = Form::Taylor;
  std::vector<cplx> poly;    // PolyTimesExp: P(z) = sum poly[j] z^j; Taylor: the coefficients themselves
  std::vector<cplx> taylor;  // c_0..c_K

  static PhiSpec half_exp_plus_exp_i_minus_quarter(int K);
  static PhiSpec poly_times_exp(std::vector<cplx> P, int K);
  static PhiSpec polynomial(std::vector<cplx> c);

  std::string name() const;
  cplx eval(cplx z) const;         // closed form when available
  cplx eval_taylor(cplx z) const;  // truncated series in double
  // max_k |c_k| k!, so that |c_k| <= C / k! for the stored coefficients
  double factorial_constant() const;
  void validate() const;
};

// Reads {"closed_form": ..., "poly": [[re,im],...], "taylor_len": K}.
PhiSpec parse_phi(const std::string& closed_form, const std::vector<cplx>& poly, int taylor_len);

EntireTrunc exp_vector(cplx lambda, Index L);
EntireTrunc cauchy_product(const EntireTrunc& f, const EntireTrunc& g);

// (phi(D) f)_n = sum_k c_k a_{n+k} (n+k)!/n!, truncated at the stored L.
EntireTrunc phi_of_D(const PhiSpec& phi, const EntireTrunc& f);

// Explicit bound on ||phi(D)E(lambda) - phi(lambda)E(lambda)||_q from the
// dropped Taylor terms of both phi and E(lambda), using |c_k| <= C/k! for
// k beyond the stored coefficients, plus a bound on the rounding of the
// double evaluation.
double eigen_tolerance(const PhiSpec& phi, cplx lambda, Index L, double q = 1.0);

struct EigenCheck {
  double computed = 0.0;   // ||phi(D)E - phi(lambda)E||_q over n <= L
  double tolerance = 0.0;  // eigen_tolerance
  bool pass = false;
};
EigenCheck check_eigen_relation(const PhiSpec& phi, cplx lambda, Index L, double q, double tol);

// Evaluates the Taylor series at z in 100-digit arithmetic with as many terms
// as needed; used to cross-check closed forms on certificate points.
cplx eval_taylor_multiprecision(const PhiSpec& phi, cplx z);

struct ConditionRow {
  int n = 0, d = 0;
  double lhs = 0.0;  // |phi(d b + (n-d) a)|
  double rhs = 0.0;  // |phi(m b)|^{d/m}
  double log_margin = 0.0;  // log rhs - log lhs
};

struct ConditionECert {
  bool found = false;
  int m = 0;
  cplx a, b;
  Index k = 0;  // lattice index when the lattice mode was used
  double phi_mb = 0.0;
  std::vector<ConditionRow> rows;
  double min_margin = 0.0;
  double closed_vs_taylor = 0.0;  // worst relative disagreement on the certificate points
  Index tried = 0;
  std::string reason;
};

// Evaluates every inequality for a fixed (m, a, b).
ConditionECert check_condition_e(const PhiSpec& phi, const std::vector<int>& I, int m, cplx a, cplx b,
                                 double margin);

struct SearchConfig {
  enum class Mode { Lattice, Grid };
  Mode mode = Mode::Lattice;
  Index k_max = 10;      // lattice: a = 2 pi i k, b = 2 pi k for k = 1..k_max
  double radius = 4.0;   // grid: Re, Im of a and b in [-radius, radius]
  int steps = 9;         // grid points per real axis
  double margin = 1e-6;  // required log margin
  Index budget = 200000;
};

ConditionECert search_condition_e(const PhiSpec& phi, const std::vector<int>& I, const SearchConfig& cfg);

struct WellBehavedCert {
  double t0 = 0.0, t1 = 0.0, a0 = 0.0;
  cplx v;
  ConditionECert cert;
};

// Ray scan along v, then the construction of the corollary with m = min I.
WellBehavedCert wellbehaved_search(const PhiSpec& phi, cplx v, const std::vector<int>& I, double t_max = 60.0,
                                   double margin = 1e-9);

// Finite sum of exponentials sum c E(mu).
struct ExpTerm {
  XComplex coef;
  cplx node;
};
using ExpSum = std::vector<ExpTerm>;

double exp_sum_log_norm_bound(const ExpSum& s, double q = 1.0);  // log of sum |c| e^{q|mu|}
ExpSum apply_phi_power(const PhiSpec& phi, const ExpSum& s, Index N);
EntireTrunc to_entire(const ExpSum& s, Index L);

struct DeltaCert {
  double delta = 0.0;
  cplx w0, w1, w2;
  int halvings = 0;
  Index samples = 0;
  bool ok = false;
  std::string failure;
};

// Shrinks delta geometrically from delta0 until the sampled checks of
// |phi| > 1 on B(mb, delta), convexity of log|phi| on [w1, w2] and the
// perturbed inequalities all pass.
DeltaCert find_delta(const PhiSpec& phi, const std::vector<int>& I, int m, cplx a, cplx b, double delta0 = 0.5,
                     int max_halvings = 30);

// Nodes spread along B(a, delta) and the segment [w1, w2].
std::vector<cplx> place_gamma(const DeltaCert& dc, cplx a, int count);
std::vector<cplx> place_lambda(const DeltaCert& dc, int count);

struct ConvWitness {
  ExpSum u;
  std::vector<XComplex> c;  // c_j(N)
  ExpSum v1, v2, v3;        // u^m = v1 + v2 + v3
  double log_TN_v1 = 0.0, log_TN_v2 = 0.0;  // bounds on ||T^N v_i||_q
  double v3_rel_error = 0.0;  // max_j |c_j^m phi(lambda_j)^N - b_j| / |b_j|
  std::vector<std::pair<int, double>> other_powers;  // (n, log bound on ||T^N u^n||_q), n in I \ {m}
  double log_u_minus_U = 0.0;  // log ||u - sum a_l E(gamma_l)||_q bound
  Index N = 0;
  int m = 1;
};

ConvWitness build_convolution_witness(const PhiSpec& phi, const std::vector<int>& I, int m, cplx a, cplx b,
                                      const DeltaCert& dc, const std::vector<std::pair<cplx, cplx>>& U,
                                      const std::vector<std::pair<cplx, cplx>>& V, Index N, double q = 1.0);

}  // namespace hcalg
