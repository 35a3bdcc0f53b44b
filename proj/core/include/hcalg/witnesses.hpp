#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hcalg/algebra.hpp"
#include "hcalg/densitysets.hpp"
#include "hcalg/seq.hpp"
#include "hcalg/shifts.hpp"
#include "hcalg/spaces.hpp"
#include "hcalg/targets.hpp"
#include "hcalg/weights.hpp"

namespace hcalg {

// Norm of a nonnegative series given by the logs of its terms (basis weights
// included), plus a ratio-test estimate of the part beyond the last term.
// The ratio is the largest consecutive ratio over the last quarter of terms;
// when it is >= 1 the remainder is +inf and `converged` is false.
struct SeriesBound {
  double log_value = 0.0;      // log of the norm of the listed terms
  double log_remainder = 0.0;  // log of the estimated remainder
  double ratio = 0.0;
  bool converged = true;
  double total() const;
  double log_total() const;
};
SeriesBound series_bound(std::vector<double> logs, const SpaceSpec& spec);

// ---------------------------------------------------------------------------
// Coordinatewise witnesses.

struct KappaBeta {
  std::vector<double> kappa;  // L_beta(kappa) = 1
  MultiIndex beta;
  int draws = 0;
};

double L_alpha(const MultiIndex& a, const std::vector<double>& kappa);
// Deterministic variant: uses kappa0 as given; throws if the argmin is not unique.
KappaBeta kappa_beta_from(const std::vector<MultiIndex>& A, const std::vector<double>& kappa0);
KappaBeta select_kappa_beta(const std::vector<MultiIndex>& A, std::uint64_t seed, int budget = 1000);

struct CoordWitness {
  std::vector<TruncatedSeq> u;
  KappaBeta kb;
  Index n_k = 0;
  Index p = 0;
  // B^{n_k}(u^alpha) from the closed form sum_l y_l^{L_alpha} W_l^{1 - L_alpha} e_l.
  std::map<MultiIndex, TruncatedSeq> predicted;
};

CoordWitness build_coordwise_witness(const std::vector<MultiIndex>& A, const std::vector<TruncatedSeq>& x,
                                     const TruncatedSeq& y, Index n_k, const KappaBeta& kb, const WeightSeq& w);

// First n_k >= n_min for which the predicted images satisfy
// ||B^{n_k}(u^beta) - y|| < tol_beta and ||B^{n_k}(u^alpha)|| < tol_alpha.
Index search_coordwise_nk(const std::vector<MultiIndex>& A, const std::vector<TruncatedSeq>& x, const TruncatedSeq& y,
                          const KappaBeta& kb, const WeightSeq& w, const SpaceSpec& space, double tol_beta,
                          double tol_alpha, Index budget);

struct BilateralWitness {
  TruncatedSeq u;
  TruncatedSeq target_part;  // B^{n_k}(block^{m_0}) = y
  TruncatedSeq spill;        // B^{n_k}(x^{m_0}), supported on negative indices
  Index n_k = 0;
  int m0 = 1;
};

BilateralWitness build_bilateral_witness(int m0, const TruncatedSeq& x, const TruncatedSeq& y, const WeightSeq& w,
                                         Index n_k);

// ---------------------------------------------------------------------------
// Cauchy witnesses.

// Backward induction for s_d, ..., s_1: each minimal with s_i > 4p and the
// partial sums sum_{j>=i} (beta_j - alpha_j) s_j > 3p whenever alpha agrees
// with beta before i and alpha_i < beta_i.
std::vector<Index> choose_shift_amounts(const std::vector<MultiIndex>& A, const MultiIndex& beta, Index p);

MultiIndex lex_max(const std::vector<MultiIndex>& A);

struct CauchyWitness {
  std::vector<TruncatedSeq> u;  // in the caller's coordinate order
  std::vector<int> perm;        // perm[i] = caller coordinate placed at position i
  MultiIndex beta;              // caller order
  int m = 1;                    // beta of the leading coordinate
  Index p = 1, J = 0, N = 0, rho = 0;
  std::vector<Index> s;         // permuted order; s[0] is s_1
  std::vector<double> eta;      // permuted order; eta[0] unused
  double log_eps = 0.0;         // m >= 2 only
  std::vector<XComplex> d;      // d_0..d_p
  TruncatedSeq residual;        // B^N(u^beta) - y, single term at 3p (m >= 2) or 0
  Index horizon = 0;
};

// r: seminorm index of the ball; delta: its radius (eta_i = delta / (2 ||e_{s_i}||_r)).
CauchyWitness build_cauchy_witness(const std::vector<MultiIndex>& A, const std::vector<TruncatedSeq>& x,
                                   const TruncatedSeq& y, Index J, const WeightSeq& w, const SpaceSpec& space, int r,
                                   double delta);
Index cauchy_min_J(const std::vector<MultiIndex>& A, const std::vector<TruncatedSeq>& x, const TruncatedSeq& y);
// First J >= cauchy_min_J whose residual norm is below tol.
Index search_cauchy_J(const std::vector<MultiIndex>& A, const std::vector<TruncatedSeq>& x, const TruncatedSeq& y,
                      const WeightSeq& w, const SpaceSpec& space, int r, double delta, double tol, Index budget);

// ---------------------------------------------------------------------------
// Upper-frequent witnesses.

// Smallest N >= p whose worst-case tail bound (all |y(n,l)| = M) is < eps.
Index find_tail_threshold(const WeightSeq& w, const SpaceSpec& space, double eps, Index p, double M, int q = 1);
// The bound itself for a given N.
SeriesBound tail_threshold_bound(const WeightSeq& w, const SpaceSpec& space, Index N, Index p, double M, int q = 1);

struct UfhcCoordWitness {
  TruncatedSeq u;
  Index N = 0, N1 = 0, terms = 0, p = 0;
  int m0 = 1, m1 = 1;
};

UfhcCoordWitness build_ufhc_coordwise(int m0, int m1, const TruncatedSeq& v, const TruncatedSeq& x,
                                      const WeightSeq& w, const SpaceSpec& space, Index N, Index N1, Index terms);

struct ConditionBReport {
  std::vector<std::pair<Index, double>> values;  // (sigma, sup value)
  bool decreasing = false;
  bool converged = true;
};

ConditionBReport check_condition_b(const WeightSeq& w, const SpaceSpec& space, int m, double c,
                                   const std::vector<Index>& sigmas, int r = 1);

struct UfhcCauchyWitness {
  TruncatedSeq u;
  std::vector<Index> E;  // E_sigma, increasing
  int m = 2;
  Index q = 1, sigma = 0, p = 0, j_lo = 0, j_hi = 0;
  double c = 0.5, d = 0.6;
  double log_eps = 0.0;
  Index zmax = 0;   // largest index of the part of u^m that must vanish under B^s
  double density_ratio = 0.0;  // card(E) / max(E)
  double density_limit = 0.0;  // (d - c) / ((m-1) q + q d)
};

// M = ||y||_inf max(1, w_1..w_p)^{p+1}; q = max(p+1, find_tail_threshold(eta)).
Index choose_q(const WeightSeq& w, const SpaceSpec& space, const TruncatedSeq& y, double eta, int r = 1);

UfhcCauchyWitness build_ufhc_cauchy(int m, const TruncatedSeq& y, const TruncatedSeq& x, const WeightSeq& w, double c,
                                    double d, Index q, Index sigma);
// B^s(u^m) for s = (m-1) q sigma + q k from the closed form.
TruncatedSeq ufhc_cauchy_predicted(const UfhcCauchyWitness& W, const TruncatedSeq& y, const WeightSeq& w, Index k);

// ---------------------------------------------------------------------------
// Frequent witnesses on omega.

struct OmegaFhcWitness {
  TruncatedSeq u;
  std::vector<std::vector<Index>> used;  // n in A(p) with a materialized block
};

OmegaFhcWitness build_omega_fhc(const std::vector<Target>& targets, const DensityFamily& fam, const WeightSeq& w,
                                Index horizon);

enum class Regime { A1, A2, A3 };
std::string regime_name(Regime r);

struct OmegaMixedWitness {
  TruncatedSeq x;
  std::vector<Regime> regimes;        // per offset l
  std::vector<Index> n;               // n_k
  std::vector<std::vector<cplx>> abz;  // (alpha(k), beta(k), z_0(k), ..., z_p(k))
  int m0 = 1, m1 = 1;
  Index p = 0;
};

// Offsets are classified on the second half of the horizon with threshold
// log(1e6) on log(w_{l+1}...w_{n+l}); anything else is ambiguous.
std::vector<Regime> classify_regimes(const WeightSeq& w, Index p, Index horizon);
OmegaMixedWitness build_omega_hc_mixed(const TruncatedSeq& u_target, const TruncatedSeq& v_target,
                                       const std::vector<int>& I, const WeightSeq& w, Index horizon,
                                       std::uint64_t seed);
// Coordinate l of B^{n_k} P(x), computed from the block alone.
cplx mixed_coordinate(const OmegaMixedWitness& W, const WeightSeq& w, const Poly& P, std::size_t k, Index l);

// ---------------------------------------------------------------------------
// Frequent witnesses on c0 with the M_k weight.

struct NrResult {
  Index N = 0, N0 = 0, Ni = 0;
  int k0 = 0, k1 = 0;  // 1-based indices into M
  double C = 1.0;
  bool verified = false;
  std::size_t samples = 0;
  std::string failure;
};

// targets[0..r-1] are (v(1), m(1)) .. (v(r), m(r)). C <= 0 means "derive from
// the targets". When fam is given, (i)-(ii) are re-verified on sampled pairs.
NrResult compute_Nr(int r, const WeightSeq& w, const std::vector<Target>& targets, double C,
                    const DensityFamily* fam = nullptr);

struct C0PReport {
  int p = 0;
  bool inconclusive = false;
  std::string reason;
  Index Np = 0;
  std::vector<Index> B;        // B(p) within the construction horizon
  double norm_up = 0.0;        // ||u(p)||_inf
  Index checked = 0;           // n in B(p) verified
  // value + tail, max over n: ||B^n u(p)^{m(p)} - v(p)||, ||B^n u(p)^m|| for
  // m > m(p), and ||B^n u(q)^m|| for the other q
  double worst_target = 0.0, worst_higher = 0.0, worst_cross = 0.0;
  bool pass = false;
};

struct C0FhcWitness {
  TruncatedSeq u;
  std::vector<C0PReport> reports;
  Index horizon = 0, verify_horizon = 0;
  int extra_degrees = 3;
};

// u = sum_p u(p) over the conclusive p; the three bounds checked for n in B(p) with
// n <= verify_horizon, for m up to m(p) + extra_degrees.
C0FhcWitness build_c0_fhc(const std::vector<Target>& targets, const DensityFamily& fam, const WeightSeq& w,
                          Index horizon, Index verify_horizon, int extra_degrees = 3);

// log sup-norm of B^n u(q)^m from the closed form, over the blocks n' in B
// with n' >= n (n' > n when strict); u(q) is built from (v, mq). With m = mq
// and strict set this is ||B^n u(q)^{m(q)} - v(q)||.
double c0_log_norm_power(const std::vector<Index>& B, const TruncatedSeq& v, int mq, int m, const WeightSeq& w,
                         Index n, Index horizon, bool strict);
TruncatedSeq c0_block_vector(const std::vector<Index>& B, const TruncatedSeq& v, int m, const WeightSeq& w,
                             Index horizon);

}  // namespace hcalg
