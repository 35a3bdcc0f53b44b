#pragma once

#include <string>
#include <vector>

#include "hcalg/seq.hpp"

namespace hcalg {

enum class SpaceKind { Lp, C0, Omega, Entire, WeightedC0 };

// Weight of a weighted c0 space: ||x|| = sup |x_n| gamma_n, stored as log gamma.
struct Gamma {
  enum class Form { Explicit, CounterexampleOdd, AbsPlusOne, Pow2 };
  Form form = Form::Explicit;
  std::vector<double> values;  // Explicit only, indices 0..size-1

  double log_at(Index n) const;
  std::string name() const;
};

struct SpaceSpec {
  SpaceKind kind = SpaceKind::Lp;
  double p = 1.0;
  bool bilateral = false;
  int Q = 1;
  Gamma gamma;

  static SpaceSpec lp(double p, bool bilateral = false);
  static SpaceSpec c0(bool bilateral = false);
  static SpaceSpec omega(int Q);
  static SpaceSpec entire(int Q);
  static SpaceSpec weighted_c0(Gamma g, bool bilateral = false);

  void validate() const;
  bool single_norm() const { return kind != SpaceKind::Omega && kind != SpaceKind::Entire; }
  // True when the seminorm is a (weighted) sum of |x_n|, so the worst case over
  // aligned phases is additive.
  bool additive() const;
  std::string kind_name() const;

  // log ||e_n||_q; -inf when the seminorm ignores index n (Omega, n > q).
  double log_basis_norm(Index n, int q) const;
  double basis_norm(Index n, int q) const;
};

// Seminorm of a vector given by per-index log magnitudes (already including
// the basis weights). Sorted ascending before accumulation.
double combine_log_terms(std::vector<double>& logs, const SpaceSpec& spec);

double log_seminorm(const TruncatedSeq& x, const SpaceSpec& spec, int q);
double seminorm(const TruncatedSeq& x, const SpaceSpec& spec, int q);

struct FNorm {
  double value = 0.0;      // sum_{p=1}^{P} 2^-p min(1, ||x||_p)
  double remainder = 0.0;  // bound on the omitted p > P terms
  double total() const { return value + remainder; }
};

FNorm f_norm(const TruncatedSeq& x, const SpaceSpec& spec, int p_max = 30);

bool in_ball(const TruncatedSeq& x, const TruncatedSeq& center, double radius, const SpaceSpec& spec, int q);

}  // namespace hcalg
