#pragma once

#include <string>
#include <vector>

#include "hcalg/seq.hpp"

namespace hcalg {

enum class WeightKind {
  Rolewicz,            // w_n = lambda
  OnePlusLambdaOverN,  // w_n = 1 + lambda/n
  ExpNAlpha,           // w_1...w_n = exp(n^alpha)
  CounterexampleOdd,   // w_1...w_{2n} = 2^{n-1}, w_1...w_{2n+1} = 2^{2n}
  MkWeight,            // block construction driven by an integer sequence M
  BilateralInverseExample,  // w_0 = 1, w_n = 2, w_{-n} = n^2/(n+1)^2
  Derivative,          // w_n = n (D on entire functions)
  Explicit,            // w_1..w_K given; bilateral lists start at -K
};

std::string weight_name(WeightKind k);
WeightKind parse_weight_kind(const std::string& s);

// Weight sequence with cumulative logs LW(n), LW(0) = 0 and
// LW(n) - LW(n-1) = log w_n for every integer n, so that
// w_{a+1} ... w_b = exp(LW(b) - LW(a)).
class WeightSeq {
 public:
  static WeightSeq rolewicz(double lambda, Index horizon);
  static WeightSeq one_plus_lambda_over_n(double lambda, Index horizon);
  static WeightSeq exp_n_alpha(double alpha, Index horizon);
  static WeightSeq counterexample_odd(Index horizon);
  static WeightSeq mk_weight(std::vector<Index> M, Index horizon);
  static WeightSeq bilateral_inverse_example(Index horizon);
  static WeightSeq derivative(Index horizon);
  static WeightSeq explicit_list(std::vector<double> w, bool bilateral = false);

  WeightKind kind() const { return kind_; }
  double param() const { return param_; }
  const std::vector<Index>& M() const { return M_; }
  const std::vector<double>& explicit_values() const { return explicit_; }
  bool bilateral() const { return bilateral_; }
  Index horizon() const { return horizon_; }

  // LW(n); throws Inconclusive outside the materialized range.
  double logW(Index n) const;
  // log(w_{a+1} ... w_b) for a <= b.
  double log_product(Index a, Index b) const { return logW(b) - logW(a); }
  double log_w(Index n) const { return logW(n) - logW(n - 1); }
  double w(Index n) const { return std::exp(log_w(n)); }

 private:
  WeightSeq(WeightKind k, Index horizon, bool bilateral) : kind_(k), horizon_(horizon), bilateral_(bilateral) {}
  void build(const std::vector<double>& log_w_pos, const std::vector<double>& log_w_neg);

  WeightKind kind_;
  Index horizon_;
  bool bilateral_;
  double param_ = 0.0;
  std::vector<Index> M_;
  std::vector<double> explicit_;
  std::vector<double> pos_;  // LW(0..horizon)
  std::vector<double> neg_;  // LW(0), LW(-1), ..., LW(-horizon)
};

}  // namespace hcalg
