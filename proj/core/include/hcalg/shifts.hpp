#pragma once

#include <utility>
#include <vector>

#include "hcalg/seq.hpp"
#include "hcalg/spaces.hpp"
#include "hcalg/weights.hpp"

namespace hcalg {

enum class Direction { Backward, Forward };

// Backward: y_n = w_{n+1}...w_{n+N} x_{n+N}. Forward: F e_n = w_{n+1} e_{n+1}.
// A nonzero tail bound is pushed through the operator-norm estimate
// sup_j w_{j+1}...w_{j+N} ||e_j|| / ||e_{j+N}|| scanned over the horizon.
TruncatedSeq apply_shift(const WeightSeq& w, const TruncatedSeq& x, Index steps, Direction dir,
                         const SpaceSpec* space = nullptr);

using Samples = std::vector<std::pair<Index, double>>;

// Finite-horizon stand-in for "tends to zero": the last value is below tol and
// the values do not increase over the last third of the samples.
struct ZeroJudgement {
  bool pass = false;
  double final_value = 0.0;
  bool monotone_tail = false;
};
ZeroJudgement tends_to_zero(const Samples& s, double tol);

struct GammaOffsetReport {
  Index l = 0;
  Samples values;           // (n, (w_{l+1}...w_{n+l})^-gamma ||e_{n+l}||_q)
  std::vector<Index> subsequence;  // n with value below 1/log(e+n)
  double inf = 0.0;
  ZeroJudgement along_subsequence;
};

std::vector<GammaOffsetReport> check_gamma_condition(const WeightSeq& w, const SpaceSpec& spec, double gamma,
                                                     const std::vector<Index>& offsets, Index horizon, int q = 1,
                                                     double tol = 1e-3);

struct RegularityReport {
  bool pass = false;
  double worst_c = 0.0;      // max of ||e_n||_r ||e_k||_r / (C ||e_{n+k}||_q)
  double worst_lemma = 0.0;  // max of prod w_{k_j} ||e_u||_r / (C ||e_v||_q)
};

RegularityReport verify_regularity(const SpaceSpec& spec, const WeightSeq& w, int r, int q, double C, Index M,
                                   Index rho, Index horizon);

struct InverseExampleRow {
  Index n = 0;
  double forward = 0.0;   // (rho_{-1}...rho_{-n})^{-1/2} ||e_{-n}||
  double backward = 0.0;  // w_{-1}...w_{-n} ||e_{-n}||
  double forward_log_error = 0.0;
  double backward_log_error = 0.0;
};

std::vector<InverseExampleRow> check_inverse_example(Index horizon);

}  // namespace hcalg
