#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hcalg/algebra.hpp"
#include "hcalg/seq.hpp"
#include "hcalg/weights.hpp"

// Brute-force reference path. Nothing here reuses the fast routines in
// algebra or shifts: products are expanded term by term, powers by repeated
// multiplication, and B_w is applied one step at a time.
namespace hcalg::oracle {

using Sparse = std::vector<std::pair<Index, XComplex>>;  // sorted by index, no zeros

Sparse from_seq(const TruncatedSeq& x);
Sparse multiply(const Sparse& a, const Sparse& b, ProductKind kind);
Sparse power(const Sparse& x, int m, ProductKind kind);
Sparse monomial(const std::vector<Sparse>& u, const MultiIndex& alpha, ProductKind kind);

// One application of B_w: y_n = w_{n+1} x_{n+1}. Indices below `lower` drop out.
Sparse step_backward(const Sparse& x, const WeightSeq& w, Index lower);
Sparse shift_backward(Sparse x, const WeightSeq& w, Index steps, Index lower);

struct Comparison {
  double rel_error = 0.0;  // max |a_n - b_n| / max(max |a|, max |b|)
  bool zero_a = false, zero_b = false;
  bool pass = false;
  std::string detail;
};

// Agreement to tol relative to the larger sup; two exact zeros agree.
Comparison compare(const Sparse& brute, const TruncatedSeq& fast, double tol = 1e-9);

}  // namespace hcalg::oracle
