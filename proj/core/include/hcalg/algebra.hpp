#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "hcalg/seq.hpp"
#include "hcalg/spaces.hpp"

namespace hcalg {

enum class ProductKind { Coordinatewise, Cauchy };

std::string product_name(ProductKind k);
ProductKind parse_product(const std::string& s);

using MultiIndex = std::vector<int>;

int degree(const MultiIndex& a);
std::string to_string(const MultiIndex& a);

// P(z) = sum_alpha P^(alpha) z^alpha with alpha != 0.
struct Poly {
  int d = 1;
  std::map<MultiIndex, cplx> terms;

  static Poly monomial(const MultiIndex& a, cplx c = 1.0);
  static Poly power(int m) { return monomial({m}); }
  void add(const MultiIndex& a, cplx c);
  void validate() const;
  std::vector<MultiIndex> support() const;
};

TruncatedSeq product(const TruncatedSeq& x, const TruncatedSeq& y, ProductKind kind);
TruncatedSeq power(const TruncatedSeq& x, int m, ProductKind kind);
// u^alpha = u_1^alpha_1 ... u_d^alpha_d, zero exponents omitted.
TruncatedSeq monomial(const std::vector<TruncatedSeq>& u, const MultiIndex& alpha, ProductKind kind);
TruncatedSeq eval_poly(const Poly& P, const std::vector<TruncatedSeq>& u, ProductKind kind);

struct FreeGenerators {
  std::vector<TruncatedSeq> g;
  std::vector<double> lambda;
  std::vector<double> c;  // c_0..c_L
  bool b_default = false;
};

using BSeq = std::function<double(Index)>;

// b_n = 2^-n (1 + ||e_n||_{max(n,1)})^-1
BSeq default_b(const SpaceSpec& spec);
std::vector<double> seeded_lambdas(int count, std::uint64_t seed);
// Start of the block [a_{m-1}, a_m) containing n, and its end.
std::pair<Index, Index> generator_block(Index n);

FreeGenerators free_generators(int count, const SpaceSpec& spec, const BSeq& b, const std::vector<double>& lambda,
                               Index horizon);

struct VandermondeCertificate {
  std::vector<MultiIndex> alphas;
  std::vector<double> nodes;   // lambda^alpha
  double det_lu = 0.0;         // determinant of the normalized matrix
  double det_product = 0.0;    // prod_{i>j} (node_i - node_j)
  double log_abs_det = 0.0;    // sum of log |node_i - node_j|, immune to underflow
  double min_gap = 0.0;
  bool nonzero = false;
};

VandermondeCertificate vandermonde_certificate(const std::vector<double>& lambda, int max_degree);

}  // namespace hcalg
