#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hcalg/algebra.hpp"
#include "hcalg/densitysets.hpp"
#include "hcalg/seq.hpp"
#include "hcalg/spaces.hpp"
#include "hcalg/weights.hpp"

namespace hcalg {

// T^N(u^beta) must land in B(center, radius) for seminorm q, every other
// T^N(u^alpha) in the ball of radius W_radius at 0. T is B_w.
struct CriterionInstance {
  std::vector<MultiIndex> A;
  MultiIndex beta;
  std::vector<TruncatedSeq> u;
  Index N = 0;
  TruncatedSeq center;
  double radius = 1.0;
  int q = 1;
  double W_radius = 1.0;
  ProductKind product = ProductKind::Coordinatewise;
  const WeightSeq* w = nullptr;
  SpaceSpec space;

  void validate() const;
};

struct AlphaResult {
  MultiIndex alpha;
  bool is_beta = false;
  bool exact_zero = false;  // no stored coefficient and no tail
  double norm = 0.0;        // distance to the center (beta) or to 0
  double tail = 0.0;
  double radius = 0.0;
  bool in_ball = false;     // norm + tail < radius
};

struct DensityResult {
  std::string target;
  std::vector<Index> hits;  // sampled p >= 1 that hit
  Index scanned = 0;        // sampled p
  Index horizon = 0;
  Index stride = 1;
  // [min, max] brackets: unsampled p counted as misses, then as hits.
  double lower_min = 0.0, lower_max = 0.0;
  double upper_min = 0.0, upper_max = 0.0;
};

struct WitnessReport {
  std::string kind;
  std::uint64_t seed = 0;
  std::map<std::string, double> numbers;
  std::map<std::string, std::string> strings;
  std::vector<AlphaResult> alphas;
  std::vector<DensityResult> densities;
  std::vector<std::vector<int>> hit_rows;  // per sampled p: p, then one 0/1 per target
  std::string status = "pass";             // pass | fail | inconclusive

  void fail_if(bool bad, const std::string& why);
};

WitnessReport check_instance(const CriterionInstance& inst);

struct OrbitTarget {
  TruncatedSeq center;
  double radius = 1.0;
  int q = 1;
  std::string name;
};

// Iterates B^p(P(x)) for p = 0, stride, 2 stride, ... <= horizon_N, computing
// P(x) once. burn_in is passed to density_estimate.
WitnessReport orbit_hit_density(const WeightSeq& w, const TruncatedSeq& x, const Poly& P,
                                const std::vector<OrbitTarget>& targets, Index horizon_N, Index stride,
                                const SpaceSpec& space, ProductKind product, Index burn_in = 0);

// Exit code contract: 0 pass, 1 fail, 2 inconclusive.
int exit_code(const std::string& status);

}  // namespace hcalg
