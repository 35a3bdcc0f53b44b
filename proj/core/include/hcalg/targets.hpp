#pragma once

#include <cstdint>
#include <vector>

#include "hcalg/seq.hpp"

namespace hcalg {

// One entry (v(p), m(p)) of a dense target sequence; v has support in [0,p].
struct Target {
  int p = 1;
  TruncatedSeq v;
  int m = 1;
};

// Rational complex number (a + ib)/den drawn at enumeration level i: the
// denominator is i+1 and |a|,|b| <= (1 + i/8) den, so magnitudes stay near 1
// early on while every Gaussian rational is eventually reachable.
cplx seeded_rational(std::uint64_t seed, std::uint64_t level, std::uint64_t slot);

// Diagonal enumeration of (vector index i, degree m): (0,1), (1,1), (0,2),
// (2,1), (1,2), (0,3), ... Entry p (1-based) pairs the i-th rational vector,
// restricted to [0,p], with degree m. The first two entries have m = 1.
std::vector<Target> dense_targets(int count, Index horizon, std::uint64_t seed);
std::pair<std::uint64_t, int> diagonal_pair(std::uint64_t index);

// Seeded dense sequence in C^dim whose first `nonzero` coordinates are never 0.
std::vector<std::vector<cplx>> dense_complex_vectors(int count, int dim, int nonzero, std::uint64_t seed);

}  // namespace hcalg
