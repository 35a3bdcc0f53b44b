#pragma once

#include <map>
#include <vector>

#include "hcalg/seq.hpp"

namespace hcalg {

using IntSet = std::vector<Index>;  // strictly increasing, elements >= 1

struct DensityFamily {
  std::vector<IntSet> sets;
  Index horizon = 0;
  std::vector<Index> a;             // a(p), p = 1..count; empty when (ii) not enforced
  std::map<Index, Index> kappa;     // C -> kappa
  std::vector<double> lower_density;  // recorded delta_p per set
  Index burn_in = 0;
};

struct SplitResult {
  IntSet A, B;
};

SplitResult split_two(const IntSet& E);
IntSet thin_separate(const IntSet& A, Index a);
IntSet naturals(Index horizon);

double density_estimate(const IntSet& A, Index horizon, Index burn_in, bool lower);

// Smallest kappa such that elements of different sets with max(n,n') >= kappa
// are at least C apart, scanned over the stored prefixes.
Index scan_kappa(const std::vector<IntSet>& sets, Index C);

DensityFamily build_family_far(int count, Index horizon, Index burn_in = 0);
DensityFamily enforce_pairwise_gap(const DensityFamily& fam, const std::vector<Index>& a);

// Exact integer checks of (ii) and of every kappa entry. Returns an empty
// string on success, otherwise a description of the first violation.
std::string check_separation(const DensityFamily& fam);
std::string check_kappa(const DensityFamily& fam, Index C, Index kappa);

struct MkSequence {
  std::vector<Index> M;  // M_1 .. M_K
  bool exhausted = false;  // the horizon ran out before the requested count
};

// M_1 = 1, M_{k+1} = max(kappa(M_k), M_k + 1, 2 M_k - M_{k-1}).
MkSequence compute_Mk_prefix(const DensityFamily& fam, int count);
std::vector<Index> compute_Mk(const DensityFamily& fam, int count);

}  // namespace hcalg
