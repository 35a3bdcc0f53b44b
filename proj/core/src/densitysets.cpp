#include "hcalg/densitysets.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <string>

#include "hcalg/error.hpp"

namespace hcalg {

namespace {

Index isqrt(Index k) {
  auto r = static_cast<Index>(std::sqrt(static_cast<double>(k)));
  while (r * r > k) --r;
  while ((r + 1) * (r + 1) <= k) ++r;
  return r;
}

struct Labeled {
  Index n;
  int set;
};

std::vector<Labeled> merged(const std::vector<IntSet>& sets) {
  std::vector<Labeled> all;
  for (std::size_t p = 0; p < sets.size(); ++p)
    for (Index n : sets[p]) all.push_back({n, static_cast<int>(p)});
  std::sort(all.begin(), all.end(), [](const Labeled& a, const Labeled& b) { return a.n < b.n; });
  return all;
}

// max over N in [burn_in, horizon] of card(A cap [1,N]) / N
double upper_ratio(const IntSet& A, Index horizon, Index burn_in) { return density_estimate(A, horizon, burn_in, false); }

}  // namespace

IntSet naturals(Index horizon) {
  IntSet out;
  for (Index n = 1; n <= horizon; ++n) out.push_back(n);
  return out;
}

SplitResult split_two(const IntSet& E) {
  for (std::size_t i = 1; i < E.size(); ++i)
    if (E[i] <= E[i - 1]) throw Error("split_two needs a strictly increasing list");
  const auto size = static_cast<Index>(E.size());
  if (size < 4) throw Error("split_two needs at least 4 elements to fill one block");
  SplitResult r;
  Index M = 1;
  for (Index k = 1; M <= size; ++k) {
    Index N = M + k, P = N + isqrt(k), Q = P + k, next = Q + isqrt(k);
    for (Index j = M; j < N && j <= size; ++j) r.A.push_back(E[static_cast<std::size_t>(j - 1)]);
    for (Index j = P; j < Q && j <= size; ++j) r.B.push_back(E[static_cast<std::size_t>(j - 1)]);
    M = next;
  }
  return r;
}

IntSet thin_separate(const IntSet& A, Index a) {
  if (a < 1) throw Error("thinning factor must be >= 1");
  IntSet out;
  for (auto j = static_cast<std::size_t>(a); j <= A.size(); j += static_cast<std::size_t>(a)) out.push_back(A[j - 1]);
  return out;
}

double density_estimate(const IntSet& A, Index horizon, Index burn_in, bool lower) {
  if (burn_in >= horizon) throw Error("burn-in must be below the horizon");
  Index start = std::max<Index>(burn_in, 1);
  std::size_t count = 0;
  double best = lower ? 2.0 : -1.0;
  auto it = A.begin();
  for (Index N = 1; N <= horizon; ++N) {
    while (it != A.end() && *it <= N) {
      ++count;
      ++it;
    }
    if (N < start) continue;
    double r = static_cast<double>(count) / static_cast<double>(N);
    best = lower ? std::min(best, r) : std::max(best, r);
  }
  return best;
}

Index scan_kappa(const std::vector<IntSet>& sets, Index C) {
  auto all = merged(sets);
  Index kappa = 1;
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size() && all[j].n - all[i].n < C; ++j)
      if (all[j].set != all[i].set) kappa = std::max(kappa, all[j].n + 1);
  return kappa;
}

DensityFamily build_family_far(int count, Index horizon, Index burn_in) {
  if (count < 1) throw Error("family needs count >= 1");
  if (burn_in == 0) burn_in = std::max<Index>(1, horizon / 100);
  DensityFamily fam;
  fam.horizon = horizon;
  fam.burn_in = burn_in;
  IntSet E = naturals(horizon);
  if (count == 1) {
    fam.sets.push_back(E);
  } else {
    for (int r = 1; r < count; ++r) {
      if (E.size() < 4) throw Error("horizon too small for " + std::to_string(count) + " sets");
      auto [A, B] = split_two(E);
      fam.sets.push_back(A);
      if (r == count - 1)
        fam.sets.push_back(B);
      else
        E = thin_separate(B, r + 1);  // pairwise distances >= r + 1 inside the reservoir
    }
  }
  for (const auto& s : fam.sets) {
    double d = density_estimate(s, horizon, burn_in, true);
    if (!(d > 0.0)) throw Error("horizon too small: a set has zero density on the window");
    fam.lower_density.push_back(d);
  }
  for (Index C : {Index{1}, Index{10}, Index{100}}) fam.kappa[C] = scan_kappa(fam.sets, C);
  return fam;
}

DensityFamily enforce_pairwise_gap(const DensityFamily& fam, const std::vector<Index>& a) {
  const std::size_t count = fam.sets.size();
  if (a.size() < count) throw Error("gap sequence shorter than the family");
  DensityFamily out = fam;
  out.a.assign(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(count));
  if (std::all_of(out.a.begin(), out.a.end(), [](Index v) { return v == 0; })) return out;

  // Within a set: gaps >= 2a(p) and min >= a(p) by keeping every f-th element.
  for (std::size_t p = 0; p < count; ++p) {
    IntSet& S = out.sets[p];
    Index need = 2 * out.a[p];
    Index gap = std::numeric_limits<Index>::max();
    for (std::size_t i = 1; i < S.size(); ++i) gap = std::min(gap, S[i] - S[i - 1]);
    Index f = 1;
    if (need > 0 && gap < need) f = (need + gap - 1) / gap;
    S = thin_separate(S, f);
    S.erase(S.begin(), std::lower_bound(S.begin(), S.end(), out.a[p]));
  }

  // Across sets: each set in turn plays the first set, loses the neighbourhoods
  // of the (thinned) later sets, and the later sets are thinned by powers of two
  // until the removed mass is below delta / 2^j.
  for (std::size_t i = 0; i + 1 < count; ++i) {
    double delta = density_estimate(out.sets[i], out.horizon, out.burn_in, true);
    if (!(delta > 0.0)) throw Inconclusive("cannot certify positive density of set " + std::to_string(i + 1));
    std::vector<bool> removed(out.sets[i].size(), false);
    for (std::size_t p = i + 1; p < count; ++p) {
      Index r = out.a[i] + out.a[p];
      double budget = delta / std::ldexp(1.0, static_cast<int>(p - i + 1));
      for (Index f = 1;; f *= 2) {
        IntSet T = thin_separate(out.sets[p], f);
        if (T.empty()) throw Inconclusive("thinning emptied set " + std::to_string(p + 1) + " at the horizon");
        IntSet R;
        std::vector<bool> hit(out.sets[i].size(), false);
        for (Index t : T) {
          auto lo = std::lower_bound(out.sets[i].begin(), out.sets[i].end(), t - r);
          for (auto it = lo; it != out.sets[i].end() && *it <= t + r; ++it) {
            auto k = static_cast<std::size_t>(it - out.sets[i].begin());
            if (!hit[k]) {
              hit[k] = true;
              R.push_back(*it);
            }
          }
        }
        std::sort(R.begin(), R.end());
        if (R.empty() || upper_ratio(R, out.horizon, out.burn_in) < budget) {
          out.sets[p] = std::move(T);
          for (std::size_t k = 0; k < hit.size(); ++k)
            if (hit[k]) removed[k] = true;
          break;
        }
        if (f > static_cast<Index>(out.sets[p].size()))
          throw Inconclusive("no thinning factor meets the removed-mass budget for set " + std::to_string(p + 1));
      }
    }
    IntSet kept;
    for (std::size_t k = 0; k < out.sets[i].size(); ++k)
      if (!removed[k]) kept.push_back(out.sets[i][k]);
    out.sets[i] = std::move(kept);
  }

  out.lower_density.clear();
  for (const auto& s : out.sets) {
    if (s.empty()) throw Inconclusive("a set became empty at the horizon");
    out.lower_density.push_back(density_estimate(s, out.horizon, out.burn_in, true));
  }
  for (auto& [C, k] : out.kappa) k = scan_kappa(out.sets, C);
  std::string err = check_separation(out);
  if (!err.empty()) throw Error("separation check failed after enforcement: " + err);
  return out;
}

std::string check_separation(const DensityFamily& fam) {
  for (std::size_t p = 0; p < fam.sets.size(); ++p)
    for (std::size_t q = p + 1; q < fam.sets.size(); ++q) {
      IntSet common;
      std::set_intersection(fam.sets[p].begin(), fam.sets[p].end(), fam.sets[q].begin(), fam.sets[q].end(),
                            std::back_inserter(common));
      if (!common.empty())
        return "sets " + std::to_string(p + 1) + " and " + std::to_string(q + 1) + " share " + std::to_string(common[0]);
    }
  if (fam.a.empty()) return {};
  for (std::size_t p = 0; p < fam.sets.size(); ++p)
    if (!fam.sets[p].empty() && fam.sets[p].front() < fam.a[p])
      return "min A(" + std::to_string(p + 1) + ") below a(p)";
  auto all = merged(fam.sets);
  Index amax = *std::max_element(fam.a.begin(), fam.a.end());
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size() && all[j].n - all[i].n < 2 * amax; ++j) {
      Index need = fam.a[static_cast<std::size_t>(all[i].set)] + fam.a[static_cast<std::size_t>(all[j].set)];
      if (all[j].n - all[i].n < need)
        return "elements " + std::to_string(all[i].n) + " and " + std::to_string(all[j].n) + " closer than " +
               std::to_string(need);
    }
  return {};
}

std::string check_kappa(const DensityFamily& fam, Index C, Index kappa) {
  auto all = merged(fam.sets);
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size() && all[j].n - all[i].n < C; ++j)
      if (all[j].set != all[i].set && all[j].n >= kappa)
        return "pair (" + std::to_string(all[i].n) + "," + std::to_string(all[j].n) + ") violates C=" +
               std::to_string(C);
  return {};
}

MkSequence compute_Mk_prefix(const DensityFamily& fam, int count) {
  if (count < 1) throw Error("need count >= 1");
  MkSequence out;
  out.M.push_back(1);
  while (static_cast<int>(out.M.size()) < count) {
    Index Mk = out.M.back();
    Index kappa = scan_kappa(fam.sets, Mk);
    Index next = std::max(kappa, Mk + 1);
    if (out.M.size() >= 2) next = std::max(next, 2 * Mk - out.M[out.M.size() - 2]);
    // A scanned kappa is trusted only when the clean stretch above it is at
    // least as long as the stretch below it.
    if (kappa > fam.horizon / 2 || next > fam.horizon) {
      out.exhausted = true;
      break;
    }
    out.M.push_back(next);
  }
  return out;
}

std::vector<Index> compute_Mk(const DensityFamily& fam, int count) {
  auto pre = compute_Mk_prefix(fam, count);
  if (pre.exhausted)
    throw Inconclusive("horizon exhausted after M_" + std::to_string(pre.M.size()) + " = " +
                       std::to_string(pre.M.back()));
  return pre.M;
}

}  // namespace hcalg
