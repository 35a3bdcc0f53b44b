#include "hcalg/targets.hpp"

#include "hcalg/error.hpp"
#include "hcalg/rng.hpp"

namespace hcalg {

namespace {

std::uint64_t mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  // splitmix64 finalizer over a simple combination
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (a + 1) + 0xbf58476d1ce4e5b9ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

cplx seeded_rational(std::uint64_t seed, std::uint64_t level, std::uint64_t slot) {
  Rng rng(mix(seed, level, slot));
  auto den = static_cast<std::int64_t>(level + 1);
  auto span = static_cast<std::int64_t>((1.0 + static_cast<double>(level) / 8.0) * static_cast<double>(den));
  auto a = rng.integer(-span, span);
  auto b = rng.integer(-span, span);
  return {static_cast<double>(a) / static_cast<double>(den), static_cast<double>(b) / static_cast<double>(den)};
}

std::pair<std::uint64_t, int> diagonal_pair(std::uint64_t index) {
  std::uint64_t s = 0;
  while (index > s) {
    index -= s + 1;
    ++s;
  }
  // diagonal s holds (s,1), (s-1,2), ..., (0,s+1)
  return {s - index, static_cast<int>(index) + 1};
}

std::vector<Target> dense_targets(int count, Index horizon, std::uint64_t seed) {
  if (count < 0) throw Error("target count must be >= 0");
  std::vector<Target> out;
  for (int p = 1; p <= count; ++p) {
    if (p > horizon) throw Error("target support exceeds the horizon");
    auto [i, m] = diagonal_pair(static_cast<std::uint64_t>(p - 1));
    Target t;
    t.p = p;
    t.m = m;
    t.v = TruncatedSeq(horizon);
    for (Index l = 0; l <= p; ++l) t.v.set(l, XComplex(seeded_rational(seed, i, static_cast<std::uint64_t>(l))));
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<std::vector<cplx>> dense_complex_vectors(int count, int dim, int nonzero, std::uint64_t seed) {
  std::vector<std::vector<cplx>> out;
  for (int k = 0; k < count; ++k) {
    std::vector<cplx> v;
    for (int j = 0; j < dim; ++j) {
      cplx z = seeded_rational(seed, static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(j));
      for (std::uint64_t retry = 1; j < nonzero && z == cplx(0.0); ++retry)
        z = seeded_rational(seed + retry, static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(j));
      v.push_back(z);
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace hcalg
