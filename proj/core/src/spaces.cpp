#include "hcalg/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hcalg/error.hpp"

namespace hcalg {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLn2 = XComplex::kLn2;
}  // namespace

double Gamma::log_at(Index n) const {
  switch (form) {
    case Form::Explicit:
      if (n < 0 || n >= static_cast<Index>(values.size()))
        throw Error("explicit gamma has no value at index " + std::to_string(n));
      return std::log(values[static_cast<std::size_t>(n)]);
    case Form::CounterexampleOdd:
      if (n < 0) throw Error("counterexample_odd gamma is unilateral");
      return (n % 2 == 1) ? static_cast<double>((n - 1) / 2) * kLn2 : 0.0;
    case Form::AbsPlusOne:
      return std::log1p(static_cast<double>(n < 0 ? -n : n));
    case Form::Pow2:
      return static_cast<double>(n < 0 ? -n : n) * kLn2;
  }
  return 0.0;
}

std::string Gamma::name() const {
  switch (form) {
    case Form::Explicit: return "explicit";
    case Form::CounterexampleOdd: return "counterexample_odd";
    case Form::AbsPlusOne: return "abs_plus_one";
    case Form::Pow2: return "pow2";
  }
  return "?";
}

SpaceSpec SpaceSpec::lp(double p, bool bilateral) {
  SpaceSpec s;
  s.kind = SpaceKind::Lp;
  s.p = p;
  s.bilateral = bilateral;
  s.validate();
  return s;
}

SpaceSpec SpaceSpec::c0(bool bilateral) {
  SpaceSpec s;
  s.kind = SpaceKind::C0;
  s.bilateral = bilateral;
  return s;
}

SpaceSpec SpaceSpec::omega(int Q) {
  SpaceSpec s;
  s.kind = SpaceKind::Omega;
  s.Q = Q;
  s.validate();
  return s;
}

SpaceSpec SpaceSpec::entire(int Q) {
  SpaceSpec s;
  s.kind = SpaceKind::Entire;
  s.Q = Q;
  s.validate();
  return s;
}

SpaceSpec SpaceSpec::weighted_c0(Gamma g, bool bilateral) {
  SpaceSpec s;
  s.kind = SpaceKind::WeightedC0;
  s.gamma = std::move(g);
  s.bilateral = bilateral;
  s.validate();
  return s;
}

void SpaceSpec::validate() const {
  if (Q < 1) throw Error("seminorm count Q must be >= 1");
  if (kind == SpaceKind::Lp && !(p >= 1.0)) throw Error("Lp requires p >= 1");
  if ((kind == SpaceKind::Omega || kind == SpaceKind::Entire) && bilateral)
    throw Error(kind_name() + " has no bilateral variant");
  if (kind == SpaceKind::WeightedC0 && gamma.form == Gamma::Form::Explicit) {
    if (gamma.values.empty()) throw Error("explicit gamma is empty");
    for (double g : gamma.values)
      if (!(g >= 1.0)) throw Error("weighted c0 requires gamma_n >= 1");
  }
  if (kind == SpaceKind::WeightedC0 && bilateral &&
      (gamma.form == Gamma::Form::Explicit || gamma.form == Gamma::Form::CounterexampleOdd))
    throw Error("gamma form " + gamma.name() + " is unilateral");
}

bool SpaceSpec::additive() const {
  return kind == SpaceKind::Omega || kind == SpaceKind::Entire || (kind == SpaceKind::Lp && p == 1.0);
}

std::string SpaceSpec::kind_name() const {
  switch (kind) {
    case SpaceKind::Lp: return "lp";
    case SpaceKind::C0: return "c0";
    case SpaceKind::Omega: return "omega";
    case SpaceKind::Entire: return "entire";
    case SpaceKind::WeightedC0: return "weighted_c0";
  }
  return "?";
}

double SpaceSpec::log_basis_norm(Index n, int q) const {
  switch (kind) {
    case SpaceKind::Lp:
    case SpaceKind::C0:
      return 0.0;
    case SpaceKind::Omega:
      return n <= q ? 0.0 : kNegInf;
    case SpaceKind::Entire:
      return static_cast<double>(n) * std::log(static_cast<double>(q));
    case SpaceKind::WeightedC0:
      return gamma.log_at(n);
  }
  return 0.0;
}

double SpaceSpec::basis_norm(Index n, int q) const { return std::exp(log_basis_norm(n, q)); }

double combine_log_terms(std::vector<double>& logs, const SpaceSpec& spec) {
  logs.erase(std::remove(logs.begin(), logs.end(), kNegInf), logs.end());
  if (logs.empty()) return kNegInf;
  if (spec.kind == SpaceKind::C0 || spec.kind == SpaceKind::WeightedC0)
    return *std::max_element(logs.begin(), logs.end());
  double power = spec.kind == SpaceKind::Lp ? spec.p : 1.0;
  for (double& t : logs) t *= power;
  std::sort(logs.begin(), logs.end());
  double top = logs.back();
  if (std::isinf(top)) return top;
  double s = 0.0;
  for (double t : logs) s += std::exp(t - top);
  return (top + std::log(s)) / power;
}

namespace {

void check_compatible(const TruncatedSeq& x, const SpaceSpec& spec) {
  if (x.bilateral() && !spec.bilateral) throw Error("bilateral vector on a unilateral space");
}

double raw_log_seminorm(const TruncatedSeq& x, const SpaceSpec& spec, int q) {
  std::vector<double> logs;
  logs.reserve(x.support_size());
  for (const auto& [n, v] : x.coeffs()) logs.push_back(v.log_abs() + spec.log_basis_norm(n, q));
  return combine_log_terms(logs, spec);
}

}  // namespace

double log_seminorm(const TruncatedSeq& x, const SpaceSpec& spec, int q) {
  check_compatible(x, spec);
  if (q < 1) throw Error("seminorm index must be >= 1");
  if (!spec.single_norm() && q > spec.Q)
    throw Error("seminorm index " + std::to_string(q) + " exceeds Q=" + std::to_string(spec.Q));
  return raw_log_seminorm(x, spec, q);
}

double seminorm(const TruncatedSeq& x, const SpaceSpec& spec, int q) { return std::exp(log_seminorm(x, spec, q)); }

FNorm f_norm(const TruncatedSeq& x, const SpaceSpec& spec, int p_max) {
  check_compatible(x, spec);
  FNorm out;
  double last = 0.0;
  for (int p = 1; p <= p_max; ++p) {
    last = std::min(1.0, std::exp(raw_log_seminorm(x, spec, p)) + x.tail_bound());
    out.value += std::ldexp(last, -p);
  }
  // Seminorms of single-norm spaces are constant in p, and Omega seminorms are
  // constant once p passes the support; otherwise fall back to min(1,.) <= 1.
  bool constant_beyond = spec.single_norm() ||
                         (spec.kind == SpaceKind::Omega && (x.empty() || x.max_index() <= p_max));
  bool zero = x.empty() && x.tail_bound() == 0.0;
  out.remainder = zero ? 0.0 : std::ldexp(constant_beyond ? last : 1.0, -p_max);
  return out;
}

bool in_ball(const TruncatedSeq& x, const TruncatedSeq& center, double radius, const SpaceSpec& spec, int q) {
  if (!(radius > 0.0)) throw Error("ball radius must be positive");
  if (x.bilateral() != center.bilateral() || x.horizon() != center.horizon())
    throw Error("incompatible horizons in ball test");
  double d = seminorm(x - center, spec, q);
  return d + x.tail_bound() + center.tail_bound() < radius;
}

}  // namespace hcalg
