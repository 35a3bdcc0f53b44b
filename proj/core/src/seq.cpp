#include "hcalg/seq.hpp"

#include <algorithm>
#include <string>

#include "hcalg/error.hpp"

namespace hcalg {

TruncatedSeq::TruncatedSeq(Index horizon, bool bilateral) : horizon_(horizon), bilateral_(bilateral) {
  if (horizon < 0) throw Error("horizon must be nonnegative");
}

TruncatedSeq TruncatedSeq::basis(Index n, Index horizon, bool bilateral) {
  TruncatedSeq s(horizon, bilateral);
  s.set(n, XComplex(1.0));
  return s;
}

TruncatedSeq TruncatedSeq::from_values(const std::vector<cplx>& vals, Index horizon) {
  TruncatedSeq s(horizon);
  for (std::size_t i = 0; i < vals.size(); ++i) s.set(static_cast<Index>(i), XComplex(vals[i]));
  return s;
}

namespace {

double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a + std::log1p(std::exp(b - a));
}

}  // namespace

void TruncatedSeq::set_tail_bound(double t) {
  if (!(t >= 0.0)) throw Error("tail bound must be nonnegative");
  log_tail_ = std::log(t);
}

void TruncatedSeq::set_log_tail_bound(double lt) {
  if (std::isnan(lt) || lt == std::numeric_limits<double>::infinity()) throw Error("invalid log tail bound");
  log_tail_ = lt;
}

XComplex TruncatedSeq::at(Index n) const {
  auto it = c_.find(n);
  return it == c_.end() ? XComplex() : it->second;
}

void TruncatedSeq::set(Index n, const XComplex& v) {
  if (!in_range(n)) throw Error("index " + std::to_string(n) + " outside horizon " + std::to_string(horizon_));
  if (!v.is_finite()) throw Error("non-finite coefficient at index " + std::to_string(n));
  if (v.is_zero())
    c_.erase(n);
  else
    c_[n] = v;
}

void TruncatedSeq::add(Index n, const XComplex& v) {
  if (v.is_zero()) return;
  set(n, at(n) + v);
}

Index TruncatedSeq::min_index() const {
  if (c_.empty()) throw Error("empty support");
  return c_.begin()->first;
}

Index TruncatedSeq::max_index() const {
  if (c_.empty()) throw Error("empty support");
  return c_.rbegin()->first;
}

TruncatedSeq& TruncatedSeq::operator+=(const TruncatedSeq& o) {
  if (o.bilateral_ != bilateral_) throw Error("mixing bilateral and unilateral sequences");
  horizon_ = std::max(horizon_, o.horizon_);
  for (const auto& [n, v] : o.c_) add(n, v);
  log_tail_ = log_add(log_tail_, o.log_tail_);
  return *this;
}

TruncatedSeq& TruncatedSeq::operator-=(const TruncatedSeq& o) {
  if (o.bilateral_ != bilateral_) throw Error("mixing bilateral and unilateral sequences");
  horizon_ = std::max(horizon_, o.horizon_);
  for (const auto& [n, v] : o.c_) add(n, -v);
  log_tail_ = log_add(log_tail_, o.log_tail_);
  return *this;
}

TruncatedSeq TruncatedSeq::scaled(const XComplex& s) const {
  TruncatedSeq r(horizon_, bilateral_);
  for (const auto& [n, v] : c_) r.set(n, v * s);
  r.log_tail_ = s.is_zero() ? -std::numeric_limits<double>::infinity() : log_tail_ + s.log_abs();
  return r;
}

TruncatedSeq TruncatedSeq::with_horizon(Index horizon) const {
  TruncatedSeq r(horizon, bilateral_);
  for (const auto& [n, v] : c_) r.set(n, v);
  r.log_tail_ = log_tail_;
  return r;
}

std::vector<cplx> TruncatedSeq::dense() const {
  if (c_.empty()) return {};
  std::vector<cplx> out(static_cast<std::size_t>(max_index() - lower() + 1));
  for (const auto& [n, v] : c_) out[static_cast<std::size_t>(n - lower())] = v.value();
  return out;
}

}  // namespace hcalg
