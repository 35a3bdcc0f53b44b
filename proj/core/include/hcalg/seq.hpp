#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <vector>

#include "hcalg/xcomplex.hpp"

namespace hcalg {

using Index = std::int64_t;

// Finitely supported sequence on [0,L] (or [-L,L] when bilateral).
// Zero coefficients are never stored. tail_bound bounds, in the norm of the
// space the vector was built for, whatever was discarded beyond the horizon.
class TruncatedSeq {
 public:
  using Map = std::map<Index, XComplex>;

  TruncatedSeq() = default;
  explicit TruncatedSeq(Index horizon, bool bilateral = false);

  static TruncatedSeq basis(Index n, Index horizon, bool bilateral = false);
  static TruncatedSeq from_values(const std::vector<cplx>& vals, Index horizon);

  Index horizon() const { return horizon_; }
  bool bilateral() const { return bilateral_; }
  Index lower() const { return bilateral_ ? -horizon_ : 0; }
  bool in_range(Index n) const { return n >= lower() && n <= horizon_; }

  // Stored as a logarithm so that bounds like 2^-10000 survive being pushed
  // through long shifts.
  double tail_bound() const { return std::exp(log_tail_); }
  double log_tail_bound() const { return log_tail_; }
  void set_tail_bound(double t);
  void set_log_tail_bound(double lt);

  XComplex at(Index n) const;
  void set(Index n, const XComplex& v);
  void add(Index n, const XComplex& v);

  const Map& coeffs() const { return c_; }
  bool empty() const { return c_.empty(); }
  std::size_t support_size() const { return c_.size(); }
  Index min_index() const;
  Index max_index() const;

  // Same horizon and bilaterality; the result keeps the larger horizon.
  TruncatedSeq& operator+=(const TruncatedSeq& o);
  TruncatedSeq& operator-=(const TruncatedSeq& o);
  TruncatedSeq scaled(const XComplex& s) const;
  TruncatedSeq with_horizon(Index horizon) const;

  friend TruncatedSeq operator+(TruncatedSeq a, const TruncatedSeq& b) { return a += b; }
  friend TruncatedSeq operator-(TruncatedSeq a, const TruncatedSeq& b) { return a -= b; }

  std::vector<cplx> dense() const;  // indices lower()..max_index()

 private:
  Map c_;
  Index horizon_ = 0;
  bool bilateral_ = false;
  double log_tail_ = -std::numeric_limits<double>::infinity();
};

}  // namespace hcalg
