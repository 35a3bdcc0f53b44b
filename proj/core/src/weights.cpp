#include "hcalg/weights.hpp"

#include <cmath>

#include "hcalg/error.hpp"

namespace hcalg {

namespace {

constexpr double kLn2 = XComplex::kLn2;

// Neumaier-compensated running sums: prefix[i] = sum_{j<i} v[j].
std::vector<double> prefix_sums(const std::vector<double>& v) {
  std::vector<double> out(v.size() + 1, 0.0);
  double s = 0.0, comp = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    double t = s + v[i];
    if (std::abs(s) >= std::abs(v[i]))
      comp += (s - t) + v[i];
    else
      comp += (v[i] - t) + s;
    s = t;
    out[i + 1] = s + comp;
  }
  return out;
}

}  // namespace

std::string weight_name(WeightKind k) {
  switch (k) {
    case WeightKind::Rolewicz: return "rolewicz";
    case WeightKind::OnePlusLambdaOverN: return "one_plus_lambda_over_n";
    case WeightKind::ExpNAlpha: return "exp_n_alpha";
    case WeightKind::CounterexampleOdd: return "counterexample_odd";
    case WeightKind::MkWeight: return "mk_weight";
    case WeightKind::BilateralInverseExample: return "bilateral_inverse_example";
    case WeightKind::Derivative: return "derivative";
    case WeightKind::Explicit: return "explicit";
  }
  return "?";
}

WeightKind parse_weight_kind(const std::string& s) {
  for (auto k : {WeightKind::Rolewicz, WeightKind::OnePlusLambdaOverN, WeightKind::ExpNAlpha,
                 WeightKind::CounterexampleOdd, WeightKind::MkWeight, WeightKind::BilateralInverseExample,
                 WeightKind::Derivative, WeightKind::Explicit})
    if (weight_name(k) == s) return k;
  throw Error("unknown weight kind '" + s + "'");
}

void WeightSeq::build(const std::vector<double>& log_w_pos, const std::vector<double>& log_w_neg) {
  // log_w_pos[i] = log w_{i+1}; log_w_neg[i] = log w_{-i} (i = 0 is w_0).
  pos_ = prefix_sums(log_w_pos);
  if (bilateral_) {
    auto s = prefix_sums(log_w_neg);
    neg_.resize(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) neg_[i] = -s[i];
  }
}

WeightSeq WeightSeq::rolewicz(double lambda, Index horizon) {
  if (!(lambda > 1.0)) throw Error("Rolewicz weight needs lambda > 1");
  WeightSeq w(WeightKind::Rolewicz, horizon, false);
  w.param_ = lambda;
  w.pos_.resize(static_cast<std::size_t>(horizon) + 1);
  for (Index n = 0; n <= horizon; ++n) w.pos_[static_cast<std::size_t>(n)] = static_cast<double>(n) * std::log(lambda);
  return w;
}

WeightSeq WeightSeq::one_plus_lambda_over_n(double lambda, Index horizon) {
  if (!(lambda > 0.0)) throw Error("1+lambda/n weight needs lambda > 0");
  WeightSeq w(WeightKind::OnePlusLambdaOverN, horizon, false);
  w.param_ = lambda;
  std::vector<double> lw;
  for (Index n = 1; n <= horizon; ++n) lw.push_back(std::log1p(lambda / static_cast<double>(n)));
  w.build(lw, {});
  return w;
}

WeightSeq WeightSeq::exp_n_alpha(double alpha, Index horizon) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error("exp(n^alpha) weight needs alpha in (0,1)");
  WeightSeq w(WeightKind::ExpNAlpha, horizon, false);
  w.param_ = alpha;
  w.pos_.resize(static_cast<std::size_t>(horizon) + 1);
  for (Index n = 1; n <= horizon; ++n) w.pos_[static_cast<std::size_t>(n)] = std::pow(static_cast<double>(n), alpha);
  return w;
}

WeightSeq WeightSeq::counterexample_odd(Index horizon) {
  WeightSeq w(WeightKind::CounterexampleOdd, horizon, false);
  w.pos_.resize(static_cast<std::size_t>(horizon) + 1);
  for (Index n = 1; n <= horizon; ++n) {
    Index h = n / 2;
    w.pos_[static_cast<std::size_t>(n)] =
        (n % 2 == 0) ? static_cast<double>(h - 1) * kLn2 : static_cast<double>(2 * h) * kLn2;
  }
  return w;
}

WeightSeq WeightSeq::mk_weight(std::vector<Index> M, Index horizon) {
  if (M.size() < 2 || M[0] != 1) throw Error("M_k weight needs M_1 = 1 and at least M_2");
  for (std::size_t k = 1; k < M.size(); ++k) {
    if (M[k] <= M[k - 1]) throw Error("M_k must be strictly increasing");
    if (k >= 2 && M[k] - M[k - 1] < M[k - 1] - M[k - 2]) throw Error("M_{k+1} - M_k must be non-decreasing");
  }
  if (horizon > M.back())
    throw Error("M_k weight is defined only up to the last M_k (" + std::to_string(M.back()) + ")");
  WeightSeq w(WeightKind::MkWeight, horizon, false);
  w.M_ = M;
  w.pos_.resize(static_cast<std::size_t>(horizon) + 1);
  // Work with the exact block values LW(M_k) = LW(M_2) (1 + 1/k) ... so the
  // block identity holds to rounding.
  std::vector<double> at_M(M.size() + 1, 0.0);  // at_M[k] = LW(M_k), 1-based
  at_M[1] = kLn2;
  at_M[2] = static_cast<double>(M[1]) * kLn2;
  for (std::size_t k = 2; k + 1 <= M.size(); ++k) at_M[k + 1] = at_M[k] * (1.0 + 1.0 / static_cast<double>(k));
  std::size_t k = 2;
  for (Index n = 1; n <= horizon; ++n) {
    if (n <= M[1]) {
      w.pos_[static_cast<std::size_t>(n)] = static_cast<double>(n) * kLn2;
      continue;
    }
    while (n > M[k]) ++k;  // n in (M_k, M_{k+1}] with 1-based k, i.e. (M[k-1], M[k]]
    double lo = at_M[k];
    Index gap = M[k] - M[k - 1];
    double slope = lo / (static_cast<double>(k) * static_cast<double>(gap));
    w.pos_[static_cast<std::size_t>(n)] =
        (n == M[k]) ? at_M[k + 1] : lo + static_cast<double>(n - M[k - 1]) * slope;
  }
  return w;
}

WeightSeq WeightSeq::bilateral_inverse_example(Index horizon) {
  WeightSeq w(WeightKind::BilateralInverseExample, horizon, true);
  std::vector<double> pos(static_cast<std::size_t>(horizon), std::log(2.0));
  std::vector<double> neg;
  neg.push_back(0.0);  // w_0 = 1
  for (Index n = 1; n < horizon; ++n) {
    double r = static_cast<double>(n) / static_cast<double>(n + 1);
    neg.push_back(2.0 * std::log(r));
  }
  w.build(pos, neg);
  return w;
}

WeightSeq WeightSeq::derivative(Index horizon) {
  WeightSeq w(WeightKind::Derivative, horizon, false);
  w.pos_.resize(static_cast<std::size_t>(horizon) + 1);
  for (Index n = 1; n <= horizon; ++n) w.pos_[static_cast<std::size_t>(n)] = std::lgamma(static_cast<double>(n) + 1.0);
  return w;
}

WeightSeq WeightSeq::explicit_list(std::vector<double> vals, bool bilateral) {
  for (double v : vals)
    if (!(v > 0.0) || !std::isfinite(v)) throw Error("weights must be positive and finite");
  Index horizon = 0;
  std::vector<double> pos, neg;
  if (!bilateral) {
    if (vals.empty()) throw Error("empty weight list");
    horizon = static_cast<Index>(vals.size());
    for (double v : vals) pos.push_back(std::log(v));
  } else {
    if (vals.size() % 2 == 0) throw Error("bilateral weight list needs odd length (w_{-K}..w_K)");
    Index K = static_cast<Index>(vals.size() / 2);
    horizon = K;
    for (Index n = 1; n <= K; ++n) pos.push_back(std::log(vals[static_cast<std::size_t>(K + n)]));
    for (Index n = 0; n < K; ++n) neg.push_back(std::log(vals[static_cast<std::size_t>(K - n)]));
  }
  WeightSeq w(WeightKind::Explicit, horizon, bilateral);
  w.explicit_ = std::move(vals);
  w.build(pos, neg);
  return w;
}

double WeightSeq::logW(Index n) const {
  if (n >= 0) {
    if (n > horizon_) throw Inconclusive("weight index " + std::to_string(n) + " beyond materialized horizon " +
                                         std::to_string(horizon_));
    return pos_[static_cast<std::size_t>(n)];
  }
  if (!bilateral_) throw Error("negative weight index on a unilateral weight");
  if (-n >= static_cast<Index>(neg_.size()))
    throw Inconclusive("weight index " + std::to_string(n) + " beyond materialized horizon");
  return neg_[static_cast<std::size_t>(-n)];
}

}  // namespace hcalg
