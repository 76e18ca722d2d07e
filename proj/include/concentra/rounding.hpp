// Bernoulli rounding of a positive-definite polynomial into an idempotent,
// the checks around it, and an empirical probe of the moment inequality for
// centred Bernoulli sums.
//
// P is always rescaled internally to max |a_h| = 1 before rounding and
// before any margin is measured.

#ifndef CONCENTRA_ROUNDING_HPP
#define CONCENTRA_ROUNDING_HPP

#include <cstdint>
#include <vector>

#include "concentra/trigpoly.hpp"

namespace concentra {

struct Hypotheses {
  /// c q max|a_h| <= sum|a_h| <= |P(1/q)| / c
  bool cond_c = false;
  /// |P(1/q)| >= c (sum_k |P(k/q)|^p)^(1/p)
  bool concentr = false;
  /// Largest c for which each condition holds.
  double c_cond_max = 0.0;
  double c_concentr_max = 0.0;
  /// Experimental relaxed form sum|a_h| >= delta q^(2/p) max|a_h|; only
  /// evaluated when delta > 0.
  bool weakened = false;
};

Hypotheses check_hypotheses(const CoeffPoly& P, std::int64_t q, double c, double p,
                            double weakened_delta = 0.0);

/// Keeps h with probability a_h / max a over a stream keyed by (seed, stream).
/// Requires the nonneg flag, so the result is an idempotent.
Spectrum bernoulli_round(const CoeffPoly& P, std::uint64_t seed, std::uint64_t stream = 0);

/// Same draw for arbitrary complex P: keeps a_h / |a_h| with probability
/// |a_h| / max|a|.  The output is not an idempotent.
CoeffPoly bernoulli_round_unchecked(const CoeffPoly& P, std::uint64_t seed, std::uint64_t stream = 0);

struct RoundingTrial {
  Spectrum spectrum;
  /// |Q(1/q)| / |P(1/q)| - (1 - eps)
  double at_point_margin = 0.0;
  /// (sum_k |Q - P|^p (k/q))^(1/p) / |P(1/q)|
  double mean_dev = 0.0;
  bool success = false;
};

RoundingTrial verify_trial(const CoeffPoly& P, const Spectrum& Q, std::int64_t q, double p, double eps);

struct MonteCarloReport {
  std::int64_t q = 0;
  double p = 0.0;
  double epsilon = 0.0;
  int trials = 0;
  std::uint64_t seed = 0;
  int successes = 0;
  double frequency = 0.0;
  double mean_at_point_margin = 0.0;
  /// mean_dev at the 10%, 50% and 90% quantiles.
  std::vector<double> mean_dev_quantiles;
};

/// Trial i rounds with stream i, so the outcome does not depend on workers.
MonteCarloReport monte_carlo(const CoeffPoly& P, std::int64_t q, double p, double eps, int trials,
                             std::uint64_t seed, int workers = 1);

struct MomentReport {
  double p = 0.0;
  double sigma = 0.0;
  double empirical_moment = 0.0;
  double normalizer = 0.0;
  double ratio = 0.0;
  int trials = 0;
};

/// E|sum b_k (X_k - alpha_k)|^p over `trials` draws, divided by
/// max|b_k|^p (1 + sum alpha_k)^(p/2).
MomentReport moment_check(const std::vector<Complex>& b, const std::vector<double>& alpha, double p,
                          int trials, std::uint64_t seed, int workers = 1);

}  // namespace concentra

#endif  // CONCENTRA_ROUNDING_HPP
