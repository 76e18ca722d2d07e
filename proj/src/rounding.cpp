#include "concentra/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "concentra/rng.hpp"

namespace concentra {

namespace {

void check_degree(const CoeffPoly& P, std::int64_t q, const char* who) {
  if (q < 2) throw DomainError(std::string(who) + ": q must be >= 2");
  if (P.degree() >= q) throw DomainError(std::string(who) + ": degree(P) must be < q");
}

// Coefficients truncated or padded to length q.
CVector padded(const CoeffPoly& P, std::int64_t q) {
  CVector c = CVector::Zero(q);
  const Eigen::Index n = std::min<Eigen::Index>(P.size(), q);
  c.head(n) = P.coeffs().head(n);
  return c;
}

CoeffPoly normalized(const CoeffPoly& P, std::int64_t q) {
  const double m = P.max_abs();
  if (m == 0.0) throw DomainError("rounding: P is the zero polynomial");
  CVector c = padded(P, q) / m;
  if (!P.nonneg()) return CoeffPoly(std::move(c), false);
  // Dividing by the max keeps nonnegativity; pin the top coefficient at 1.
  for (Eigen::Index h = 0; h < c.size(); ++h) c[h] = std::min(1.0, c[h].real());
  return CoeffPoly(std::move(c), true);
}

template <class F>
void parallel_for(int n, int workers, const F& body) {
  workers = std::max(1, std::min(workers, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int i = w; i < n; i += workers) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

double quantile(std::vector<double> v, double f) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const double pos = f * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

RoundingTrial measure(const GridValues& pv, double at_one, const Spectrum& Q, double p, double eps) {
  const std::int64_t q = pv.grid.q;
  const GridValues qv = eval_grid(Q, Grid(q));
  double dev = 0.0;
  for (std::int64_t k = 0; k < q; ++k) dev += std::pow(std::abs(qv.values[k] - pv.values[k]), p);
  RoundingTrial t;
  t.spectrum = Q;
  t.at_point_margin = std::abs(qv.values[1]) / at_one - (1.0 - eps);
  t.mean_dev = std::pow(dev, 1.0 / p) / at_one;
  t.success = t.at_point_margin >= 0.0 && t.mean_dev <= eps;
  return t;
}

}  // namespace

Hypotheses check_hypotheses(const CoeffPoly& P, std::int64_t q, double c, double p, double weakened_delta) {
  check_degree(P, q, "check_hypotheses");
  if (!(c > 0.0)) throw DomainError("check_hypotheses: c must be positive");
  if (!(p > 0.0)) throw DomainError("check_hypotheses: p must be positive");
  const CoeffPoly Pq(padded(P, q), false);
  const double max_a = Pq.max_abs();
  const double sum_a = Pq.abs_sum();
  const GridValues gv = eval_grid(Pq, Grid(q));
  const double at_one = std::abs(gv.values[1]);
  double lp = 0.0;
  for (std::int64_t k = 0; k < q; ++k) lp += std::pow(std::abs(gv.values[k]), p);
  lp = std::pow(lp, 1.0 / p);

  Hypotheses h;
  const double qd = static_cast<double>(q);
  h.cond_c = c * qd * max_a <= sum_a && c * sum_a <= at_one;
  h.concentr = at_one >= c * lp;
  h.c_cond_max = (max_a > 0.0 && sum_a > 0.0) ? std::min(sum_a / (qd * max_a), at_one / sum_a) : 0.0;
  h.c_concentr_max = lp > 0.0 ? at_one / lp : 0.0;
  if (weakened_delta > 0.0) h.weakened = sum_a >= weakened_delta * std::pow(qd, 2.0 / p) * max_a;
  return h;
}

Spectrum bernoulli_round(const CoeffPoly& P, std::uint64_t seed, std::uint64_t stream) {
  if (!P.nonneg()) throw DomainError("bernoulli_round: P must carry the nonneg flag");
  const std::int64_t n = P.size();
  const CoeffPoly alpha = normalized(P, n);
  auto rng = make_stream(seed, stream);
  std::vector<std::int64_t> keep;
  for (std::int64_t h = 0; h < n; ++h) {
    // One draw per coefficient keeps h <-> draw aligned across inputs.
    const double u = uniform01(rng);
    if (u < alpha.coeffs()[h].real()) keep.push_back(h);
  }
  return Spectrum(std::move(keep), n);
}

CoeffPoly bernoulli_round_unchecked(const CoeffPoly& P, std::uint64_t seed, std::uint64_t stream) {
  const std::int64_t n = P.size();
  const double m = P.max_abs();
  if (m == 0.0) throw DomainError("bernoulli_round_unchecked: P is the zero polynomial");
  auto rng = make_stream(seed, stream);
  CVector out = CVector::Zero(n);
  for (std::int64_t h = 0; h < n; ++h) {
    const double u = uniform01(rng);
    const double mod = std::abs(P.coeffs()[h]);
    if (mod > 0.0 && u < mod / m) out[h] = P.coeffs()[h] / mod;
  }
  return CoeffPoly(std::move(out), false);
}

RoundingTrial verify_trial(const CoeffPoly& P, const Spectrum& Q, std::int64_t q, double p, double eps) {
  check_degree(P, q, "verify_trial");
  if (Q.degree_bound() > q && Q.max_freq() >= q) throw DomainError("verify_trial: degree(Q) must be < q");
  const Spectrum Qq(Q.freqs(), q);
  const GridValues pv = eval_grid(normalized(P, q), Grid(q));
  const double at_one = std::abs(pv.values[1]);
  if (at_one == 0.0) throw DomainError("verify_trial: P(1/q) = 0");
  return measure(pv, at_one, Qq, p, eps);
}

MonteCarloReport monte_carlo(const CoeffPoly& P, std::int64_t q, double p, double eps, int trials,
                             std::uint64_t seed, int workers) {
  if (trials <= 0) throw DomainError("monte_carlo: trials must be positive");
  check_degree(P, q, "monte_carlo");
  const CoeffPoly Pn = normalized(P, q);
  if (!Pn.nonneg()) throw DomainError("monte_carlo: P must carry the nonneg flag");
  const GridValues pv = eval_grid(Pn, Grid(q));
  const double at_one = std::abs(pv.values[1]);
  if (at_one == 0.0) throw DomainError("monte_carlo: P(1/q) = 0");

  std::vector<RoundingTrial> results(static_cast<std::size_t>(trials));
  parallel_for(trials, workers, [&](int i) {
    results[static_cast<std::size_t>(i)] =
        measure(pv, at_one, bernoulli_round(Pn, seed, static_cast<std::uint64_t>(i)), p, eps);
  });

  MonteCarloReport r;
  r.q = q;
  r.p = p;
  r.epsilon = eps;
  r.trials = trials;
  r.seed = seed;
  std::vector<double> devs;
  double margin_sum = 0.0;
  for (const auto& t : results) {
    r.successes += t.success ? 1 : 0;
    margin_sum += t.at_point_margin;
    devs.push_back(t.mean_dev);
  }
  r.frequency = static_cast<double>(r.successes) / trials;
  r.mean_at_point_margin = margin_sum / trials;
  r.mean_dev_quantiles = {quantile(devs, 0.1), quantile(devs, 0.5), quantile(devs, 0.9)};
  return r;
}

MomentReport moment_check(const std::vector<Complex>& b, const std::vector<double>& alpha, double p,
                          int trials, std::uint64_t seed, int workers) {
  if (b.size() != alpha.size()) throw DomainError("moment_check: b and alpha lengths differ");
  if (!(p > 2.0)) throw DomainError("moment_check: p must exceed 2");
  if (trials <= 0) throw DomainError("moment_check: trials must be positive");
  for (double a : alpha) {
    if (!(a >= 0.0 && a <= 1.0)) throw DomainError("moment_check: alpha_k must lie in [0, 1]");
  }
  std::vector<double> moments(static_cast<std::size_t>(trials));
  parallel_for(trials, workers, [&](int i) {
    auto rng = make_stream(seed, static_cast<std::uint64_t>(i));
    Complex s{};
    for (std::size_t k = 0; k < b.size(); ++k) {
      const double x = uniform01(rng) < alpha[k] ? 1.0 : 0.0;
      s += b[k] * (x - alpha[k]);
    }
    moments[static_cast<std::size_t>(i)] = std::pow(std::abs(s), p);
  });

  MomentReport r;
  r.p = p;
  r.trials = trials;
  double sigma = 0.0, bmax = 0.0;
  for (std::size_t k = 0; k < b.size(); ++k) {
    sigma += alpha[k];
    bmax = std::max(bmax, std::abs(b[k]));
  }
  r.sigma = sigma;
  double total = 0.0;
  for (double m : moments) total += m;
  r.empirical_moment = total / trials;
  r.normalizer = std::pow(bmax, p) * std::pow(1.0 + sigma, p / 2.0);
  r.ratio = r.normalizer > 0.0 ? r.empirical_moment / r.normalizer : 0.0;
  return r;
}

}  // namespace concentra
