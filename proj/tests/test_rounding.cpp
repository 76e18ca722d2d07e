#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "concentra/rounding.hpp"

using namespace concentra;

namespace {

CoeffPoly ramp(int n) {
  std::vector<double> c(n);
  for (int h = 0; h < n; ++h) c[h] = double(h + 1) / n;
  return CoeffPoly::real(c);
}

}  // namespace

TEST_CASE("rounding is unbiased per coefficient") {
  const CoeffPoly P = ramp(8);
  const int trials = 20000;
  std::vector<int> hits(8, 0);
  for (int i = 0; i < trials; ++i) {
    const Spectrum s = bernoulli_round(P, 5, i);
    for (auto h : s.freqs()) ++hits[h];
  }
  for (int h = 0; h < 8; ++h) {
    const double a = (h + 1) / 8.0;
    const double sd = std::sqrt(a * (1 - a) / trials);
    CHECK(std::abs(hits[h] / double(trials) - a) <= 5 * sd + 1e-12);
  }
  CHECK(hits[7] == trials);
}

TEST_CASE("rounding is seeded by (seed, stream)") {
  const CoeffPoly P = to_coeffs(Spectrum::interval(40, 40));
  CVector half = CVector::Constant(64, 0.5);
  half[0] = 1.0;
  const CoeffPoly H(half, true);
  CHECK(bernoulli_round(H, 1, 3) == bernoulli_round(H, 1, 3));
  CHECK(bernoulli_round(H, 1, 3) != bernoulli_round(H, 1, 4));
  CHECK(bernoulli_round(H, 2, 3) != bernoulli_round(H, 1, 3));
  // Coefficients equal to the maximum are always kept.
  CHECK(bernoulli_round(P, 9).size() == 40);
  CHECK_THROWS_AS(bernoulli_round(CoeffPoly(half, false), 1), DomainError);
  // The unchecked variant keeps unit-modulus copies of the kept phases.
  CVector z(3);
  z << Complex(0, 2), Complex(-1, 0), 0.0;
  const CoeffPoly U = bernoulli_round_unchecked(CoeffPoly(z), 4);
  CHECK(U.coeffs()[0] == Complex(0, 1));
  CHECK(U.coeffs()[2] == Complex(0, 0));
}

TEST_CASE("hypotheses for a Dirichlet kernel") {
  const std::int64_t q = 101, n = 25;
  const CoeffPoly P = to_coeffs(Spectrum::interval(n, q));
  const double at_one = std::abs(dirichlet_value(n, 1.0 / q));
  const double c_cond = std::min(double(n) / q, at_one / n);
  const Hypotheses h = check_hypotheses(P, q, 0.1, 3.0);
  CHECK(h.c_cond_max == doctest::Approx(c_cond).epsilon(1e-12));
  CHECK(h.cond_c == (0.1 <= c_cond));
  CHECK(check_hypotheses(P, q, c_cond * 1.01, 3.0).cond_c == false);
  CHECK(check_hypotheses(P, q, h.c_concentr_max * 0.99, 3.0).concentr);
  CHECK_FALSE(check_hypotheses(P, q, h.c_concentr_max * 1.01, 3.0).concentr);
  CHECK_FALSE(h.weakened);
  CHECK(check_hypotheses(P, q, 0.1, 3.0, 1e-3).weakened);
  CHECK_THROWS_AS(check_hypotheses(P, 20, 0.1, 3.0), DomainError);
}

TEST_CASE("verifying an already idempotent P") {
  const std::int64_t q = 61;
  const Spectrum S = Spectrum::interval(15, q);
  const RoundingTrial t = verify_trial(to_coeffs(S), S, q, 3.0, 0.2);
  CHECK(t.mean_dev == doctest::Approx(0.0));
  CHECK(t.at_point_margin == doctest::Approx(0.2));
  CHECK(t.success);
  // Rounding a 0/1 polynomial reproduces it.
  CHECK(bernoulli_round(to_coeffs(S), 77) == S);
}

TEST_CASE("monte carlo is independent of workers") {
  const std::int64_t q = 97;
  const CoeffPoly P = fold_power(to_coeffs(Spectrum::interval(24, q)), 2, q);
  const auto a = monte_carlo(P, q, 3.0, 0.3, 30, 8, 1);
  const auto b = monte_carlo(P, q, 3.0, 0.3, 30, 8, 3);
  CHECK(a.successes == b.successes);
  CHECK(a.mean_at_point_margin == b.mean_at_point_margin);
  CHECK(a.mean_dev_quantiles == b.mean_dev_quantiles);
  CHECK(a.mean_dev_quantiles.size() == 3);
  CHECK(a.mean_dev_quantiles[0] <= a.mean_dev_quantiles[1]);
  CHECK(a.mean_dev_quantiles[1] <= a.mean_dev_quantiles[2]);
  CHECK(a.frequency == doctest::Approx(a.successes / 30.0));
  CHECK_THROWS_AS(monte_carlo(P, q, 3.0, 0.3, 0, 8), DomainError);
}

TEST_CASE("moment check against the binomial fourth moment") {
  const int n = 200;
  std::vector<Complex> b(n, Complex(1.0, 0.0));
  std::vector<double> alpha(n, 0.5);
  const MomentReport r = moment_check(b, alpha, 4.0, 40000, 3, 2);
  // Central fourth moment of Binomial(n, 1/2).
  const double mu4 = n / 4.0 * (1.0 + 3.0 * (n - 2) / 4.0);
  CHECK(r.empirical_moment == doctest::Approx(mu4).epsilon(0.05));
  CHECK(r.sigma == doctest::Approx(100.0));
  CHECK(r.normalizer == doctest::Approx(std::pow(101.0, 2.0)));
  CHECK_THROWS_AS(moment_check(b, alpha, 2.0, 10, 1), DomainError);
  CHECK_THROWS_AS(moment_check(b, std::vector<double>(n, 1.5), 3.0, 10, 1), DomainError);
}
