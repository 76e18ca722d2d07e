#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "concentra/bounds.hpp"
#include "concentra/trigpoly.hpp"

using namespace concentra;

namespace {

constexpr long double kPiL = 3.141592653589793238462643383279502884L;

// Direct long double summation with a crude integral remainder; only valid
// where the remainder is tiny, which the callers make sure of.
long double brute_B(double lambda, double t, long N) {
  const long double x = kPiL * t;
  long double s = 0.0L;
  for (long k = N; k >= 1; --k) s += std::pow(std::fabs(std::sin(k * x) / (k * x)), (long double)lambda);
  return std::pow(x / std::sin(x), (long double)lambda) * (1.0L + 2.0L * s);
}

long double brute_B_tail(double lambda, double t, long N) {
  const long double x = kPiL * t;
  return 2.0L * std::pow(x / std::sin(x), (long double)lambda) * std::pow(x, -(long double)lambda) *
         std::pow((long double)N, 1.0L - lambda) / (lambda - 1.0L);
}

double closed_A2(double t) { return kPi * kPi * t / (4.0 * std::pow(std::sin(kPi * t), 2)); }
double closed_B2(double t) { return kPi * kPi * t / std::pow(std::sin(kPi * t), 2); }

}  // namespace

TEST_CASE("lambda = 2 closed forms, both methods") {
  for (double t : {1e-4, 3e-4, 1e-3, 0.01, 0.1, 0.25, 0.371, 0.5}) {
    const SeriesEval a = eval_A(2.0, t, 1e-12);
    const SeriesEval b = eval_B(2.0, t, 1e-12);
    // The reported remainder must cover the true error, up to rounding.
    CHECK(std::abs(a.value - closed_A2(t)) <= a.tail_bound + 1e-13 * a.value);
    CHECK(std::abs(b.value - closed_B2(t)) <= b.tail_bound + 1e-13 * b.value);
    if (t >= 0.01) {
      CHECK(a.converged);
      CHECK(std::abs(a.value - closed_A2(t)) <= 1e-10);
    }
  }
  CHECK(eval_A(2.0, 1e-4, 1e-12).method == "fourier-tail");
}

TEST_CASE("tail bounds cover a brute-force reference") {
  for (double lambda : {3.0, 4.0, 6.5}) {
    for (double t : {0.05, 0.2, 0.45}) {
      const long N = 400000;
      const long double ref = brute_B(lambda, t, N);
      const double slack = static_cast<double>(brute_B_tail(lambda, t, N)) + 1e-13 * static_cast<double>(ref);
      const SeriesEval b = eval_B(lambda, t, 1e-12);
      CHECK(b.converged);
      CHECK(std::abs(b.value - static_cast<double>(ref)) <= b.tail_bound + slack);
    }
  }
}

TEST_CASE("partial sums bound the series from below") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> T(0.001, 0.5), L(2.0, 8.0);
  for (int i = 0; i < 40; ++i) {
    const double t = T(rng), lam = L(rng);
    for (SeriesKind k : {SeriesKind::A, SeriesKind::B}) {
      const SeriesEval e = eval_series(k, lam, t, 1e-10);
      CHECK(series_partial_lower(k, lam, t, 256) <= e.value + e.tail_bound);
    }
  }
}

TEST_CASE("A decreases in lambda and B stays below its K bound") {
  for (double t : {0.02, 0.13, 0.3, 0.5}) {
    double prev = INFINITY;
    for (double lam = 2.0; lam <= 12.0; lam += 0.5) {
      const double a = eval_A(lam, t, 1e-12).value;
      CHECK(a >= 1.0 - 1e-12);
      CHECK(a <= prev + 1e-12);
      prev = a;
      CHECK(eval_B(lam, t, 1e-12).value <= K_upper(lam, t));
    }
  }
}

TEST_CASE("zeta") {
  CHECK(zeta(2.0) == doctest::Approx(kPi * kPi / 6).epsilon(1e-14));
  CHECK(zeta(4.0) == doctest::Approx(std::pow(kPi, 4) / 90).epsilon(1e-14));
  CHECK(zeta(3.0) == doctest::Approx(1.2020569031595942).epsilon(1e-14));
  CHECK_THROWS_AS(zeta(1.0), DomainError);
}

TEST_CASE("minimiser is not beaten by random probes") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> T(kTMin, 0.5);
  for (auto [kind, lam] : {std::pair{SeriesKind::B, 2.0}, {SeriesKind::B, 5.0}, {SeriesKind::A, 2.0},
                           {SeriesKind::A, 1.999}}) {
    const MinResult m = minimize_over_t(kind, lam);
    for (int i = 0; i < 200; ++i) {
      const SeriesEval e = eval_series(kind, lam, T(rng), 1e-10);
      CHECK(m.value <= e.value + e.tail_bound + 1e-9);
    }
  }
  // B(2, t) = pi^2 t / sin^2(pi t) is minimal where tan(pi t) = 2 pi t.
  const MinResult m = minimize_over_t(SeriesKind::B, 2.0);
  CHECK(std::tan(kPi * m.t_star) == doctest::Approx(2 * kPi * m.t_star).epsilon(1e-6));
  CHECK_THROWS_AS(minimize_over_t(SeriesKind::B, 2.0, 100), DomainError);
}

TEST_CASE("gamma2 and gamma4 formulas against independent scans") {
  // Root of tan x = 2x in (1, 1.5) by bisection.
  double lo = 1.0, hi = 1.5;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (std::tan(mid) - 2 * mid < 0 ? lo : hi) = mid;
  }
  const ConstantValue g2 = gamma2_sharp();
  CHECK(g2.argument == doctest::Approx(lo).epsilon(1e-9));
  CHECK(g2.value == doctest::Approx(2 * std::pow(std::sin(lo), 2) / (kPi * lo)).epsilon(1e-12));

  double best = 0.0;
  for (int i = 1; i < 500000; ++i) {
    const double t = 0.5 * i / 500000;
    best = std::max(best, 3 * std::pow(std::sin(kPi * t), 4) / (std::pow(kPi, 4) * t * t * t));
  }
  const ConstantValue g4 = gamma4_sharp_lower();
  CHECK(g4.value == doctest::Approx(best).epsilon(1e-9));
  CHECK(g4.value >= best);
}

TEST_CASE("p > 2 lower bound uses powers of the kernel") {
  const GammaSharpLower g = gamma_sharp_lower(3.0);
  // L = 1 alone already gives 2 / min B(3, t).
  CHECK(g.value >= 2.0 / minimize_over_t(SeriesKind::B, 3.0).value - 1e-12);
  CHECK(g.value <= 0.5);
  CHECK(g.L_evaluated >= 2);
  const GammaSharpLower g2 = gamma_sharp_lower(2.0);
  CHECK(g2.best_L == 1);
  CHECK(g2.value == doctest::Approx(gamma2_sharp().value).epsilon(1e-7));
  CHECK_THROWS_AS(gamma_sharp_lower(1.0), DomainError);
}

TEST_CASE("asymptote approaches sqrt(2 pi e)") {
  const auto grid = default_kappa_grid();
  CHECK(grid.front() == doctest::Approx(0.05));
  CHECK(grid.back() == doctest::Approx(3.0));
  const AsymptoteResult r = asymptote_scan(1e4, grid);
  CHECK(r.value == doctest::Approx(std::sqrt(2 * kPi * std::exp(1.0))).epsilon(1e-3));
  CHECK(r.kappa == doctest::Approx(1.0 / (std::sqrt(2.0) * kPi)).epsilon(1e-2));
}

TEST_CASE("star and p = 1 chain") {
  const ConstantValue s = gamma_star_lower(2.0);
  CHECK(s.value == doctest::Approx(2 * gamma2_sharp().value).epsilon(1e-6));
  const ConstantValue g1 = gamma1_certified_lower(1.999);
  CHECK(g1.value == doctest::Approx(std::pow(gamma_star_lower(1.999).value, 1 / 1.999)).epsilon(1e-12));
  CHECK_THROWS_AS(gamma1_certified_lower(2.0), DomainError);
}

TEST_CASE("domain checks") {
  CHECK_THROWS_AS(eval_A(1.0, 0.2, 1e-9), DomainError);
  CHECK_THROWS_AS(eval_B(2.0, 0.0, 1e-9), DomainError);
  CHECK_THROWS_AS(eval_B(2.0, 0.6, 1e-9), DomainError);
  CHECK_THROWS_AS(eval_B(2.0, 0.2, 0.0), DomainError);
  CHECK_THROWS_AS(series_kind_from_string("C"), DomainError);
  CHECK(series_kind_from_string("A") == SeriesKind::A);
}
