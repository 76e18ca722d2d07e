#include <algorithm>
#include <cfloat>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "concentra/bounds.hpp"
#include "concentra/trigpoly.hpp"

namespace concentra {

namespace {

constexpr double kEps = DBL_EPSILON;
constexpr std::int64_t kDirectMax = std::int64_t{1} << 18;
constexpr std::int64_t kFourierStart = std::int64_t{1} << 12;
constexpr std::int64_t kFourierMax = std::int64_t{1} << 22;
constexpr std::size_t kMaxHarmonics = std::size_t{1} << 20;

// Neumaier compensated accumulator.
struct Accumulator {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + comp; }
};

// |sin(pi m t)| with m t reduced mod 1 in extended precision.
double abs_sin_pi_multiple(std::int64_t m, double t) {
  const long double r = std::fmod(static_cast<long double>(m) * static_cast<long double>(t), 1.0L);
  return std::abs(std::sin(kPi * static_cast<double>(r)));
}

// Power-law weight w(k) = (a k + b)^-lambda.
struct Weight {
  double a;
  double b;
  double lambda;
  double operator()(long double k) const {
    return static_cast<double>(std::pow(static_cast<long double>(a) * k + b, -static_cast<long double>(lambda)));
  }
};

// sum_{k>=N} (a k + b)^-lambda by Euler-Maclaurin; err receives a bound on
// the remainder (first omitted term, doubled).
double power_tail(const Weight& w, std::int64_t N, double* err) {
  const double lambda = w.lambda;
  const double u = w.a * static_cast<double>(N) + w.b;
  const double integral = std::pow(u, 1.0 - lambda) / (w.a * (lambda - 1.0));
  const double f0 = std::pow(u, -lambda);
  // B_{2r} / (2r)! for r = 1..5.
  static constexpr double kBernoulliOverFactorial[] = {
      1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0, 1.0 / 47900160.0};
  double sum = integral + 0.5 * f0;
  // f^{(m)}(N) = (-a)^m (lambda)_m u^{-lambda-m}; built incrementally.
  double deriv = f0;  // m = 0
  int m = 0;
  double last = 0.0;
  for (int r = 1; r <= 5; ++r) {
    while (m < 2 * r - 1) {
      deriv *= -w.a * (lambda + m) / u;
      ++m;
    }
    const double term = kBernoulliOverFactorial[r - 1] * deriv;
    if (r == 5) {
      last = term;
      break;
    }
    sum -= term;
  }
  if (err) *err = 2.0 * std::abs(last) + 4.0 * kEps * std::abs(sum);
  return sum;
}

// Fourier cosine coefficients of |sin theta|^lambda in cos(2 j theta).
class SinPowerHarmonics {
 public:
  explicit SinPowerHarmonics(double lambda) : lambda_(lambda) {
    const double c0 = std::exp(std::lgamma(lambda + 1.0) - lambda * std::log(2.0) -
                               2.0 * std::lgamma(1.0 + lambda / 2.0));
    coeff_.push_back(c0);
    partial_.add(c0);
    cumulative_.push_back(partial_.value());
    abs_total_ = std::abs(c0);
  }

  double coeff(std::size_t j) {
    grow(j);
    return coeff_[j];
  }

  // Upper bound on sum_{i>j} |c_i|.  Past j = lambda/2 + 1 every c_i has
  // the same sign, so the tail equals |sum_{i<=j} c_i| because the full
  // series vanishes at theta = 0.
  double tail_abs(std::size_t j) {
    grow(j);
    const double exact_tail = std::abs(cumulative_[j]);
    return exact_tail + 4.0 * static_cast<double>(j + 1) * kEps * abs_total_;
  }

  std::size_t sign_stable_from() const {
    return static_cast<std::size_t>(std::floor(lambda_ / 2.0)) + 2;
  }

 private:
  void grow(std::size_t j) {
    while (coeff_.size() <= j) {
      const double jj = static_cast<double>(coeff_.size());
      double c;
      if (coeff_.size() == 1) {
        c = -2.0 * coeff_[0] * (lambda_ / 2.0) / (1.0 + lambda_ / 2.0);
      } else {
        c = coeff_.back() * (jj - 1.0 - lambda_ / 2.0) / (jj + lambda_ / 2.0);
      }
      coeff_.push_back(c);
      partial_.add(c);
      cumulative_.push_back(partial_.value());
      abs_total_ += std::abs(c);
    }
  }

  double lambda_;
  std::vector<double> coeff_;
  std::vector<double> cumulative_;
  Accumulator partial_;
  double abs_total_ = 0.0;
};

// sum_{k>=N} z^k w(k) for |z| = 1, with an error bound.  Uses m-fold
// summation by parts,
//   T_0 = sum_{i<m} z^{N+i} Delta^i w(N) / (1-z)^{i+1} + z^m T_m / (1-z)^m,
// and |T_m| <= |Delta^{m-1} w(N)| for the completely monotone weight.
struct OscillatoryTail {
  Complex value;
  double err;
};

OscillatoryTail oscillatory_tail(Complex z, Complex zN, const Weight& w, std::int64_t N,
                                 double crude_total, double crude_err) {
  const Complex one_minus = 1.0 - z;
  const double d = std::abs(one_minus);
  if (d < 1e-12) return {zN * crude_total, crude_err + d * crude_total * static_cast<double>(N)};

  // Forward differences Delta^i w(N), i = 0..4, in extended precision.
  long double wv[5];
  for (int i = 0; i < 5; ++i) {
    wv[i] = std::pow(static_cast<long double>(w.a) * (N + i) + w.b, -static_cast<long double>(w.lambda));
  }
  long double diff[5];
  {
    long double tmp[5];
    for (int i = 0; i < 5; ++i) tmp[i] = wv[i];
    for (int order = 0; order < 5; ++order) {
      diff[order] = tmp[0];
      for (int i = 0; i + 1 < 5 - order; ++i) tmp[i] = tmp[i + 1] - tmp[i];
    }
  }

  OscillatoryTail best{Complex{}, crude_total};
  Complex explicit_sum{};
  Complex zi = zN;
  Complex denom = one_minus;
  double cancel = 0.0;
  for (int m = 1; m <= 4; ++m) {
    const int i = m - 1;
    explicit_sum += zi * static_cast<double>(diff[i]) / denom;
    cancel += std::ldexp(static_cast<double>(wv[0]), i) * 1e-19 / std::abs(denom);
    const double residual = std::abs(static_cast<double>(diff[m - 1])) / std::pow(d, m);
    const double err = residual + cancel + 8.0 * kEps * std::abs(explicit_sum);
    if (err < best.err) best = {explicit_sum, err};
    zi *= z;
    denom *= one_minus;
  }
  return best;
}

struct Geometry {
  Weight weight;
  std::int64_t first;  // first summation index of the series
  bool odd;            // A uses odd multiples m = 2k + 1
};

Geometry geometry(SeriesKind kind, double lambda) {
  if (kind == SeriesKind::B) return {{1.0, 0.0, lambda}, 1, false};
  return {{2.0, 1.0, lambda}, 0, true};
}

std::int64_t multiple(const Geometry& g, std::int64_t k) { return g.odd ? 2 * k + 1 : k; }

void check_domain(double lambda, double t, double tol) {
  if (!(lambda > 1.0 + 1e-6)) throw DomainError("series: lambda must exceed 1");
  if (!(t > 0.0 && t <= 0.5)) throw DomainError("series: t must lie in (0, 1/2]");
  if (!(tol > 0.0)) throw DomainError("series: tol must be positive");
}

// Integral bound on sum over the dropped terms, scaled by sin(pi t)^-lambda,
// when the direct sum stops after K terms.
double direct_tail_bound(SeriesKind kind, double lambda, double log_sin, std::int64_t K) {
  if (kind == SeriesKind::B) {
    const double lk = std::log(static_cast<double>(K));
    return std::exp(std::log(2.0) - lambda * log_sin + (1.0 - lambda) * lk - std::log(lambda - 1.0));
  }
  const double m = 2.0 * static_cast<double>(K) + 1.0;
  const double lm = std::log(m);
  return std::exp(-lambda * log_sin - lambda * lm) +
         std::exp(-lambda * log_sin + (1.0 - lambda) * lm - std::log(2.0 * (lambda - 1.0)));
}

SeriesEval direct_sum(SeriesKind kind, double lambda, double t, std::int64_t K, double log_sin) {
  const double sx = std::sin(kPi * t);
  const Geometry g = geometry(kind, lambda);
  Accumulator acc;
  for (std::int64_t k = g.first; k < g.first + K; ++k) {
    const std::int64_t m = multiple(g, k);
    const double ratio = abs_sin_pi_multiple(m, t) / (static_cast<double>(m) * sx);
    acc.add(std::pow(ratio, lambda));
  }
  SeriesEval out;
  out.lambda = lambda;
  out.t = t;
  out.terms_used = K;
  out.method = "direct";
  double value = acc.value();
  if (kind == SeriesKind::B) {
    const double lead = std::exp(lambda * (std::log(kPi * t) - log_sin));
    value = lead + 2.0 * value;
  }
  out.value = value;
  out.tail_bound = direct_tail_bound(kind, lambda, log_sin, K) + (lambda + 8.0) * kEps * value;
  return out;
}

SeriesEval fourier_sum(SeriesKind kind, double lambda, double t, double tol, double log_sin) {
  const Geometry g = geometry(kind, lambda);
  const double scale = (kind == SeriesKind::B) ? 2.0 : 1.0;
  const double sin_pow = std::exp(lambda * log_sin);
  const double tol_s = tol * sin_pow / scale;
  SinPowerHarmonics harmonics(lambda);
  const std::size_t j_floor = harmonics.sign_stable_from();

  Accumulator direct;
  double direct_abs = 0.0;
  std::int64_t next = g.first;

  SeriesEval out;
  out.lambda = lambda;
  out.t = t;
  out.method = "fourier-tail";
  for (std::int64_t N = kFourierStart;; N *= 4) {
    for (; next < N; ++next) {
      const std::int64_t m = multiple(g, next);
      const double term = std::pow(abs_sin_pi_multiple(m, t), lambda) *
                          std::pow(static_cast<double>(m), -lambda);
      direct.add(term);
      direct_abs += term;
    }

    double w_err = 0.0;
    const double w_total = power_tail(g.weight, N, &w_err);
    double bound = (lambda + 6.0) * kEps * direct_abs;
    Accumulator tail;
    tail.add(harmonics.coeff(0) * w_total);
    bound += std::abs(harmonics.coeff(0)) * w_err;

    std::size_t J = j_floor;
    while (J < kMaxHarmonics && harmonics.tail_abs(J) * w_total > tol_s / 4.0) J *= 2;
    J = std::min(J, kMaxHarmonics);
    bound += harmonics.tail_abs(J) * (w_total + w_err);

    for (std::size_t j = 1; j <= J; ++j) {
      const double cj = harmonics.coeff(j);
      if (cj == 0.0) continue;
      // B: cos(2 j k pi t) = Re e(j t)^k.  A: cos(2 j (2k+1) pi t) = Re e(j t) e(2 j t)^k.
      const long double jt = static_cast<long double>(j) * static_cast<long double>(t);
      const long double step = g.odd ? 2.0L * jt : jt;
      const double step_frac = static_cast<double>(std::fmod(step, 1.0L));
      const Complex z = unit_root(step_frac);
      const double zn_frac = static_cast<double>(std::fmod(step * static_cast<long double>(N), 1.0L));
      const Complex zN = unit_root(zn_frac);
      const Complex phase0 = g.odd ? unit_root(static_cast<double>(std::fmod(jt, 1.0L))) : Complex{1.0, 0.0};
      const OscillatoryTail u = oscillatory_tail(z, zN, g.weight, N, w_total, w_err);
      tail.add(cj * (phase0 * u.value).real());
      bound += std::abs(cj) * u.err;
    }

    const double s_value = direct.value() + tail.value();
    out.terms_used = (N - g.first) + static_cast<std::int64_t>(J);
    double value = s_value / sin_pow;
    if (kind == SeriesKind::B) value = std::exp(lambda * (std::log(kPi * t) - log_sin)) + 2.0 * value;
    out.value = value;
    out.tail_bound = scale * bound / sin_pow + (lambda + 8.0) * kEps * value;
    if (out.tail_bound <= tol) {
      out.converged = true;
      return out;
    }
    if (N >= kFourierMax) {
      out.converged = false;
      return out;
    }
  }
}

}  // namespace

const char* to_string(SeriesKind k) { return k == SeriesKind::B ? "B" : "A"; }

SeriesKind series_kind_from_string(const std::string& s) {
  if (s == "B" || s == "b") return SeriesKind::B;
  if (s == "A" || s == "a") return SeriesKind::A;
  throw DomainError("unknown series '" + s + "' (expected A or B)");
}

SeriesEval eval_series(SeriesKind kind, double lambda, double t, double tol) {
  check_domain(lambda, t, tol);
  const double log_sin = std::log(std::sin(kPi * t));
  // Leave room for the rounding allowance inside tol.
  const double target = 0.5 * tol;
  std::int64_t K = 16;
  while (K <= kDirectMax && direct_tail_bound(kind, lambda, log_sin, K) > target) K *= 2;
  if (K <= kDirectMax) {
    // Shrink back towards the smallest K meeting the target.
    std::int64_t lo = K / 2, hi = K;
    while (hi - lo > std::max<std::int64_t>(1, hi / 64)) {
      const std::int64_t mid = lo + (hi - lo) / 2;
      if (direct_tail_bound(kind, lambda, log_sin, mid) > target) lo = mid; else hi = mid;
    }
    SeriesEval e = direct_sum(kind, lambda, t, hi, log_sin);
    e.converged = e.tail_bound <= tol;
    return e;
  }
  return fourier_sum(kind, lambda, t, tol, log_sin);
}

double series_partial_lower(SeriesKind kind, double lambda, double t, int terms) {
  check_domain(lambda, t, 1.0);
  const double log_sin = std::log(std::sin(kPi * t));
  const double sx = std::sin(kPi * t);
  const Geometry g = geometry(kind, lambda);
  Accumulator acc;
  for (std::int64_t k = g.first; k < g.first + terms; ++k) {
    const std::int64_t m = multiple(g, k);
    acc.add(std::pow(abs_sin_pi_multiple(m, t) / (static_cast<double>(m) * sx), lambda));
  }
  double value = acc.value();
  if (kind == SeriesKind::B) value = std::exp(lambda * (std::log(kPi * t) - log_sin)) + 2.0 * value;
  // Rounding can only lift the partial sum by a few ulps per term.
  return value * (1.0 - (lambda + 8.0) * kEps);
}

SeriesEval eval_B(double lambda, double t, double tol) {
  return eval_series(SeriesKind::B, lambda, t, tol);
}

SeriesEval eval_A(double lambda, double t, double tol) {
  return eval_series(SeriesKind::A, lambda, t, tol);
}

double zeta(double lambda) {
  if (!(lambda > 1.0)) throw DomainError("zeta: lambda must exceed 1");
  // Direct summation while the integral tail is still above 1e-17.
  Accumulator acc;
  std::int64_t k = 1;
  const std::int64_t direct_cap = 64 + static_cast<std::int64_t>(std::ceil(2.0 * lambda));
  for (; k < direct_cap; ++k) {
    const double term = std::pow(static_cast<double>(k), -lambda);
    acc.add(term);
    const double tail = std::pow(static_cast<double>(k), 1.0 - lambda) / (lambda - 1.0);
    if (tail < 1e-17 * acc.value()) return acc.value();
  }
  double err = 0.0;
  acc.add(power_tail(Weight{1.0, 0.0, lambda}, k, &err));
  return acc.value();
}

double K_upper(double lambda, double t) {
  if (!(lambda > 1.0)) throw DomainError("K_upper: lambda must exceed 1");
  if (!(t > 0.0 && t <= 0.5)) throw DomainError("K_upper: t must lie in (0, 1/2]");
  return std::pow(kPi / 2.0, lambda) + 2.0 * zeta(lambda) * std::pow(t, -lambda);
}

}  // namespace concentra
