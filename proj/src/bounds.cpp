#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "concentra/bounds.hpp"
#include "concentra/trigpoly.hpp"

namespace concentra {

namespace {

constexpr double kInvPhi = 0.61803398874989484820;

struct GoldenResult {
  double x;
  double f;
  double width;
};

// Golden-section search for a minimum of f on [a, b]; seeds the best point
// with (x0, f0) so the result never exceeds a known sample.
GoldenResult golden_min(const std::function<double(double)>& f, double a, double b, double tol,
                        double x0, double f0) {
  double best_x = x0, best_f = f0;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  auto note = [&](double x, double fx) {
    if (fx < best_f || (fx == best_f && x < best_x)) {
      best_f = fx;
      best_x = x;
    }
  };
  note(c, fc);
  note(d, fd);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
      note(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
      note(d, fd);
    }
  }
  return {best_x, best_f, b - a};
}

}  // namespace

MinResult minimize_over_t(SeriesKind which, double lambda, int scan_points, double refine_tol) {
  if (scan_points < 512) throw DomainError("minimize_over_t: scan_points must be >= 512");
  if (!(refine_tol > 0.0)) throw DomainError("minimize_over_t: refine_tol must be positive");
  const double tol = refine_tol / 10.0;
  double worst_tail = 0.0;
  auto f = [&](double t) {
    const SeriesEval e = eval_series(which, lambda, t, tol);
    worst_tail = std::max(worst_tail, e.tail_bound);
    return e.value;
  };

  const int n = scan_points;
  const double step = (0.5 - kTMin) / static_cast<double>(n - 1);
  std::vector<double> ts(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) ts[i] = (i == n - 1) ? 0.5 : kTMin + step * i;
  // Walk downwards from t = 1/2 so the running minimum is small by the time
  // the expensive small-t points come up; `<=` keeps ties on the smaller t.
  std::size_t best = ts.size() - 1;
  double best_value = f(ts[best]);
  for (int i = n - 2; i >= 0; --i) {
    if (series_partial_lower(which, lambda, ts[i], 256) > best_value) continue;
    const double v = f(ts[i]);
    if (v <= best_value) {
      best_value = v;
      best = static_cast<std::size_t>(i);
    }
  }
  const double lo = ts[best == 0 ? 0 : best - 1];
  const double hi = ts[std::min<std::size_t>(best + 1, ts.size() - 1)];
  const GoldenResult g = golden_min(f, lo, hi, refine_tol, ts[best], best_value);

  MinResult r;
  r.t_star = g.x;
  r.value = g.f;
  r.bracket_width = g.width;
  r.scan_points = n;
  r.series_tol = tol;
  r.tail_bound = worst_tail;
  return r;
}

ConstantValue gamma2_sharp() {
  // 2 sin^2 x / (pi x) peaks once on (0, pi), where tan x = 2x.
  auto neg = [](double x) { return -2.0 * std::sin(x) * std::sin(x) / (kPi * x); };
  const int n = 4096;
  double best_x = kPi / n, best_f = neg(best_x);
  for (int i = 2; i < n; ++i) {
    const double x = kPi * i / n;
    if (neg(x) < best_f) {
      best_f = neg(x);
      best_x = x;
    }
  }
  const GoldenResult g = golden_min(neg, best_x - kPi / n, best_x + kPi / n, 1e-12, best_x, best_f);
  // Polish on the stationarity condition 2x cos x - sin x = 0.
  double a = g.x - 1e-6, b = g.x + 1e-6;
  auto h = [](double x) { return 2.0 * x * std::cos(x) - std::sin(x); };
  for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
    const double m = 0.5 * (a + b);
    if ((h(a) > 0) == (h(m) > 0)) a = m; else b = m;
  }
  const double x = 0.5 * (a + b);
  ConstantValue out;
  out.value = std::max(-neg(x), -g.f);
  out.argument = x;
  out.certificate.method = "scan+golden+bisection";
  out.certificate.scan_points = n;
  out.certificate.bracket_width = b - a;
  out.certificate.notes.push_back("stationary point solves tan x = 2x");
  return out;
}

ConstantValue gamma4_sharp_lower() {
  auto neg = [](double t) {
    const double s = std::sin(kPi * t);
    return -3.0 * s * s * s * s / (kPi * kPi * kPi * kPi * t * t * t);
  };
  const int n = 4096;
  double best_t = 0.5 / n, best_f = neg(best_t);
  for (int i = 2; i <= n; ++i) {
    const double t = 0.5 * i / n;
    if (neg(t) < best_f) {
      best_f = neg(t);
      best_t = t;
    }
  }
  const GoldenResult g =
      golden_min(neg, best_t - 0.5 / n, std::min(0.5, best_t + 0.5 / n), 1e-12, best_t, best_f);
  ConstantValue out;
  out.value = -g.f;
  out.argument = g.x;
  out.certificate.method = "scan+golden";
  out.certificate.scan_points = n;
  out.certificate.bracket_width = g.width;
  out.certificate.notes.push_back("closed form 2 / B(4, t)");
  return out;
}

GammaSharpLower gamma_sharp_lower(double p, int L_max) {
  if (!(p > 1.0)) throw DomainError("gamma_sharp_lower: p must exceed 1");
  if (L_max < 1) throw DomainError("gamma_sharp_lower: L_max must be >= 1");
  const int last = p <= 2.0 ? 1 : L_max;
  GammaSharpLower out;
  out.certificate.method = "minimize_over_t(B, L p)";
  int stagnant = 0;
  for (int L = 1; L <= last; ++L) {
    const MinResult m = minimize_over_t(SeriesKind::B, L * p);
    const double value = 2.0 / m.value;
    ++out.L_evaluated;
    const double gain = value - out.value;
    if (value > out.value) {
      out.value = value;
      out.best_L = L;
      out.t_star = m.t_star;
      out.certificate.scan_points = m.scan_points;
      out.certificate.series_tol = m.series_tol;
      out.certificate.bracket_width = m.bracket_width;
    }
    out.certificate.tail_bound = std::max(out.certificate.tail_bound, m.tail_bound);
    stagnant = gain < 1e-6 ? stagnant + 1 : 0;
    if (stagnant >= 2) break;
  }
  out.certificate.notes.push_back("L evaluated: " + std::to_string(out.L_evaluated));
  return out;
}

std::vector<double> default_kappa_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 590; ++i) g.push_back(0.05 + 0.005 * i);
  return g;
}

AsymptoteResult asymptote_scan(double lambda, const std::vector<double>& kappa_grid) {
  if (!(lambda > 1.0)) throw DomainError("asymptote_scan: lambda must exceed 1");
  const double scale = std::sqrt(6.0 / lambda);
  auto f = [&](double kappa) { return eval_B(lambda, kappa * scale, 1e-10).value; };
  std::vector<double> ks;
  for (double k : kappa_grid) {
    const double t = k * scale;
    if (t > 0.0 && t <= 0.5) ks.push_back(k);
  }
  if (ks.empty()) throw DomainError("asymptote_scan: no kappa maps into (0, 1/2]");
  std::sort(ks.begin(), ks.end());
  std::size_t best = 0;
  std::vector<double> vs;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    vs.push_back(f(ks[i]));
    if (vs[i] < vs[best]) best = i;
  }
  const double lo = ks[best == 0 ? 0 : best - 1];
  const double hi = ks[std::min(best + 1, ks.size() - 1)];
  const GoldenResult g = golden_min(f, lo, hi, 1e-7, ks[best], vs[best]);
  return {g.x, g.f, static_cast<int>(ks.size())};
}

ConstantValue gamma_star_lower(double p) {
  const MinResult m = minimize_over_t(SeriesKind::A, p);
  ConstantValue out;
  out.value = 1.0 / m.value;
  out.argument = m.t_star;
  out.certificate.method = "1 / minimize_over_t(A, p)";
  out.certificate.scan_points = m.scan_points;
  out.certificate.series_tol = m.series_tol;
  out.certificate.bracket_width = m.bracket_width;
  out.certificate.tail_bound = m.tail_bound;
  return out;
}

ConstantValue gamma1_certified_lower(double r) {
  if (!(r > 1.0 && r < 2.0)) throw DomainError("gamma1_certified_lower: r must lie in (1, 2)");
  ConstantValue out = gamma_star_lower(r);
  out.value = std::pow(out.value, 1.0 / r);
  out.certificate.method = "gamma_star_lower(r)^(1/r)";
  return out;
}

}  // namespace concentra
