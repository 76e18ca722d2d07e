#include "concentra/concentrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace concentra {

// -------------------------------------------------------------- IntervalSet

IntervalSet::IntervalSet(std::vector<std::pair<double, double>> intervals) : intervals_(std::move(intervals)) {
  if (intervals_.empty()) throw DomainError("IntervalSet: no intervals");
  std::sort(intervals_.begin(), intervals_.end());
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    const auto [lo, hi] = intervals_[i];
    if (!(lo >= 0.0 && lo < hi && hi <= 1.0)) {
      throw DomainError("IntervalSet: each interval needs 0 <= lo < hi <= 1");
    }
    if (i > 0 && lo < intervals_[i - 1].second) throw DomainError("IntervalSet: intervals overlap");
  }
  std::vector<std::pair<double, double>> reflected;
  for (auto [lo, hi] : intervals_) reflected.emplace_back(1.0 - hi, 1.0 - lo);
  std::sort(reflected.begin(), reflected.end());
  symmetric_ = true;
  for (std::size_t i = 0; i < reflected.size(); ++i) {
    if (std::abs(reflected[i].first - intervals_[i].first) > 1e-12 ||
        std::abs(reflected[i].second - intervals_[i].second) > 1e-12) {
      symmetric_ = false;
    }
  }
}

IntervalSet IntervalSet::full() { return IntervalSet({{0.0, 1.0}}); }

double IntervalSet::measure() const {
  double m = 0.0;
  for (auto [lo, hi] : intervals_) m += hi - lo;
  return m;
}

double IntervalSet::overlap(double lo, double hi) const {
  if (hi - lo >= 1.0) return measure();
  const double shift = std::floor(lo);
  lo -= shift;
  hi -= shift;
  auto plain = [&](double a, double b) {
    double s = 0.0;
    for (auto [l, h] : intervals_) s += std::max(0.0, std::min(b, h) - std::max(a, l));
    return s;
  };
  if (hi <= 1.0) return plain(lo, hi);
  return plain(lo, 1.0) + plain(0.0, hi - 1.0);
}

// ----------------------------------------------------------- find_fraction

FractionResult find_fraction(const IntervalSet& E, double theta, double eta, std::int64_t q0,
                             std::int64_t q_max, std::int64_t nu, bool shifted) {
  if (!(theta > 0.0)) throw DomainError("find_fraction: theta must be positive");
  if (!(eta >= 0.0 && eta < 1.0)) throw DomainError("find_fraction: eta must lie in [0, 1)");
  if (q0 < 0 || q0 >= q_max) throw DomainError("find_fraction: need 0 <= q0 < q_max");
  if (nu < 1) throw DomainError("find_fraction: nu must be >= 1");
  FractionResult best;
  for (std::int64_t q = q0 + 1; q <= q_max; ++q) {
    if (gcd(nu, q) != 1) continue;
    const double w = theta / (static_cast<double>(q) * static_cast<double>(q));
    for (std::int64_t a = 0; a < q; ++a) {
      double center;
      if (shifted) {
        if (gcd(2 * a + 1, 2 * q) != 1) continue;
        center = static_cast<double>(2 * a + 1) / static_cast<double>(2 * q);
      } else {
        if (gcd(a, q) != 1) continue;
        center = static_cast<double>(a) / static_cast<double>(q);
      }
      const double coverage = std::min(1.0, E.overlap(center - w, center + w) / (2.0 * w));
      if (coverage >= 1.0 - eta) return {a, q, center, coverage, false};
      if (coverage > best.coverage) best = {a, q, center, coverage, true};
    }
  }
  return best;
}

// ------------------------------------------------------------------ choose_n

std::int64_t choose_n(double p, double eps, double delta) {
  if (!(p > 1.0)) throw DomainError("choose_n: p must exceed 1");
  if (!(eps > 0.0)) throw DomainError("choose_n: eps must be positive");
  if (!(delta > 0.0 && delta < 0.5)) throw DomainError("choose_n: delta must lie in (0, 1/2)");
  const double kappa = std::pow(kPi / 2.0, p) / (p - 1.0);
  const double log_n = std::log(2.0 * kappa / eps) / (p - 1.0) - std::log(delta);
  if (log_n > std::log(1e12)) throw BudgetError("choose_n: required n exceeds 1e12");
  return static_cast<std::int64_t>(std::ceil(std::exp(log_n)));
}

// ----------------------------------------------------------- build_Q / S

Spectrum build_Q(const Spectrum& R, std::int64_t n, std::int64_t q, std::int64_t nu) {
  if (n < 1) throw DomainError("build_Q: n must be >= 1");
  if (q < 1 || nu < 1) throw DomainError("build_Q: q and nu must be >= 1");
  if (R.empty()) throw DomainError("build_Q: R is empty");
  std::vector<std::int64_t> f;
  f.reserve(R.size() * static_cast<std::size_t>(n));
  for (auto h : R.freqs()) {
    for (std::int64_t m = 0; m < n; ++m) f.push_back(nu * h + q * m);
  }
  std::sort(f.begin(), f.end());
  if (std::adjacent_find(f.begin(), f.end()) != f.end()) {
    throw DomainError("build_Q: frequencies collide (need distinct nu h mod q, e.g. deg R < q and gcd(nu, q) = 1)");
  }
  const std::int64_t bound = f.back() + 1;
  return Spectrum(std::move(f), bound);
}

Spectrum build_S(const Spectrum& R1, const Spectrum& R2, std::int64_t q, ProductMode mode) {
  if (R1.empty() || R2.empty()) throw DomainError("build_S: empty factor");
  const std::int64_t m = mode == ProductMode::QPlus1 ? q + 1 : 2 * q + 1;
  std::vector<std::int64_t> f;
  for (auto h1 : R1.freqs()) {
    for (auto h2 : R2.freqs()) f.push_back(h1 + m * h2);
  }
  std::sort(f.begin(), f.end());
  if (std::adjacent_find(f.begin(), f.end()) != f.end()) throw DomainError("build_S: frequencies collide");
  const std::int64_t bound = f.back() + 1;
  return Spectrum(std::move(f), bound);
}

// ------------------------------------------------------------------ measure

namespace {

struct PanelIntegral {
  double fine = 0.0;
  double coarse = 0.0;
};

double simpson(const std::vector<double>& f, std::size_t stride, std::size_t last, double h) {
  // Nodes 0, stride, ..., last with last / stride even.
  double s = f[0] + f[last];
  const std::size_t count = last / stride;
  for (std::size_t i = 1; i < count; ++i) s += (i % 2 ? 4.0 : 2.0) * f[i * stride];
  return s * h * static_cast<double>(stride) / 3.0;
}

double direct_simpson(const Spectrum& Q, double p, double lo, double hi, std::int64_t panels) {
  if (hi <= lo) return 0.0;
  panels = std::max<std::int64_t>(2, panels + panels % 2);
  const double h = (hi - lo) / static_cast<double>(panels);
  double s = 0.0;
  for (std::int64_t i = 0; i <= panels; ++i) {
    const double w = (i == 0 || i == panels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    s += w * std::pow(std::abs(eval_point(Q, lo + h * static_cast<double>(i))), p);
  }
  return s * h / 3.0;
}

PanelIntegral integrate(const Spectrum& Q, double p, double lo, double hi, std::int64_t M) {
  const double len = hi - lo;
  std::size_t J = static_cast<std::size_t>(std::floor(len * static_cast<double>(M) + 1e-9));
  J -= J % 4;
  PanelIntegral out;
  if (J >= 4) {
    // Q(lo + j/M) via one M-point transform of the twisted coefficients.
    CVector c = CVector::Zero(Q.max_freq() + 1);
    for (auto h : Q.freqs()) c[h] = unit_root(static_cast<double>(h) * lo);
    const GridValues gv = eval_grid(CoeffPoly(std::move(c)), Grid(M));
    std::vector<double> f(J + 1);
    for (std::size_t j = 0; j <= J; ++j) {
      f[j] = std::pow(std::abs(gv.values[static_cast<Eigen::Index>(j % static_cast<std::size_t>(M))]), p);
    }
    const double h = 1.0 / static_cast<double>(M);
    out.fine = simpson(f, 1, J, h);
    out.coarse = simpson(f, 2, J, h);
  }
  const double rest_lo = lo + static_cast<double>(J) / static_cast<double>(M);
  if (hi - rest_lo > 1e-15) {
    const auto panels = static_cast<std::int64_t>(std::ceil((hi - rest_lo) * static_cast<double>(M))) * 2;
    const double r = direct_simpson(Q, p, rest_lo, hi, panels);
    out.fine += r;
    out.coarse += r;
  }
  return out;
}

}  // namespace

TorusReport measure(const Spectrum& Q, const IntervalSet& E, double p, int mesh_per_unit_degree) {
  if (Q.empty()) throw DomainError("measure: Q is empty");
  if (!(p > 0.0)) throw DomainError("measure: p must be positive");
  if (mesh_per_unit_degree < 4) {
    throw DomainError("measure: mesh_per_unit_degree must be >= 4 samples per oscillation");
  }
  const std::int64_t deg = Q.max_freq() + 1;
  std::int64_t M = 64;
  while (M < static_cast<std::int64_t>(mesh_per_unit_degree) * deg) M *= 2;

  PanelIntegral onE;
  for (auto [lo, hi] : E.intervals()) {
    const PanelIntegral part = integrate(Q, p, lo, hi, M);
    onE.fine += part.fine;
    onE.coarse += part.coarse;
  }
  const PanelIntegral onT = integrate(Q, p, 0.0, 1.0, M);

  TorusReport r;
  r.int_T = onT.fine;
  r.int_E = std::min(onE.fine, r.int_T);
  r.ratio = r.int_T > 0.0 ? r.int_E / r.int_T : 0.0;
  r.mesh = M;
  r.quadrature_error_est = std::abs(onE.fine - onE.coarse) + std::abs(onT.fine - onT.coarse);
  if (p == 2.0) {
    const double h = static_cast<double>(Q.size());
    r.parseval_rel_error = std::abs(r.int_T - h) / h;
  }
  return r;
}

// -------------------------------------------------------------- end_to_end

EndToEnd end_to_end(const IntervalSet& E, double p, double eps, const ConcentrateConfig& cfg) {
  if (!E.symmetric() && !cfg.allow_asymmetric) throw DomainError("end_to_end: E must be symmetric");
  if (!(p > 1.0)) throw DomainError("end_to_end: the Dirichlet-peak pathway needs p > 1");
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("end_to_end: eps must lie in (0, 1)");
  if (cfg.shifted) throw DomainError("end_to_end: the half-grid pathway needs gap peaking functions (not built)");

  const FractionResult fr = find_fraction(E, cfg.theta, cfg.eta, cfg.q0, cfg.q_max, cfg.nu, false);
  if (fr.q == 0) throw DomainError("end_to_end: no admissible fraction in range");

  Plan plan;
  plan.a = fr.a;
  plan.q = fr.q;
  plan.theta = cfg.theta;
  plan.nu = cfg.nu;
  plan.shifted = false;
  plan.coverage = fr.coverage;
  plan.below_threshold = fr.below_threshold;
  plan.b = (cfg.nu % fr.q) * fr.a % fr.q;

  const int qi = static_cast<int>(fr.q);
  const ConcentrationReport w = qi <= cfg.search.exhaustive_cap
                                    ? exact_gamma_sharp(qi, p, cfg.search)
                                    : heuristic_gamma_sharp(qi, p, cfg.search.restarts, cfg.search.seed, cfg.search);
  plan.witness_method = w.method;
  // W peaks at 1/q; the dilate by b^-1 peaks at b/q, so R(nu t) peaks at a/q.
  plan.R = dilate_mod(w.spectrum, inverse_mod(plan.b, fr.q));
  plan.predicted_ratio = ratio(eval_grid(plan.R, Grid(fr.q)), p, plan.b);

  plan.delta = cfg.theta / static_cast<double>(fr.q);
  plan.n = choose_n(p, eps, plan.delta);
  plan.target_ratio = 0.9 * plan.predicted_ratio * (1.0 - eps) * (1.0 - eps) / (1.0 + eps);
  if (plan.below_threshold) plan.target_ratio *= plan.coverage;

  EndToEnd out;
  out.Q = build_Q(plan.R, plan.n, fr.q, cfg.nu);
  plan.q_spectrum_size = static_cast<std::int64_t>(out.Q.size());
  plan.q_min_gap = out.Q.min_gap();
  plan.r_layer_gap = plan.R.size() > 1 ? cfg.nu * plan.R.min_gap() : 0;
  plan.d_layer_gap = plan.n > 1 ? fr.q : 0;
  out.report = measure(out.Q, E, p, cfg.mesh_per_unit_degree);
  out.plan = std::move(plan);
  return out;
}

}  // namespace concentra
