#include "concentra/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace concentra {

double round15(double x) {
  if (!std::isfinite(x)) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return std::strtod(buf, nullptr);
}

Json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return round15(x);
}

Json to_json(const Spectrum& s) { return Json(s.freqs()); }

Spectrum spectrum_from_json(const Json& j, std::int64_t degree_bound) {
  if (!j.is_array()) throw DomainError("spectrum: expected an array of integers");
  std::vector<std::int64_t> f;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw DomainError("spectrum: expected an array of integers");
    f.push_back(v.get<std::int64_t>());
  }
  return Spectrum(std::move(f), degree_bound);
}

Json to_json(const CoeffPoly& p) {
  Json a = Json::array();
  for (Eigen::Index h = 0; h < p.size(); ++h) a.push_back({num(p.coeffs()[h].real()), num(p.coeffs()[h].imag())});
  return a;
}

Json to_json(const SeriesEval& e) {
  return {{"lambda", num(e.lambda)}, {"t", num(e.t)},
          {"value", num(e.value)},   {"tail_bound", num(e.tail_bound)},
          {"terms_used", e.terms_used}, {"converged", e.converged},
          {"method", e.method}};
}

Json to_json(const MinResult& m) {
  return {{"t_star", num(m.t_star)},           {"value", num(m.value)},
          {"bracket_width", num(m.bracket_width)}, {"scan_points", m.scan_points},
          {"series_tol", num(m.series_tol)},   {"tail_bound", num(m.tail_bound)}};
}

Json to_json(const Certificate& c) {
  return {{"method", c.method},
          {"scan_points", c.scan_points},
          {"series_tol", num(c.series_tol)},
          {"bracket_width", num(c.bracket_width)},
          {"tail_bound", num(c.tail_bound)},
          {"notes", c.notes}};
}

Json to_json(const ConstantValue& c) {
  return {{"value", num(c.value)}, {"argument", num(c.argument)}, {"certificate", to_json(c.certificate)}};
}

Json to_json(const GammaSharpLower& g) {
  return {{"value", num(g.value)},
          {"best_L", g.best_L},
          {"t_star", num(g.t_star)},
          {"L_evaluated", g.L_evaluated},
          {"certificate", to_json(g.certificate)}};
}

Json to_json(const AsymptoteResult& a) {
  return {{"kappa", num(a.kappa)}, {"value", num(a.value)}, {"grid_points", a.grid_points}};
}

Json to_json(const ConcentrationReport& r) {
  return {{"q", r.q},
          {"p", num(r.p)},
          {"target", r.target},
          {"ratio", num(r.ratio)},
          {"spectrum", to_json(r.spectrum)},
          {"method", to_string(r.method)},
          {"evaluations", r.evaluations}};
}

Json to_json(const StarReport& r) {
  return {{"q", r.q},
          {"p", num(r.p)},
          {"K", num(r.K)},
          {"ratio_star", num(r.ratio_star)},
          {"cond_K_ok", r.cond_K_ok},
          {"spectrum", to_json(r.spectrum)},
          {"method", to_string(r.method)},
          {"evaluations", r.evaluations}};
}

Json to_json(const DirichletTable& t) {
  Json rows = Json::array();
  for (auto [n, v] : t.entries) rows.push_back({n, num(v)});
  return {{"q", t.q}, {"p", num(t.p)}, {"entries", rows}, {"best_n", t.best_n}, {"best_ratio", num(t.best_ratio)}};
}

Json to_json(const DecayRow& r) {
  return {{"q", r.q},
          {"method", to_string(r.method)},
          {"gamma1_hat", num(r.gamma1_hat)},
          {"dirichlet_best", num(r.dirichlet_best)},
          {"gamma1_hat_log_q", num(r.scaled)},
          {"beta_hat", num(r.beta_hat)},
          {"witness", to_json(r.witness)}};
}

Json to_json(const Hypotheses& h) {
  return {{"cond_c", h.cond_c},
          {"concentr", h.concentr},
          {"c_cond_max", num(h.c_cond_max)},
          {"c_concentr_max", num(h.c_concentr_max)},
          {"weakened", h.weakened}};
}

Json to_json(const RoundingTrial& t) {
  return {{"spectrum_size", t.spectrum.size()},
          {"at_point_margin", num(t.at_point_margin)},
          {"mean_dev", num(t.mean_dev)},
          {"success", t.success}};
}

Json to_json(const MonteCarloReport& r) {
  Json q = Json::array();
  for (double v : r.mean_dev_quantiles) q.push_back(num(v));
  return {{"q", r.q},
          {"p", num(r.p)},
          {"epsilon", num(r.epsilon)},
          {"trials", r.trials},
          {"seed", r.seed},
          {"successes", r.successes},
          {"frequency", num(r.frequency)},
          {"mean_at_point_margin", num(r.mean_at_point_margin)},
          {"mean_dev_quantiles", q}};
}

Json to_json(const MomentReport& r) {
  return {{"p", num(r.p)},
          {"sigma", num(r.sigma)},
          {"empirical_moment", num(r.empirical_moment)},
          {"normalizer", num(r.normalizer)},
          {"ratio", num(r.ratio)},
          {"trials", r.trials}};
}

Json to_json(const IntervalSet& e) {
  Json a = Json::array();
  for (auto [lo, hi] : e.intervals()) a.push_back({num(lo), num(hi)});
  return {{"intervals", a}};
}

IntervalSet interval_set_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("intervals") || !j["intervals"].is_array()) {
    throw DomainError("E: expected {\"intervals\": [[lo, hi], ...]}");
  }
  std::vector<std::pair<double, double>> iv;
  for (const auto& pair : j["intervals"]) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
      throw DomainError("E: each interval must be a [lo, hi] pair of numbers");
    }
    iv.emplace_back(pair[0].get<double>(), pair[1].get<double>());
  }
  return IntervalSet(std::move(iv));
}

Json to_json(const FractionResult& f) {
  return {{"a", f.a},
          {"q", f.q},
          {"center", num(f.center)},
          {"coverage", num(f.coverage)},
          {"below_threshold", f.below_threshold}};
}

Json to_json(const Plan& p) {
  return {{"a", p.a},
          {"q", p.q},
          {"b", p.b},
          {"theta", num(p.theta)},
          {"delta", num(p.delta)},
          {"n", p.n},
          {"nu", p.nu},
          {"shifted", p.shifted},
          {"R", to_json(p.R)},
          {"coverage", num(p.coverage)},
          {"below_threshold", p.below_threshold},
          {"predicted_ratio", num(p.predicted_ratio)},
          {"target_ratio", num(p.target_ratio)},
          {"witness_method", to_string(p.witness_method)},
          {"pathway", p.pathway},
          {"q_spectrum_size", p.q_spectrum_size},
          {"q_min_gap", p.q_min_gap},
          {"r_layer_gap", p.r_layer_gap},
          {"d_layer_gap", p.d_layer_gap}};
}

Json to_json(const TorusReport& r) {
  Json j = {{"int_E", num(r.int_E)},
            {"int_T", num(r.int_T)},
            {"ratio", num(r.ratio)},
            {"mesh", r.mesh},
            {"quadrature_error_est", num(r.quadrature_error_est)}};
  j["parseval_rel_error"] = r.parseval_rel_error >= 0.0 ? num(r.parseval_rel_error) : Json(nullptr);
  return j;
}

}  // namespace concentra
