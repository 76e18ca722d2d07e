// Torus-level idempotents Q(t) = R(nu t) D_n(q t) that concentrate the L^p
// mass on a finite union of intervals, and quadrature to measure how well
// they do.

#ifndef CONCENTRA_CONCENTRATOR_HPP
#define CONCENTRA_CONCENTRATOR_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "concentra/discrete.hpp"
#include "concentra/trigpoly.hpp"

namespace concentra {

class IntervalSet {
 public:
  IntervalSet() = default;
  /// Sorts; throws DomainError on overlaps, empty input or endpoints
  /// outside [0, 1].
  explicit IntervalSet(std::vector<std::pair<double, double>> intervals);
  static IntervalSet full();

  const std::vector<std::pair<double, double>>& intervals() const { return intervals_; }
  bool symmetric() const { return symmetric_; }
  double measure() const;
  /// |[lo, hi] ∩ E| with [lo, hi] read modulo 1 (hi - lo <= 1).
  double overlap(double lo, double hi) const;

 private:
  std::vector<std::pair<double, double>> intervals_;
  bool symmetric_ = false;
};

struct FractionResult {
  std::int64_t a = 0;
  std::int64_t q = 0;
  /// a/q, or (2a+1)/(2q) on the shifted grid.
  double center = 0.0;
  double coverage = 0.0;
  bool below_threshold = true;
};

/// Smallest q in (q0, q_max] with gcd(nu, q) = 1, then smallest a, whose
/// window center +- theta/q^2 is covered by E to at least 1 - eta.
FractionResult find_fraction(const IntervalSet& E, double theta, double eta, std::int64_t q0,
                             std::int64_t q_max, std::int64_t nu = 1, bool shifted = false);

/// ceil((2 k'/eps)^(1/(p-1)) / delta) with k' = (pi/2)^p / (p-1).
std::int64_t choose_n(double p, double eps, double delta);

/// {nu h + q m : h in R, m < n}; rejects collisions.
Spectrum build_Q(const Spectrum& R, std::int64_t n, std::int64_t q, std::int64_t nu = 1);

enum class ProductMode { QPlus1, TwoQPlus1 };

/// {h1 + m h2} with m = q + 1 or 2q + 1; rejects collisions.
Spectrum build_S(const Spectrum& R1, const Spectrum& R2, std::int64_t q, ProductMode mode);

struct TorusReport {
  double int_E = 0.0;
  double int_T = 0.0;
  double ratio = 0.0;
  std::int64_t mesh = 0;
  double quadrature_error_est = 0.0;
  /// |int_T - |H|| / |H| for p = 2, otherwise negative.
  double parseval_rel_error = -1.0;
};

/// Composite Simpson on the FFT grid lo + j/M of every interval, M a power
/// of two with M >= mesh_per_unit_degree * (deg Q + 1).  The error estimate
/// is |I_M - I_{M/2}| summed over E and T.
TorusReport measure(const Spectrum& Q, const IntervalSet& E, double p, int mesh_per_unit_degree = 8);

struct Plan {
  std::int64_t a = 0;
  std::int64_t q = 0;
  std::int64_t b = 0;
  double theta = 0.0;
  double delta = 0.0;
  std::int64_t n = 0;
  std::int64_t nu = 1;
  bool shifted = false;
  Spectrum R;
  double coverage = 0.0;
  bool below_threshold = false;
  /// 2 |R(b/q)|^p / sum_k |R(k/q)|^p
  double predicted_ratio = 0.0;
  /// 0.9 predicted (1-eps)^2 / (1+eps), scaled by coverage when the
  /// fraction scan missed the threshold.
  double target_ratio = 0.0;
  SearchMethod witness_method = SearchMethod::Exhaustive;
  std::string pathway = "dirichlet-peak";
  std::int64_t q_spectrum_size = 0;
  std::int64_t q_min_gap = 0;
  /// Designed gaps per layer: nu * min_gap(R) between R(nu t) frequencies,
  /// q between consecutive D_n(q t) frequencies.
  std::int64_t r_layer_gap = 0;
  std::int64_t d_layer_gap = 0;
};

struct ConcentrateConfig {
  double theta = 0.5;
  double eta = 0.05;
  std::int64_t q0 = 10;
  std::int64_t q_max = 200;
  std::int64_t nu = 1;
  bool shifted = false;
  /// Run on non-symmetric E anyway (the guarantee assumes symmetry).
  bool allow_asymmetric = false;
  int mesh_per_unit_degree = 8;
  SearchConfig search;
};

struct EndToEnd {
  Plan plan;
  TorusReport report;
  Spectrum Q;
};

EndToEnd end_to_end(const IntervalSet& E, double p, double eps, const ConcentrateConfig& cfg = {});

}  // namespace concentra

#endif  // CONCENTRA_CONCENTRATOR_HPP
