// The series B(lambda, t), A(lambda, t) with tracked truncation remainders,
// their global minimisation over t, and the constant pipelines built on
// top of them.
//
//   B(l, t) = (pi t / sin pi t)^l (1 + 2 sum_{k>=1} |sin(k pi t) / (k pi t)|^l)
//   A(l, t) = sin(pi t)^-l sum_{k>=0} |sin((2k+1) pi t) / (2k+1)|^l
//
// Both series are summed directly.  When the crude integral tail estimate
// would need more than a few hundred thousand terms, the remainder is
// instead expanded through the Fourier series of |sin|^l and summed by
// parts; every step contributes to the reported tail_bound.

#ifndef CONCENTRA_BOUNDS_HPP
#define CONCENTRA_BOUNDS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace concentra {

enum class SeriesKind { B, A };

const char* to_string(SeriesKind k);
SeriesKind series_kind_from_string(const std::string& s);

struct SeriesEval {
  double lambda = 0.0;
  double t = 0.0;
  double value = 0.0;
  double tail_bound = 0.0;
  std::int64_t terms_used = 0;
  /// False when the term budget ran out before tail_bound <= tol.
  bool converged = true;
  /// "direct" or "fourier-tail".
  std::string method;
};

SeriesEval eval_B(double lambda, double t, double tol);
SeriesEval eval_A(double lambda, double t, double tol);
SeriesEval eval_series(SeriesKind kind, double lambda, double t, double tol);

/// Sum of the first `terms` terms (all positive), hence a lower bound.
double series_partial_lower(SeriesKind kind, double lambda, double t, int terms);

struct MinResult {
  double t_star = 0.0;
  double value = 0.0;
  double bracket_width = 0.0;
  int scan_points = 0;
  double series_tol = 0.0;
  double tail_bound = 0.0;
};

inline constexpr double kTMin = 1e-4;

/// Uniform scan of [kTMin, 1/2] followed by golden-section refinement of the
/// best bracket.  Ties go to the smallest t.  Scan points whose partial-sum
/// lower bound already exceeds the running minimum skip the full evaluation.
MinResult minimize_over_t(SeriesKind which, double lambda, int scan_points = 512,
                          double refine_tol = 1e-9);

/// Machine-checkable record attached to every reproduced constant.
struct Certificate {
  std::string method;
  int scan_points = 0;
  double series_tol = 0.0;
  double bracket_width = 0.0;
  double tail_bound = 0.0;
  std::vector<std::string> notes;
};

struct ConstantValue {
  double value = 0.0;
  /// Maximiser / minimiser location in the natural variable of the formula.
  double argument = 0.0;
  Certificate certificate;
};

/// sup_{x>0} 2 sin^2 x / (pi x); argument is x.
ConstantValue gamma2_sharp();

/// max_{0<t<1/2} 3 sin^4(pi t) / (pi^4 t^3); argument is t.
ConstantValue gamma4_sharp_lower();

struct GammaSharpLower {
  double value = 0.0;
  int best_L = 1;
  double t_star = 0.0;
  int L_evaluated = 0;
  Certificate certificate;
};

/// 2 max_{L <= L_max} 1 / min_t B(L p, t); for p <= 2 only L = 1 is used.
GammaSharpLower gamma_sharp_lower(double p, int L_max = 64);

struct AsymptoteResult {
  double kappa = 0.0;
  double value = 0.0;
  int grid_points = 0;
};

/// Step-0.005 grid on [0.05, 3.0].  The limit profile exp(pi^2 k^2) theta(k)
/// bottoms out near k = 0.225, so the grid has to reach below 0.3.
std::vector<double> default_kappa_grid();

/// min over kappa of B(lambda, kappa sqrt(6 / lambda)), refined around the
/// best grid point.
AsymptoteResult asymptote_scan(double lambda, const std::vector<double>& kappa_grid);

/// 1 / min_t A(p, t).
ConstantValue gamma_star_lower(double p);

/// gamma_star_lower(r)^(1/r), 1 < r < 2.
ConstantValue gamma1_certified_lower(double r);

/// Riemann zeta by direct summation plus Euler-Maclaurin tail.
double zeta(double lambda);

/// (pi/2)^l + 2 zeta(l) t^-l, which dominates B(l, t).
double K_upper(double lambda, double t);

}  // namespace concentra

#endif  // CONCENTRA_BOUNDS_HPP
