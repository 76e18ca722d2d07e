// Taylor trigonometric polynomials on the torus and on cyclic grids.
//
// A polynomial is sum_h a_h e(h x) with e(x) = exp(2 pi i x) and h >= 0.
// Idempotents (0/1 coefficients) are carried as a Spectrum, general
// coefficient sequences as a CoeffPoly.  Grid evaluation folds frequencies
// modulo q and runs a q-point DFT.

#ifndef CONCENTRA_TRIGPOLY_HPP
#define CONCENTRA_TRIGPOLY_HPP

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace concentra {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 6.28318530717958647692;

/// Thrown when an argument lies outside an operation's domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Thrown when a request exceeds a configured search or work budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// e(x) = exp(2 pi i x), reduced mod 1 before the trig call.
Complex unit_root(double x);

/// Finite set of distinct nonnegative frequencies, sorted, all below
/// degree_bound.
class Spectrum {
 public:
  Spectrum() = default;
  /// Sorts the input; throws DomainError on duplicates, negatives or
  /// frequencies >= degree_bound.
  Spectrum(std::vector<std::int64_t> freqs, std::int64_t degree_bound);

  static Spectrum interval(std::int64_t n, std::int64_t degree_bound);
  static Spectrum from_mask(std::uint64_t mask, int q);

  const std::vector<std::int64_t>& freqs() const { return freqs_; }
  std::int64_t degree_bound() const { return degree_bound_; }
  std::size_t size() const { return freqs_.size(); }
  bool empty() const { return freqs_.empty(); }
  bool contains(std::int64_t h) const;
  std::int64_t max_freq() const { return freqs_.empty() ? -1 : freqs_.back(); }
  /// Smallest difference between consecutive frequencies; 0 for |H| < 2.
  std::int64_t min_gap() const;
  std::uint64_t to_mask() const;

  friend bool operator==(const Spectrum&, const Spectrum&) = default;
  friend auto operator<=>(const Spectrum& a, const Spectrum& b) {
    return a.freqs_ <=> b.freqs_;
  }

 private:
  std::vector<std::int64_t> freqs_;
  std::int64_t degree_bound_ = 1;
};

/// Dense coefficients a_0 .. a_{d-1}.  The nonneg flag marks the positive
/// definite class (every a_h real and >= 0).
class CoeffPoly {
 public:
  CoeffPoly() = default;
  /// Throws DomainError if nonneg is requested but violated.
  explicit CoeffPoly(CVector coeffs, bool nonneg = false);
  static CoeffPoly real(std::span<const double> coeffs);

  const CVector& coeffs() const { return coeffs_; }
  Eigen::Index size() const { return coeffs_.size(); }
  bool nonneg() const { return nonneg_; }
  /// Index of the last nonzero coefficient, -1 for the zero polynomial.
  Eigen::Index degree() const;
  double max_abs() const;
  double abs_sum() const;

 private:
  CVector coeffs_;
  bool nonneg_ = false;
};

/// G_q = {k/q} or, when shifted, G*_q = {(2k+1)/(2q)}.
struct Grid {
  std::int64_t q = 1;
  bool shifted = false;

  Grid() = default;
  Grid(std::int64_t q_, bool shifted_ = false);
  double point(std::int64_t k) const;
};

struct GridValues {
  Grid grid;
  CVector values;
};

/// D_n(x) = sum_{v<n} e(v x), evaluated in closed form.
Complex dirichlet_value(std::int64_t n, double x);

CoeffPoly to_coeffs(const Spectrum& s);

/// Direct summation sum_h a_h e(h x); reference oracle for eval_grid.
Complex eval_point(const CoeffPoly& p, double x);
Complex eval_point(const Spectrum& s, double x);

/// Values on a grid through a q-point DFT of the folded coefficients.
GridValues eval_grid(const CoeffPoly& p, const Grid& g);
GridValues eval_grid(const Spectrum& s, const Grid& g);

/// Values on a grid by direct summation with exact residue arithmetic
/// (phase of h*k reduced mod q before the trig call).  Slow, bit-stable.
GridValues eval_grid_direct(const CoeffPoly& p, const Grid& g);
GridValues eval_grid_direct(const Spectrum& s, const Grid& g);

/// The degree < q polynomial whose values on G_q are the pointwise L-th
/// power of the values of p.
CoeffPoly fold_power(const CoeffPoly& p, int L, std::int64_t q);

Spectrum dilate(const Spectrum& s, std::int64_t nu, std::int64_t new_bound);

/// {0..q-1} \ H with q = degree_bound.
Spectrum complement(const Spectrum& s);

/// (c H) mod q, q = degree_bound.
Spectrum dilate_mod(const Spectrum& s, std::int64_t c);
/// (H + d) mod q, q = degree_bound.
Spectrum translate_mod(const Spectrum& s, std::int64_t d);

std::int64_t gcd(std::int64_t a, std::int64_t b);
/// Inverse of a modulo m; throws DomainError when gcd(a, m) != 1.
std::int64_t inverse_mod(std::int64_t a, std::int64_t m);

}  // namespace concentra

#endif  // CONCENTRA_TRIGPOLY_HPP
