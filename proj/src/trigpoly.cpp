#include "concentra/trigpoly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <unsupported/Eigen/FFT>

namespace concentra {

namespace {

// Unscaled inverse DFT: out_k = sum_j in_j e(jk/n).
// kissfft faults on length 1, where both transforms are the identity.
std::vector<Complex> inverse_dft(const std::vector<Complex>& in) {
  if (in.size() < 2) return in;
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  std::vector<Complex> out;
  fft.inv(out, in);
  return out;
}

// Unscaled forward DFT: out_j = sum_k in_k e(-jk/n).
std::vector<Complex> forward_dft(const std::vector<Complex>& in) {
  if (in.size() < 2) return in;
  Eigen::FFT<double> fft;
  std::vector<Complex> out;
  fft.fwd(out, in);
  return out;
}

}  // namespace

Complex unit_root(double x) {
  const double r = x - std::floor(x);
  return {std::cos(kTwoPi * r), std::sin(kTwoPi * r)};
}

std::int64_t gcd(std::int64_t a, std::int64_t b) {
  return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b);
}

std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
  std::int64_t r0 = m, r1 = ((a % m) + m) % m;
  std::int64_t s0 = 0, s1 = 1;
  while (r1 != 0) {
    const std::int64_t quot = r0 / r1;
    std::tie(r0, r1) = std::pair{r1, r0 - quot * r1};
    std::tie(s0, s1) = std::pair{s1, s0 - quot * s1};
  }
  if (r0 != 1) {
    throw DomainError("inverse_mod: " + std::to_string(a) + " is not a unit mod " +
                      std::to_string(m));
  }
  return ((s0 % m) + m) % m;
}

// ---------------------------------------------------------------- Spectrum

Spectrum::Spectrum(std::vector<std::int64_t> freqs, std::int64_t degree_bound)
    : freqs_(std::move(freqs)), degree_bound_(degree_bound) {
  if (degree_bound_ < 1) throw DomainError("Spectrum: degree_bound must be >= 1");
  std::sort(freqs_.begin(), freqs_.end());
  if (std::adjacent_find(freqs_.begin(), freqs_.end()) != freqs_.end()) {
    throw DomainError("Spectrum: duplicate frequency");
  }
  if (!freqs_.empty() && (freqs_.front() < 0 || freqs_.back() >= degree_bound_)) {
    throw DomainError("Spectrum: frequency outside [0, degree_bound)");
  }
}

Spectrum Spectrum::interval(std::int64_t n, std::int64_t degree_bound) {
  std::vector<std::int64_t> f(static_cast<std::size_t>(n));
  std::iota(f.begin(), f.end(), std::int64_t{0});
  return Spectrum(std::move(f), degree_bound);
}

Spectrum Spectrum::from_mask(std::uint64_t mask, int q) {
  std::vector<std::int64_t> f;
  for (int h = 0; h < q; ++h) {
    if (mask >> h & 1U) f.push_back(h);
  }
  return Spectrum(std::move(f), q);
}

bool Spectrum::contains(std::int64_t h) const {
  return std::binary_search(freqs_.begin(), freqs_.end(), h);
}

std::int64_t Spectrum::min_gap() const {
  if (freqs_.size() < 2) return 0;
  std::int64_t g = freqs_[1] - freqs_[0];
  for (std::size_t i = 2; i < freqs_.size(); ++i) g = std::min(g, freqs_[i] - freqs_[i - 1]);
  return g;
}

std::uint64_t Spectrum::to_mask() const {
  if (degree_bound_ > 64) throw DomainError("Spectrum::to_mask: degree_bound > 64");
  std::uint64_t m = 0;
  for (auto h : freqs_) m |= std::uint64_t{1} << h;
  return m;
}

// --------------------------------------------------------------- CoeffPoly

CoeffPoly::CoeffPoly(CVector coeffs, bool nonneg) : coeffs_(std::move(coeffs)), nonneg_(nonneg) {
  if (nonneg_) {
    for (Eigen::Index h = 0; h < coeffs_.size(); ++h) {
      if (coeffs_[h].imag() != 0.0 || coeffs_[h].real() < 0.0) {
        throw DomainError("CoeffPoly: nonneg flag set but coefficient " + std::to_string(h) +
                          " is not a nonnegative real");
      }
    }
  }
}

CoeffPoly CoeffPoly::real(std::span<const double> coeffs) {
  CVector c(static_cast<Eigen::Index>(coeffs.size()));
  bool nonneg = true;
  for (std::size_t h = 0; h < coeffs.size(); ++h) {
    c[static_cast<Eigen::Index>(h)] = coeffs[h];
    nonneg = nonneg && coeffs[h] >= 0.0;
  }
  return CoeffPoly(std::move(c), nonneg);
}

Eigen::Index CoeffPoly::degree() const {
  for (Eigen::Index h = coeffs_.size() - 1; h >= 0; --h) {
    if (coeffs_[h] != Complex{}) return h;
  }
  return -1;
}

double CoeffPoly::max_abs() const {
  return coeffs_.size() == 0 ? 0.0 : coeffs_.cwiseAbs().maxCoeff();
}

double CoeffPoly::abs_sum() const { return coeffs_.cwiseAbs().sum(); }

// -------------------------------------------------------------------- Grid

Grid::Grid(std::int64_t q_, bool shifted_) : q(q_), shifted(shifted_) {
  if (q < 1) throw DomainError("Grid: q must be >= 1");
}

double Grid::point(std::int64_t k) const {
  return shifted ? static_cast<double>(2 * k + 1) / static_cast<double>(2 * q)
                 : static_cast<double>(k) / static_cast<double>(q);
}

// -------------------------------------------------------------- evaluation

Complex dirichlet_value(std::int64_t n, double x) {
  if (n < 1) throw DomainError("dirichlet_value: n must be >= 1");
  const double r = x - std::floor(x);
  if (r == 0.0) return {static_cast<double>(n), 0.0};
  const double nd = static_cast<double>(n);
  // sin(pi n r) with n r reduced mod 2.
  const double nr = std::fmod(nd * r, 2.0);
  const double amp = std::sin(kPi * nr) / std::sin(kPi * r);
  const double phase = std::fmod((nd - 1.0) * r, 2.0);
  return std::polar(amp, kPi * phase);
}

CoeffPoly to_coeffs(const Spectrum& s) {
  CVector c = CVector::Zero(s.degree_bound());
  for (auto h : s.freqs()) c[h] = 1.0;
  return CoeffPoly(std::move(c), true);
}

Complex eval_point(const CoeffPoly& p, double x) {
  Complex acc{};
  for (Eigen::Index h = 0; h < p.size(); ++h) {
    if (p.coeffs()[h] != Complex{}) acc += p.coeffs()[h] * unit_root(static_cast<double>(h) * x);
  }
  return acc;
}

Complex eval_point(const Spectrum& s, double x) {
  Complex acc{};
  for (auto h : s.freqs()) acc += unit_root(static_cast<double>(h) * x);
  return acc;
}

GridValues eval_grid(const CoeffPoly& p, const Grid& g) {
  const std::int64_t q = g.q;
  std::vector<Complex> folded(static_cast<std::size_t>(q));
  for (Eigen::Index h = 0; h < p.size(); ++h) {
    Complex a = p.coeffs()[h];
    if (a == Complex{}) continue;
    if (g.shifted) a *= unit_root(static_cast<double>(h % (2 * q)) / static_cast<double>(2 * q));
    folded[static_cast<std::size_t>(h % q)] += a;
  }
  const auto v = inverse_dft(folded);
  GridValues out{g, CVector(q)};
  for (std::int64_t k = 0; k < q; ++k) out.values[k] = v[static_cast<std::size_t>(k)];
  return out;
}

GridValues eval_grid(const Spectrum& s, const Grid& g) { return eval_grid(to_coeffs(s), g); }

GridValues eval_grid_direct(const CoeffPoly& p, const Grid& g) {
  const std::int64_t q = g.q;
  const std::int64_t modulus = g.shifted ? 2 * q : q;
  GridValues out{g, CVector::Zero(q)};
  for (std::int64_t k = 0; k < q; ++k) {
    const std::int64_t node = g.shifted ? 2 * k + 1 : k;
    Complex acc{};
    for (Eigen::Index h = 0; h < p.size(); ++h) {
      const Complex a = p.coeffs()[h];
      if (a == Complex{}) continue;
      const std::int64_t r = (h % modulus) * node % modulus;
      acc += a * std::polar(1.0, kTwoPi * static_cast<double>(r) / static_cast<double>(modulus));
    }
    out.values[k] = acc;
  }
  return out;
}

GridValues eval_grid_direct(const Spectrum& s, const Grid& g) {
  return eval_grid_direct(to_coeffs(s), g);
}

CoeffPoly fold_power(const CoeffPoly& p, int L, std::int64_t q) {
  if (L < 1) throw DomainError("fold_power: L must be >= 1");
  const GridValues gv = eval_grid(p, Grid(q));
  std::vector<Complex> powered(static_cast<std::size_t>(q));
  for (std::int64_t k = 0; k < q; ++k) {
    Complex v{1.0, 0.0};
    for (int i = 0; i < L; ++i) v *= gv.values[k];
    powered[static_cast<std::size_t>(k)] = v;
  }
  auto c = forward_dft(powered);
  CVector coeffs(q);
  for (std::int64_t j = 0; j < q; ++j) coeffs[j] = c[static_cast<std::size_t>(j)] / static_cast<double>(q);
  if (!p.nonneg()) return CoeffPoly(std::move(coeffs), false);

  // Folded convolution powers of nonnegative inputs are nonnegative; what
  // remains below the threshold is transform noise.
  const double dust = 1e-9 * coeffs.cwiseAbs().maxCoeff();
  for (std::int64_t j = 0; j < q; ++j) {
    double re = coeffs[j].real();
    if (std::abs(re) < dust) re = 0.0;
    if (re < 0.0) throw std::logic_error("fold_power: negative coefficient from nonneg input");
    coeffs[j] = re;
  }
  return CoeffPoly(std::move(coeffs), true);
}

Spectrum dilate(const Spectrum& s, std::int64_t nu, std::int64_t new_bound) {
  if (nu < 1) throw DomainError("dilate: nu must be >= 1");
  if (!s.empty() && nu * s.max_freq() >= new_bound) {
    throw DomainError("dilate: nu * max(H) must stay below the new bound");
  }
  std::vector<std::int64_t> f;
  f.reserve(s.size());
  for (auto h : s.freqs()) f.push_back(nu * h);
  return Spectrum(std::move(f), new_bound);
}

Spectrum complement(const Spectrum& s) {
  std::vector<std::int64_t> f;
  for (std::int64_t h = 0; h < s.degree_bound(); ++h) {
    if (!s.contains(h)) f.push_back(h);
  }
  return Spectrum(std::move(f), s.degree_bound());
}

Spectrum dilate_mod(const Spectrum& s, std::int64_t c) {
  const std::int64_t q = s.degree_bound();
  std::vector<std::int64_t> f;
  f.reserve(s.size());
  const std::int64_t cm = ((c % q) + q) % q;
  for (auto h : s.freqs()) f.push_back(h * cm % q);
  return Spectrum(std::move(f), q);
}

Spectrum translate_mod(const Spectrum& s, std::int64_t d) {
  const std::int64_t q = s.degree_bound();
  std::vector<std::int64_t> f;
  f.reserve(s.size());
  const std::int64_t dm = ((d % q) + q) % q;
  for (auto h : s.freqs()) f.push_back((h + dm) % q);
  return Spectrum(std::move(f), q);
}

}  // namespace concentra
