// Concentration constants on Z_q: exhaustive and heuristic maximisation of
//   ratio(H) = 2 |f(1/q)|^p / sum_k |f(k/q)|^p,   f = sum_{h in H} e(h x),
// the shifted-grid analogue Gamma*_p(q, K), and the p = 1 decay table.
//
// Exhaustive search fixes 0 in H (translations preserve every grid modulus)
// and scores each spectrum at its best unit target c instead of enumerating
// the dilates c^-1 H separately.  Final witnesses are arbitrated on values
// recomputed by eval_grid_direct so that reported numbers are bit-stable:
// the witness is the lexicographically smallest spectrum whose recomputed
// value is within a relative kArbitrationTol of the best, and the reported
// ratio is that witness's value.

#ifndef CONCENTRA_DISCRETE_HPP
#define CONCENTRA_DISCRETE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "concentra/trigpoly.hpp"

namespace concentra {

inline constexpr double kArbitrationTol = 1e-12;

enum class SearchMethod { Exhaustive, Heuristic, Dirichlet };

const char* to_string(SearchMethod m);

struct ConcentrationReport {
  std::int64_t q = 0;
  double p = 0.0;
  std::int64_t target = 1;
  double ratio = 0.0;
  Spectrum spectrum;
  SearchMethod method = SearchMethod::Exhaustive;
  std::int64_t evaluations = 0;
};

struct StarReport {
  std::int64_t q = 0;
  double p = 0.0;
  double K = 0.0;
  double ratio_star = 0.0;
  bool cond_K_ok = false;
  Spectrum spectrum;  // frequencies in {0..2q-1}
  SearchMethod method = SearchMethod::Exhaustive;
  std::int64_t evaluations = 0;
};

struct SearchConfig {
  int exhaustive_cap = 26;
  int star_cap = 11;
  int workers = 1;
  int restarts = 8;
  std::uint64_t seed = 0;
  bool prune = true;
  /// Dirichlet seeds that get a full hill climb (best first).
  int climb_seeds = 16;
};

/// 2 |values[target]|^p / sum_k |values[k]|^p; 0 for a zero denominator.
double ratio(const GridValues& values, double p, std::int64_t target);

/// Exact maximum over all 2^q spectra at target 1.
ConcentrationReport exact_gamma_sharp(int q, double p, const SearchConfig& cfg = {});

ConcentrationReport heuristic_gamma_sharp(int q, double p, int restarts, std::uint64_t seed,
                                          const SearchConfig& cfg = {});

struct DirichletTable {
  std::int64_t q = 0;
  double p = 0.0;
  /// (n, ratio of {0..n-1}) for n = 1..q-1.
  std::vector<std::pair<std::int64_t, double>> entries;
  std::int64_t best_n = 1;
  double best_ratio = 0.0;
};

DirichletTable dirichlet_table(std::int64_t q, double p);

/// Exact Gamma*_p(q, K) over spectra in {0..2q-1}.
StarReport exact_gamma_star(int q, double p, double K, const SearchConfig& cfg = {});

/// Recomputes both defining inequalities of a StarReport from its witness.
bool star_conditions_hold(const StarReport& r, double rel_tol = 1e-9);

struct DecayRow {
  std::int64_t q = 0;
  SearchMethod method = SearchMethod::Exhaustive;
  double gamma1_hat = 0.0;
  double dirichlet_best = 0.0;
  double scaled = 0.0;    // gamma1_hat * log q
  double beta_hat = 0.0;  // log(1 / gamma1_hat) / log log q
  Spectrum witness;
};

std::vector<DecayRow> gamma1_decay_scan(const std::vector<std::int64_t>& primes,
                                        const SearchConfig& budget);

std::string decay_csv(const std::vector<DecayRow>& rows);

}  // namespace concentra

#endif  // CONCENTRA_DISCRETE_HPP
