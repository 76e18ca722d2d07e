#include "concentra/discrete.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <thread>

#include "concentra/rng.hpp"

namespace concentra {

namespace {

// |z|^p from |z|^2 without pow for the common integer exponents.
struct PowerOfModulus {
  double p;
  int mode;
  explicit PowerOfModulus(double p_) : p(p_), mode(p_ == 1.0 ? 1 : p_ == 2.0 ? 2 : p_ == 4.0 ? 4 : 0) {}
  double operator()(double norm2) const {
    switch (mode) {
      case 1: return std::sqrt(norm2);
      case 2: return norm2;
      case 4: return norm2 * norm2;
      default: return std::pow(norm2, 0.5 * p);
    }
  }
};

std::vector<Complex> root_table(std::int64_t n) {
  std::vector<Complex> e(static_cast<std::size_t>(n));
  for (std::int64_t j = 0; j < n; ++j) {
    e[static_cast<std::size_t>(j)] = std::polar(1.0, kTwoPi * static_cast<double>(j) / static_cast<double>(n));
  }
  return e;
}

std::vector<std::int64_t> units_up_to(std::int64_t modulus, std::int64_t limit, bool odd_only) {
  std::vector<std::int64_t> u;
  for (std::int64_t c = 1; c <= limit; ++c) {
    if (odd_only && c % 2 == 0) continue;
    if (gcd(c, modulus) == 1) u.push_back(c);
  }
  return u;
}

// Grid values v_k = sum_{h in mask} e(hk/N) for k = 0..N/2 kept up to date
// under single-bit flips; real coefficients give |v_{N-k}| = |v_k|.
class HalfGrid {
 public:
  explicit HalfGrid(std::int64_t N) : N_(N), half_(N / 2), roots_(root_table(N)), v_(half_ + 1) {}

  void reset(std::uint64_t mask) {
    std::fill(v_.begin(), v_.end(), Complex{});
    for (std::int64_t h = 0; h < N_; ++h) {
      if (mask >> h & 1U) flip(h, +1.0);
    }
  }

  void flip(std::int64_t h, double sign) {
    std::int64_t idx = 0;
    for (std::int64_t k = 0; k <= half_; ++k) {
      v_[k] += sign * roots_[static_cast<std::size_t>(idx)];
      idx += h;
      if (idx >= N_) idx -= N_;
    }
  }

  const std::vector<Complex>& values() const { return v_; }
  std::int64_t half() const { return half_; }
  std::int64_t N() const { return N_; }
  // Multiplicity of index k when summing over the whole grid.
  double multiplicity(std::int64_t k) const { return (k == 0 || 2 * k == N_) ? 1.0 : 2.0; }

 private:
  std::int64_t N_;
  std::int64_t half_;
  std::vector<Complex> roots_;
  std::vector<Complex> v_;
};

struct Candidate {
  double score;
  std::uint64_t mask;
};

struct WorkerResult {
  double best = 0.0;
  std::vector<Candidate> ties;
  std::int64_t evaluations = 0;
};

constexpr double kTieTol = 1e-9;

void keep_candidate(WorkerResult& r, double score, std::uint64_t mask) {
  if (score > r.best) {
    r.best = score;
    if (r.ties.size() > 4096) {
      std::erase_if(r.ties, [&](const Candidate& c) { return c.score < r.best * (1.0 - kTieTol); });
    }
  }
  if (score >= r.best * (1.0 - kTieTol) && score > 0.0) r.ties.push_back({score, mask});
}

// Gray-code walk over the free bits; `score` maps the current HalfGrid to a
// number.  The walk is split into contiguous index ranges, one per worker.
template <class Score>
WorkerResult gray_walk(std::int64_t N, std::uint64_t base, const std::vector<std::int64_t>& free_bits,
                       int workers, const Score& score) {
  const std::uint64_t total = std::uint64_t{1} << free_bits.size();
  workers = std::max(1, std::min<int>(workers, static_cast<int>(std::min<std::uint64_t>(total, 64))));
  auto expand = [&](std::uint64_t g) {
    std::uint64_t m = base;
    for (std::size_t b = 0; b < free_bits.size(); ++b) {
      if (g >> b & 1U) m |= std::uint64_t{1} << free_bits[b];
    }
    return m;
  };
  std::vector<WorkerResult> results(static_cast<std::size_t>(workers));
  auto run = [&](int w) {
    const std::uint64_t i0 = total / workers * w + std::min<std::uint64_t>(w, total % workers);
    const std::uint64_t i1 = i0 + total / workers + (static_cast<std::uint64_t>(w) < total % workers ? 1 : 0);
    HalfGrid grid(N);
    std::uint64_t mask = expand(i0 ^ (i0 >> 1));
    grid.reset(mask);
    WorkerResult& r = results[static_cast<std::size_t>(w)];
    for (std::uint64_t i = i0; i < i1; ++i) {
      if (i != i0) {
        const int b = std::countr_zero(i);
        const std::int64_t h = free_bits[static_cast<std::size_t>(b)];
        const bool now_set = !(mask >> h & 1U);
        mask ^= std::uint64_t{1} << h;
        if ((i & 0xFFFF) == 0) {
          grid.reset(mask);  // resync against accumulated rounding
        } else {
          grid.flip(h, now_set ? 1.0 : -1.0);
        }
      }
      keep_candidate(r, score(grid), mask);
      ++r.evaluations;
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  WorkerResult merged;
  for (auto& r : results) {
    merged.best = std::max(merged.best, r.best);
    merged.evaluations += r.evaluations;
  }
  for (auto& r : results) {
    for (const auto& c : r.ties) {
      if (c.score >= merged.best * (1.0 - kTieTol)) merged.ties.push_back(c);
    }
  }
  return merged;
}

// All translates of all unit dilates of the candidate masks.
std::set<std::uint64_t> orbit_closure(const std::vector<Candidate>& cands, std::int64_t N,
                                      const std::vector<std::int64_t>& units) {
  std::set<std::uint64_t> seen_base, out;
  for (const auto& c : cands) {
    if (!seen_base.insert(c.mask).second) continue;
    const Spectrum H = Spectrum::from_mask(c.mask, static_cast<int>(N));
    for (auto u : units) {
      const Spectrum D = dilate_mod(H, u);
      for (std::int64_t d = 0; d < N; ++d) out.insert(translate_mod(D, d).to_mask());
    }
  }
  return out;
}

// The smallest spectrum whose reference value is within kArbitrationTol of
// the best wins.  An exact-max rule would let last-bit rounding noise pick
// among the members of one symmetry orbit.
template <class Reference>
std::pair<Spectrum, double> arbitrate(const std::set<std::uint64_t>& masks, int N, const Reference& ref) {
  std::vector<std::pair<Spectrum, double>> scored;
  double top = -1.0;
  for (auto m : masks) {
    Spectrum s = Spectrum::from_mask(m, N);
    const double v = ref(s);
    top = std::max(top, v);
    scored.emplace_back(std::move(s), v);
  }
  std::pair<Spectrum, double> best{Spectrum(), -1.0};
  bool found = false;
  for (auto& [s, v] : scored) {
    if (v < top * (1.0 - kArbitrationTol)) continue;
    if (!found || s < best.first) best = {s, v};
    found = true;
  }
  return best;
}

std::vector<std::int64_t> all_units(std::int64_t N, bool odd_only) {
  return units_up_to(N, N - 1, odd_only);
}

}  // namespace

const char* to_string(SearchMethod m) {
  switch (m) {
    case SearchMethod::Exhaustive: return "exhaustive";
    case SearchMethod::Heuristic: return "heuristic";
    case SearchMethod::Dirichlet: return "dirichlet";
  }
  return "?";
}

double ratio(const GridValues& values, double p, std::int64_t target) {
  const std::int64_t q = values.grid.q;
  if (target < 1 || target >= q) throw DomainError("ratio: target must lie in [1, q)");
  double denom = 0.0;
  for (std::int64_t k = 0; k < q; ++k) denom += std::pow(std::abs(values.values[k]), p);
  if (denom == 0.0) return 0.0;
  return 2.0 * std::pow(std::abs(values.values[target]), p) / denom;
}

ConcentrationReport exact_gamma_sharp(int q, double p, const SearchConfig& cfg) {
  if (q < 2) throw DomainError("exact_gamma_sharp: q must be >= 2");
  if (!(p > 0.0)) throw DomainError("exact_gamma_sharp: p must be positive");
  if (q > cfg.exhaustive_cap || q > 62) {
    throw BudgetError("exact_gamma_sharp: q = " + std::to_string(q) + " exceeds the exhaustive cap " +
                      std::to_string(cfg.exhaustive_cap) + "; use heuristic_gamma_sharp");
  }
  const PowerOfModulus pw(p);
  std::vector<std::int64_t> free_bits;
  std::uint64_t base = 0;
  std::vector<std::int64_t> targets{1};
  if (cfg.prune) {
    base = 1;
    for (std::int64_t h = 1; h < q; ++h) free_bits.push_back(h);
    targets = units_up_to(q, q / 2, false);
  } else {
    for (std::int64_t h = 0; h < q; ++h) free_bits.push_back(h);
  }
  auto score = [&](const HalfGrid& g) {
    const auto& v = g.values();
    double denom = 0.0;
    for (std::int64_t k = 0; k <= g.half(); ++k) denom += g.multiplicity(k) * pw(std::norm(v[k]));
    if (denom == 0.0) return 0.0;
    double num = 0.0;
    for (auto c : targets) num = std::max(num, pw(std::norm(v[c])));
    return 2.0 * num / denom;
  };
  const WorkerResult walk = gray_walk(q, base, free_bits, cfg.workers, score);
  const auto closure = orbit_closure(walk.ties, q, all_units(q, false));
  auto reference = [&](const Spectrum& s) { return ratio(eval_grid_direct(s, Grid(q)), p, 1); };
  auto [witness, value] = arbitrate(closure, q, reference);

  ConcentrationReport out;
  out.q = q;
  out.p = p;
  out.target = 1;
  out.ratio = value;
  out.spectrum = witness;
  out.method = SearchMethod::Exhaustive;
  out.evaluations = walk.evaluations;
  return out;
}

namespace {

double star_value(const std::vector<double>& a, std::int64_t q, std::int64_t target, double K,
                  double* s_odd_out = nullptr, double* s_even_out = nullptr) {
  double s_odd = 0.0, s_even = 0.0;
  for (std::int64_t j = 0; j < 2 * q; ++j) (j % 2 ? s_odd : s_even) += a[static_cast<std::size_t>(j)];
  if (s_odd_out) *s_odd_out = s_odd;
  if (s_even_out) *s_even_out = s_even;
  if (s_odd == 0.0) return 0.0;
  const double lead = 2.0 * a[static_cast<std::size_t>(target)];
  double g = lead / s_odd;
  if (s_even > 0.0) g = std::min(g, K * lead / s_even);
  return g;
}

std::vector<double> star_moduli(const Spectrum& s, double p) {
  const std::int64_t N = s.degree_bound();
  const GridValues gv = eval_grid_direct(s, Grid(N));
  std::vector<double> a(static_cast<std::size_t>(N));
  for (std::int64_t j = 0; j < N; ++j) a[static_cast<std::size_t>(j)] = std::pow(std::abs(gv.values[j]), p);
  return a;
}

}  // namespace

StarReport exact_gamma_star(int q, double p, double K, const SearchConfig& cfg) {
  if (q < 1) throw DomainError("exact_gamma_star: q must be >= 1");
  if (!(p > 0.0)) throw DomainError("exact_gamma_star: p must be positive");
  if (!(K > 0.0)) throw DomainError("exact_gamma_star: K must be positive");
  if (q > cfg.star_cap || 2 * q > 62) {
    throw BudgetError("exact_gamma_star: q = " + std::to_string(q) + " exceeds the cap " +
                      std::to_string(cfg.star_cap));
  }
  const std::int64_t N = 2 * q;
  const PowerOfModulus pw(p);
  std::vector<std::int64_t> free_bits;
  std::uint64_t base = 0;
  std::vector<std::int64_t> targets{1};
  if (cfg.prune) {
    base = 1;
    for (std::int64_t h = 1; h < N; ++h) free_bits.push_back(h);
    targets = units_up_to(N, q, true);
  } else {
    for (std::int64_t h = 0; h < N; ++h) free_bits.push_back(h);
  }
  auto score = [&](const HalfGrid& g) {
    const auto& v = g.values();
    double s_odd = 0.0, s_even = 0.0;
    for (std::int64_t j = 0; j <= g.half(); ++j) {
      (j % 2 ? s_odd : s_even) += g.multiplicity(j) * pw(std::norm(v[j]));
    }
    if (s_odd == 0.0) return 0.0;
    double lead = 0.0;
    for (auto c : targets) lead = std::max(lead, 2.0 * pw(std::norm(v[c])));
    double gval = lead / s_odd;
    if (s_even > 0.0) gval = std::min(gval, K * lead / s_even);
    return gval;
  };
  const WorkerResult walk = gray_walk(N, base, free_bits, cfg.workers, score);
  const auto closure = orbit_closure(walk.ties, N, all_units(N, true));
  auto reference = [&](const Spectrum& s) { return star_value(star_moduli(s, p), q, 1, K); };
  auto [witness, value] = arbitrate(closure, static_cast<int>(N), reference);

  StarReport out;
  out.q = q;
  out.p = p;
  out.K = K;
  out.ratio_star = std::max(value, 0.0);
  out.spectrum = witness;
  out.method = SearchMethod::Exhaustive;
  out.evaluations = walk.evaluations;
  out.cond_K_ok = star_conditions_hold(out);
  return out;
}

bool star_conditions_hold(const StarReport& r, double rel_tol) {
  if (r.spectrum.empty()) return r.ratio_star == 0.0;
  const auto a = star_moduli(r.spectrum, r.p);
  double s_odd = 0.0, s_even = 0.0;
  star_value(a, r.q, 1, r.K, &s_odd, &s_even);
  const double lead = 2.0 * a[1];
  const double slack = 1.0 + rel_tol;
  return lead * slack >= r.ratio_star * s_odd && lead * slack >= r.ratio_star / r.K * s_even;
}

DirichletTable dirichlet_table(std::int64_t q, double p) {
  if (q < 2) throw DomainError("dirichlet_table: q must be >= 2");
  DirichletTable t;
  t.q = q;
  t.p = p;
  std::vector<double> denom_sin(static_cast<std::size_t>(q));
  for (std::int64_t k = 1; k < q; ++k) denom_sin[k] = std::sin(kPi * static_cast<double>(k) / static_cast<double>(q));
  for (std::int64_t n = 1; n < q; ++n) {
    double total = std::pow(static_cast<double>(n), p);
    double at_one = 0.0;
    for (std::int64_t k = 1; k < q; ++k) {
      const std::int64_t r = n * k % q;
      const double a = std::pow(std::abs(std::sin(kPi * static_cast<double>(r) / static_cast<double>(q)) /
                                         denom_sin[k]),
                                p);
      if (k == 1) at_one = a;
      total += a;
    }
    const double value = 2.0 * at_one / total;
    t.entries.emplace_back(n, value);
    if (value > t.best_ratio) {
      t.best_ratio = value;
      t.best_n = n;
    }
  }
  return t;
}

namespace {

// Steepest-ascent single-bit-flip climber scoring each spectrum at its best
// unit target.
class Climber {
 public:
  Climber(std::int64_t q, double p) : q_(q), half_(q / 2), pw_(p), roots_(root_table(q)) {
    targets_ = units_up_to(q, half_, false);
  }

  struct Outcome {
    std::vector<char> member;
    double score = 0.0;
    std::int64_t target = 1;
    std::int64_t evaluations = 0;
  };

  Outcome climb(std::vector<char> member) const {
    std::vector<Complex> v(static_cast<std::size_t>(half_ + 1));
    std::int64_t size = 0;
    for (std::int64_t h = 0; h < q_; ++h) {
      if (member[h]) {
        add(v, h, 1.0);
        ++size;
      }
    }
    std::vector<double> norm(v.size()), mult(v.size());
    for (std::int64_t k = 0; k <= half_; ++k) mult[k] = (k == 0 || 2 * k == q_) ? 1.0 : 2.0;
    Outcome out;
    auto current = evaluate(v);
    for (std::int64_t step = 0; step < 4 * q_; ++step) {
      for (std::int64_t k = 0; k <= half_; ++k) norm[k] = std::norm(v[k]);
      double best = current.first;
      std::int64_t best_h = -1;
      std::int64_t best_target = current.second;
      for (std::int64_t h = 0; h < q_; ++h) {
        if (member[h] && size == 1) continue;
        const double s = member[h] ? -1.0 : 1.0;
        double denom = 0.0;
        std::int64_t idx = 0;
        for (std::int64_t k = 0; k <= half_; ++k) {
          const Complex& e = roots_[static_cast<std::size_t>(idx)];
          const double n2 = norm[k] + 1.0 + 2.0 * s * (v[k].real() * e.real() + v[k].imag() * e.imag());
          denom += mult[k] * pw_(std::max(n2, 0.0));
          idx += h;
          if (idx >= q_) idx -= q_;
        }
        double num = 0.0;
        std::int64_t tgt = 1;
        for (auto c : targets_) {
          const Complex& e = roots_[static_cast<std::size_t>(h * c % q_)];
          const double n2 = norm[c] + 1.0 + 2.0 * s * (v[c].real() * e.real() + v[c].imag() * e.imag());
          const double a = pw_(std::max(n2, 0.0));
          if (a > num) {
            num = a;
            tgt = c;
          }
        }
        ++out.evaluations;
        const double value = denom > 0.0 ? 2.0 * num / denom : 0.0;
        if (value > best * (1.0 + 1e-12)) {
          best = value;
          best_h = h;
          best_target = tgt;
        }
      }
      if (best_h < 0) break;
      const double s = member[best_h] ? -1.0 : 1.0;
      member[best_h] = !member[best_h];
      size += member[best_h] ? 1 : -1;
      add(v, best_h, s);
      current = {best, best_target};
    }
    out.member = std::move(member);
    out.score = current.first;
    out.target = current.second;
    return out;
  }

 private:
  void add(std::vector<Complex>& v, std::int64_t h, double s) const {
    std::int64_t idx = 0;
    for (std::int64_t k = 0; k <= half_; ++k) {
      v[k] += s * roots_[static_cast<std::size_t>(idx)];
      idx += h;
      if (idx >= q_) idx -= q_;
    }
  }

  std::pair<double, std::int64_t> evaluate(const std::vector<Complex>& v) const {
    double denom = 0.0;
    for (std::int64_t k = 0; k <= half_; ++k) {
      denom += ((k == 0 || 2 * k == q_) ? 1.0 : 2.0) * pw_(std::norm(v[k]));
    }
    double num = 0.0;
    std::int64_t tgt = 1;
    for (auto c : targets_) {
      const double a = pw_(std::norm(v[c]));
      if (a > num) {
        num = a;
        tgt = c;
      }
    }
    return {denom > 0.0 ? 2.0 * num / denom : 0.0, tgt};
  }

  std::int64_t q_;
  std::int64_t half_;
  PowerOfModulus pw_;
  std::vector<Complex> roots_;
  std::vector<std::int64_t> targets_;
};

}  // namespace

ConcentrationReport heuristic_gamma_sharp(int q, double p, int restarts, std::uint64_t seed,
                                          const SearchConfig& cfg) {
  if (q < 2) throw DomainError("heuristic_gamma_sharp: q must be >= 2");
  if (!(p > 0.0)) throw DomainError("heuristic_gamma_sharp: p must be positive");
  if (restarts < 0) throw DomainError("heuristic_gamma_sharp: restarts must be >= 0");
  const DirichletTable table = dirichlet_table(q, p);

  // Starting points: the best Dirichlet intervals, then random spectra.
  auto order = table.entries;
  std::stable_sort(order.begin(), order.end(), [](auto& a, auto& b) { return a.second > b.second; });
  std::vector<std::vector<char>> starts;
  const int n_seeds = std::min<int>(cfg.climb_seeds, static_cast<int>(order.size()));
  for (int i = 0; i < n_seeds; ++i) {
    std::vector<char> m(static_cast<std::size_t>(q), 0);
    for (std::int64_t h = 0; h < order[i].first; ++h) m[h] = 1;
    starts.push_back(std::move(m));
  }
  for (int r = 0; r < restarts; ++r) {
    auto rng = make_stream(seed, static_cast<std::uint64_t>(r));
    const double density = 0.05 + 0.55 * uniform01(rng);
    std::vector<char> m(static_cast<std::size_t>(q), 0);
    bool any = false;
    for (int h = 0; h < q; ++h) {
      m[h] = uniform01(rng) < density;
      any = any || m[h];
    }
    if (!any) m[0] = 1;
    starts.push_back(std::move(m));
  }

  const Climber climber(q, p);
  std::vector<Climber::Outcome> outcomes(starts.size());
  const int workers = std::max(1, std::min<int>(cfg.workers, static_cast<int>(starts.size())));
  auto run = [&](int w) {
    for (std::size_t i = static_cast<std::size_t>(w); i < starts.size(); i += static_cast<std::size_t>(workers)) {
      outcomes[i] = climber.climb(starts[i]);
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }

  std::size_t best = 0;
  std::int64_t evaluations = q - 1;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    evaluations += outcomes[i].evaluations;
    if (outcomes[i].score > outcomes[best].score) best = i;
  }

  ConcentrationReport out;
  out.q = q;
  out.p = p;
  out.target = 1;
  out.method = SearchMethod::Heuristic;
  out.evaluations = evaluations;
  out.spectrum = Spectrum::interval(table.best_n, q);
  out.ratio = table.best_ratio;
  if (!outcomes.empty()) {
    std::vector<std::int64_t> f;
    for (std::int64_t h = 0; h < q; ++h) {
      if (outcomes[best].member[h]) f.push_back(h);
    }
    // Move the winning target back to 1.
    const Spectrum climbed = dilate_mod(Spectrum(std::move(f), q), inverse_mod(outcomes[best].target, q));
    const double value = ratio(eval_grid(climbed, Grid(q)), p, 1);
    if (value > out.ratio) {
      out.ratio = value;
      out.spectrum = climbed;
    }
  }
  return out;
}

std::vector<DecayRow> gamma1_decay_scan(const std::vector<std::int64_t>& primes, const SearchConfig& budget) {
  if (!std::is_sorted(primes.begin(), primes.end())) {
    throw DomainError("gamma1_decay_scan: primes must be sorted ascending");
  }
  std::vector<DecayRow> rows;
  for (auto q : primes) {
    if (q < 3) throw DomainError("gamma1_decay_scan: q must be >= 3");
    DecayRow row;
    row.q = q;
    const DirichletTable table = dirichlet_table(q, 1.0);
    row.dirichlet_best = table.best_ratio;
    ConcentrationReport rep = q <= budget.exhaustive_cap
                                  ? exact_gamma_sharp(static_cast<int>(q), 1.0, budget)
                                  : heuristic_gamma_sharp(static_cast<int>(q), 1.0, budget.restarts, budget.seed, budget);
    row.method = rep.method;
    row.gamma1_hat = rep.ratio;
    row.witness = rep.spectrum;
    const double lq = std::log(static_cast<double>(q));
    row.scaled = row.gamma1_hat * lq;
    row.beta_hat = std::log(1.0 / row.gamma1_hat) / std::log(lq);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string decay_csv(const std::vector<DecayRow>& rows) {
  std::string out = "q,method,gamma1_hat,dirichlet_best,gamma1_hat_log_q,beta_hat\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%lld,%s,%.15g,%.15g,%.15g,%.15g\n", static_cast<long long>(r.q),
                  to_string(r.method), r.gamma1_hat, r.dirichlet_best, r.scaled, r.beta_hat);
    out += buf;
  }
  return out;
}

}  // namespace concentra
