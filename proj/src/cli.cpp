#include "concentra/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace concentra::cli {

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t seed_of(const Json& inputs) {
  return inputs.contains("seed") ? inputs["seed"].get<std::uint64_t>() : 0;
}

Json merged(const std::string& command, const Json& overrides) {
  Json in = default_inputs(command);
  if (!overrides.is_null()) {
    if (!overrides.is_object()) throw DomainError("inputs must be a JSON object");
    for (auto it = overrides.begin(); it != overrides.end(); ++it) {
      if (!in.contains(it.key())) throw DomainError("unknown input '" + it.key() + "' for " + command);
      in[it.key()] = it.value();
    }
  }
  return in;
}

SearchConfig search_config(const Json& in, const Context& ctx) {
  SearchConfig cfg;
  cfg.workers = ctx.workers;
  if (in.contains("exhaustive_cap")) cfg.exhaustive_cap = in["exhaustive_cap"].get<int>();
  if (in.contains("restarts")) cfg.restarts = in["restarts"].get<int>();
  if (in.contains("prune")) cfg.prune = in["prune"].get<bool>();
  cfg.seed = seed_of(in);
  return cfg;
}

std::string fmt15(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

// ------------------------------------------------------------ constants

Json constant_row(const std::string& name, const std::string& paper_value, double computed,
                  const std::string& criterion, bool pass, Json certificate) {
  return {{"name", name},           {"paper_value", paper_value}, {"computed_value", num(computed)},
          {"criterion", criterion}, {"pass", pass},               {"certificate", std::move(certificate)}};
}

Json run_constants(const Json&, const Context&) {
  Json rows = Json::array();
  const ConstantValue g2 = gamma2_sharp();
  rows.push_back(constant_row("gamma2_sharp", "0.4613", g2.value, "|value - 0.4613| <= 5e-4",
                              std::abs(g2.value - 0.4613) <= 5e-4, to_json(g2)));

  const ConstantValue g4 = gamma4_sharp_lower();
  rows.push_back(constant_row("gamma4_sharp_lower", "> 0.495", g4.value, "0.495 < value <= 0.5",
                              g4.value > 0.495 && g4.value <= 0.5, to_json(g4)));

  Json per_p = Json::array();
  double worst = 1.0;
  for (double p : {2.5, 3.0, 4.0, 6.0, 10.0}) {
    const GammaSharpLower g = gamma_sharp_lower(p);
    worst = std::min(worst, g.value);
    Json j = to_json(g);
    j["p"] = num(p);
    per_p.push_back(j);
  }
  rows.push_back(constant_row("gamma_sharp_lower_p_gt_2", "> 0.483", worst,
                              "min over p in {2.5, 3, 4, 6, 10} > 0.483", worst > 0.483, {{"per_p", per_p}}));

  const AsymptoteResult as = asymptote_scan(1e4, default_kappa_grid());
  rows.push_back(constant_row("asymptote", "4.13273", as.value, "value <= 4.14 and 2 / value > 0.483",
                              as.value <= 4.14 && 2.0 / as.value > 0.483,
                              {{"lambda", 1e4}, {"scan", to_json(as)}, {"two_over_value", num(2.0 / as.value)}}));

  const ConstantValue g1 = gamma1_certified_lower(1.999);
  rows.push_back(constant_row("gamma1_lower", "> 0.96", g1.value, "value > 0.96", g1.value > 0.96, to_json(g1)));

  const ConstantValue gs = gamma_star_lower(1.999);
  rows.push_back(constant_row("gamma_star_lower_near_2", ">= 2 gamma2 = 0.9226", gs.value,
                              "|value - 0.9226| <= 1e-3", std::abs(gs.value - 0.9226) <= 1e-3, to_json(gs)));

  const SeriesEval quarter = eval_A(40.0, 0.25, 1e-12);
  Json qc = to_json(quarter);
  qc["note"] =
      "A(lambda, 1/4) = sum (2k+1)^-lambda tends to 1 as lambda grows; a limit of 1/2 is stated elsewhere "
      "for this quantity, which points to a factor-2 normalisation difference. Informational only.";
  rows.push_back(constant_row("A_quarter_limit", "1/2 (stated) vs 1 (as defined)", quarter.value,
                              "informational", true, qc));

  bool all = true;
  for (const auto& r : rows) all = all && r["pass"].get<bool>();
  return {{"rows", rows}, {"all_pass", all}};
}

// ---------------------------------------------------------------- curve

std::vector<SeriesEval> curve_rows(const Json& in) {
  const SeriesKind kind = series_kind_from_string(in["which"].get<std::string>());
  const double lambda = in["lambda"].get<double>();
  const double t_min = in["t_min"].get<double>();
  const double t_max = in["t_max"].get<double>();
  const int points = in["points"].get<int>();
  const double tol = in["tol"].get<double>();
  if (points < 1) throw DomainError("curve: points must be >= 1");
  if (!(t_min > 0.0 && t_min <= t_max && t_max <= 0.5)) throw DomainError("curve: need 0 < t_min <= t_max <= 1/2");
  std::vector<SeriesEval> rows;
  for (int i = 0; i < points; ++i) {
    const double t = points == 1 ? t_min : t_min + (t_max - t_min) * i / (points - 1);
    rows.push_back(eval_series(kind, lambda, t, tol));
  }
  return rows;
}

// --------------------------------------------------------------- search

Json run_search(const Json& in, const Context& ctx) {
  const int q = in["q"].get<int>();
  const double p = in["p"].get<double>();
  std::string mode = in["mode"].get<std::string>();
  const SearchConfig cfg = search_config(in, ctx);
  if (mode == "auto") mode = q <= cfg.exhaustive_cap ? "exhaustive" : "heuristic";
  if (mode == "exhaustive") return to_json(exact_gamma_sharp(q, p, cfg));
  if (mode == "heuristic") return to_json(heuristic_gamma_sharp(q, p, cfg.restarts, cfg.seed, cfg));
  if (mode == "dirichlet") return to_json(dirichlet_table(q, p));
  if (mode == "star") {
    const double K = in["K"].get<double>();
    const StarReport r = exact_gamma_star(q, p, K, cfg);
    Json j = to_json(r);
    j["conditions_recheck"] = star_conditions_hold(r);
    // K is a free parameter, so show how the constant moves with it.
    Json sens = Json::array();
    for (double f : {0.01, 0.1, 1.0, 10.0}) {
      const double v = f == 1.0 ? r.ratio_star : exact_gamma_star(q, p, K * f, cfg).ratio_star;
      sens.push_back({{"K", num(K * f)}, {"ratio_star", num(v)}});
    }
    j["K_sensitivity"] = sens;
    return j;
  }
  throw DomainError("search: unknown mode '" + mode + "' (auto, exhaustive, heuristic, dirichlet, star)");
}

// ---------------------------------------------------------------- round

Json run_round(const Json& in, const Context& ctx) {
  const std::int64_t q = in["q"].get<std::int64_t>();
  const std::int64_t n = in["n"].is_null() ? q / 4 : in["n"].get<std::int64_t>();
  const int L = in["L"].get<int>();
  const double p = in["p"].get<double>();
  const double eps = in["epsilon"].get<double>();
  const int trials = in["trials"].get<int>();
  const std::uint64_t seed = seed_of(in);
  if (n < 1 || n >= q) throw DomainError("round: need 1 <= n < q");
  const CoeffPoly P = fold_power(to_coeffs(Spectrum::interval(n, q)), L, q);
  const Hypotheses h = check_hypotheses(P, q, in["c"].get<double>(), p);
  const MonteCarloReport mc = monte_carlo(P, q, p, eps, trials, seed, ctx.workers);
  Json out = to_json(mc);
  out["n"] = n;
  out["L"] = L;
  out["hypotheses"] = to_json(h);
  out["hypotheses"]["c"] = num(in["c"].get<double>());
  if (trials == 1) {
    const Spectrum Q = bernoulli_round(P, seed, 0);
    Json t = to_json(verify_trial(P, Q, q, p, eps));
    t["spectrum"] = to_json(Q);
    out["trial"] = t;
  }
  return out;
}

// ---------------------------------------------------------- concentrate

Json run_concentrate(const Json& in, const Context& ctx) {
  if (in["E"].is_null()) throw DomainError("concentrate: an interval set E is required (--E-file)");
  const IntervalSet E = interval_set_from_json(in["E"]);
  ConcentrateConfig cfg;
  cfg.theta = in["theta"].get<double>();
  cfg.eta = in["eta"].get<double>();
  cfg.nu = in["nu"].get<std::int64_t>();
  cfg.q0 = in["q0"].get<std::int64_t>();
  cfg.q_max = in["q_max"].get<std::int64_t>();
  cfg.shifted = in["shifted"].get<bool>();
  cfg.allow_asymmetric = in["allow_asymmetric"].get<bool>();
  cfg.mesh_per_unit_degree = in["mesh"].get<int>();
  cfg.search = search_config(in, ctx);
  const EndToEnd r = end_to_end(E, in["p"].get<double>(), in["epsilon"].get<double>(), cfg);
  return {{"E", to_json(E)},
          {"symmetric", E.symmetric()},
          {"plan", to_json(r.plan)},
          {"report", to_json(r.report)},
          {"meets_target", r.report.ratio >= r.plan.target_ratio}};
}

// ---------------------------------------------------------------- decay

std::vector<DecayRow> decay_rows(const Json& in, const Context& ctx) {
  std::vector<std::int64_t> primes = in["primes"].get<std::vector<std::int64_t>>();
  return gamma1_decay_scan(primes, search_config(in, ctx));
}

void write_record(const Result& r, const Context& ctx, const std::filesystem::path& path) {
  if (!ctx.write_records) return;
  std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path);
  f << to_json(r.record).dump(2) << "\n";
}

std::filesystem::path record_path_for(const Context& ctx, const std::string& command, const std::string& hash) {
  return ctx.cache_dir / "records" / (command + "-" + hash + ".json");
}

using Runner = std::function<std::pair<Json, std::string>(const Json&, const Context&)>;

const std::map<std::string, Runner>& runners() {
  static const std::map<std::string, Runner> table = {
      {"constants",
       [](const Json& in, const Context& ctx) {
         Json out = run_constants(in, ctx);
         return std::pair{out, out.dump(2) + "\n"};
       }},
      {"curve",
       [](const Json& in, const Context&) {
         const auto rows = curve_rows(in);
         Json a = Json::array();
         for (const auto& r : rows) a.push_back(to_json(r));
         return std::pair{Json{{"rows", a}}, curve_csv(rows)};
       }},
      {"search",
       [](const Json& in, const Context& ctx) {
         Json out = run_search(in, ctx);
         return std::pair{out, out.dump(2) + "\n"};
       }},
      {"round",
       [](const Json& in, const Context& ctx) {
         Json out = run_round(in, ctx);
         return std::pair{out, out.dump(2) + "\n"};
       }},
      {"concentrate",
       [](const Json& in, const Context& ctx) {
         Json out = run_concentrate(in, ctx);
         return std::pair{out, out.dump(2) + "\n"};
       }},
      {"decay",
       [](const Json& in, const Context& ctx) {
         const auto rows = decay_rows(in, ctx);
         Json a = Json::array();
         for (const auto& r : rows) a.push_back(to_json(r));
         return std::pair{Json{{"rows", a}}, decay_csv(rows)};
       }},
  };
  return table;
}

}  // namespace

Json to_json(const RunRecord& r) {
  return {{"command", r.command},     {"config_hash", r.config_hash}, {"inputs", r.inputs},
          {"outputs", r.outputs},     {"wall_time", num(r.wall_time)}, {"seed", r.seed}};
}

RunRecord run_record_from_json(const Json& j) {
  for (const char* key : {"command", "config_hash", "inputs", "outputs", "seed"}) {
    if (!j.contains(key)) throw DomainError(std::string("run record: missing field '") + key + "'");
  }
  RunRecord r;
  r.command = j["command"].get<std::string>();
  r.config_hash = j["config_hash"].get<std::string>();
  r.inputs = j["inputs"];
  r.outputs = j["outputs"];
  r.wall_time = j.value("wall_time", 0.0);
  r.seed = j["seed"].get<std::uint64_t>();
  return r;
}

std::filesystem::path resolve_cache_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("CONCENTRA_CACHE"); env && *env) return env;
  return ".concentra-cache";
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"constants", "curve", "search", "round", "concentrate", "decay"};
  return names;
}

Json default_inputs(const std::string& command) {
  if (command == "constants") return Json::object();
  if (command == "curve") {
    return {{"which", "A"}, {"lambda", 2.0}, {"t_min", 0.01}, {"t_max", 0.5}, {"points", 50}, {"tol", 1e-12}};
  }
  if (command == "search") {
    return {{"q", 13},          {"p", 2.0},     {"mode", "auto"}, {"seed", 0},
            {"K", 1e4},         {"restarts", 8}, {"prune", true},  {"exhaustive_cap", 26}};
  }
  if (command == "round") {
    return {{"q", 499}, {"n", nullptr}, {"L", 3}, {"p", 3.0}, {"epsilon", 0.2}, {"trials", 200}, {"seed", 1}, {"c", 0.1}};
  }
  if (command == "concentrate") {
    return {{"E", nullptr}, {"p", 2.0},     {"epsilon", 0.05}, {"theta", 0.5},  {"eta", 0.05},
            {"nu", 1},      {"q0", 10},     {"q_max", 200},    {"shifted", false}, {"allow_asymmetric", false},
            {"mesh", 8},    {"seed", 0},    {"restarts", 8},   {"exhaustive_cap", 26}};
  }
  if (command == "decay") {
    return {{"primes", {3, 5, 7, 11, 13, 17, 19}}, {"exhaustive_cap", 26}, {"restarts", 2}, {"seed", 0}};
  }
  throw DomainError("unknown command '" + command + "'");
}

std::string config_hash(const std::string& command, const Json& inputs, std::uint64_t seed) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(command + "\n" + inputs.dump() + "\n" + std::to_string(seed))));
  return buf;
}

Result run_command(const std::string& command, const Json& overrides, const Context& ctx) {
  const auto it = runners().find(command);
  if (it == runners().end()) throw DomainError("unknown command '" + command + "'");
  const Json in = merged(command, overrides);

  Result res;
  res.record.command = command;
  res.record.inputs = in;
  res.record.seed = seed_of(in);
  res.record.config_hash = config_hash(command, in, res.record.seed);
  res.record_path = record_path_for(ctx, command, res.record.config_hash);

  if (command == "search" && ctx.use_cache && std::filesystem::exists(res.record_path)) {
    std::ifstream f(res.record_path);
    res.record = run_record_from_json(Json::parse(f));
    res.outputs = res.record.outputs;
    res.text = res.outputs.dump(2) + "\n";
    res.cache_hit = true;
    return res;
  }

  const auto t0 = std::chrono::steady_clock::now();
  auto [outputs, text] = it->second(in, ctx);
  res.record.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  res.outputs = outputs;
  res.record.outputs = outputs;
  res.text = std::move(text);
  if (command == "constants" && !outputs["all_pass"].get<bool>()) res.exit_code = kExitAcceptance;

  write_record(res, ctx, res.record_path);
  if (command == "search" && ctx.write_records) {
    Json line = {{"config_hash", res.record.config_hash}, {"inputs", in}, {"outputs", outputs}};
    std::ofstream f(ctx.cache_dir / "results.jsonl", std::ios::app);
    f << line.dump() << "\n";
  }
  return res;
}

Result cmd_constants(const Json& o, const Context& c) { return run_command("constants", o, c); }
Result cmd_curve(const Json& o, const Context& c) { return run_command("curve", o, c); }
Result cmd_search(const Json& o, const Context& c) { return run_command("search", o, c); }
Result cmd_round(const Json& o, const Context& c) { return run_command("round", o, c); }
Result cmd_concentrate(const Json& o, const Context& c) { return run_command("concentrate", o, c); }
Result cmd_decay(const Json& o, const Context& c) { return run_command("decay", o, c); }

Result replay(const std::filesystem::path& record, const Context& ctx) {
  std::ifstream f(record);
  if (!f) throw DomainError("replay: cannot open " + record.string());
  Json j;
  try {
    j = Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw DomainError(std::string("replay: malformed record: ") + e.what());
  }
  const RunRecord stored = run_record_from_json(j);
  Context fresh = ctx;
  fresh.use_cache = false;
  fresh.write_records = false;
  Result r = run_command(stored.command, stored.inputs, fresh);
  const bool match = r.outputs.dump() == stored.outputs.dump();
  Result out;
  out.record = stored;
  out.outputs = {{"command", stored.command}, {"config_hash", stored.config_hash}, {"match", match}};
  if (!match) out.outputs["fresh_outputs"] = r.outputs;
  out.text = out.outputs.dump(2) + "\n";
  out.exit_code = match ? kExitOk : 1;
  return out;
}

std::string curve_csv(const std::vector<SeriesEval>& rows) {
  std::ostringstream s;
  s << "lambda,t,value,tail_bound\n";
  for (const auto& r : rows) s << fmt15(r.lambda) << ',' << fmt15(r.t) << ',' << fmt15(r.value) << ',' << fmt15(r.tail_bound) << '\n';
  return s.str();
}

}  // namespace concentra::cli
