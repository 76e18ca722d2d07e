// Command-line front end.  Flags override the JSON defaults of each command;
// --inputs accepts a whole JSON object for anything not exposed as a flag.

#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"

#include "concentra/cli.hpp"

namespace cli = concentra::cli;
using concentra::Json;

namespace {

struct Flags {
  std::string cache_dir;
  std::string output;
  int workers = 1;
  bool no_cache = false;
  std::string inputs_json;
  std::string record;
  std::string e_file;
};

// One flag per input key; only flags that were given reach the overrides.
class Overrides {
 public:
  template <class T>
  void add(CLI::App* app, const std::string& key, const std::string& help) {
    auto value = std::make_shared<T>();
    CLI::Option* opt = app->add_option("--" + key, *value, help);
    setters_.push_back({app, opt, [key, value](Json& j) { j[key] = *value; }});
  }

  void flag(CLI::App* app, const std::string& name, const std::string& key, const std::string& help) {
    auto value = std::make_shared<bool>(false);
    CLI::Option* opt = app->add_flag(name, *value, help);
    setters_.push_back({app, opt, [key, value](Json& j) { j[key] = *value; }});
  }

  Json collect(CLI::App* app) const {
    Json j = Json::object();
    for (const auto& s : setters_) {
      if (s.app == app && s.opt->count() > 0) s.set(j);
    }
    return j;
  }

 private:
  struct Setter {
    CLI::App* app;
    CLI::Option* opt;
    std::function<void(Json&)> set;
  };
  std::vector<Setter> setters_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"concentra: L^p concentration of idempotent trigonometric polynomials"};
  app.require_subcommand(1);
  Flags flags;
  app.add_option("--cache-dir", flags.cache_dir, "Record directory (default $CONCENTRA_CACHE or .concentra-cache)");
  app.add_option("--output", flags.output, "Write the command output to this file instead of stdout");
  app.add_option("--workers", flags.workers, "Worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--no-cache", flags.no_cache, "Do not read or write run records");

  Overrides ov;
  std::map<std::string, CLI::App*> subs;
  auto sub = [&](const std::string& name, const std::string& help) {
    CLI::App* s = app.add_subcommand(name, help);
    s->add_option("--inputs", flags.inputs_json, "JSON object merged over the defaults");
    subs[name] = s;
    return s;
  };

  sub("constants", "Sharp-constant bounds with certificates (exit 4 if any check fails)");

  CLI::App* curve = sub("curve", "Tabulate A or B over t as CSV");
  ov.add<std::string>(curve, "which", "A or B");
  ov.add<double>(curve, "lambda", "Exponent");
  ov.add<double>(curve, "t_min", "Smallest t");
  ov.add<double>(curve, "t_max", "Largest t (<= 1/2)");
  ov.add<int>(curve, "points", "Number of t values");
  ov.add<double>(curve, "tol", "Absolute series tolerance");

  CLI::App* search = sub("search", "Maximise the discrete concentration ratio on Z_q");
  ov.add<int>(search, "q", "Modulus");
  ov.add<double>(search, "p", "Exponent");
  ov.add<std::string>(search, "mode", "auto, exhaustive, heuristic, dirichlet or star");
  ov.add<std::uint64_t>(search, "seed", "RNG seed");
  ov.add<double>(search, "K", "Bound for the shifted-grid condition");
  ov.add<int>(search, "restarts", "Random restarts of the heuristic");
  ov.add<int>(search, "exhaustive_cap", "Largest q searched exhaustively");

  CLI::App* round = sub("round", "Monte Carlo of Bernoulli rounding of a folded Dirichlet kernel");
  ov.add<std::int64_t>(round, "q", "Modulus");
  ov.add<std::int64_t>(round, "n", "Kernel length (default q/4)");
  ov.add<int>(round, "L", "Folding power");
  ov.add<double>(round, "p", "Exponent");
  ov.add<double>(round, "epsilon", "Relative tolerance");
  ov.add<int>(round, "trials", "Number of trials");
  ov.add<std::uint64_t>(round, "seed", "RNG seed");
  ov.add<double>(round, "c", "Constant in the hypotheses");

  CLI::App* conc = sub("concentrate", "Build and measure a torus idempotent concentrated on E");
  conc->add_option("--E", flags.e_file, "JSON file {\"intervals\": [[lo, hi], ...]}")->check(CLI::ExistingFile);
  ov.add<double>(conc, "p", "Exponent");
  ov.add<double>(conc, "epsilon", "Loss parameter in (0, 1)");
  ov.add<double>(conc, "theta", "Window width parameter");
  ov.add<double>(conc, "eta", "Allowed uncovered fraction of the window");
  ov.add<std::int64_t>(conc, "nu", "Dilation of the inner polynomial");
  ov.add<std::int64_t>(conc, "q0", "Fraction scan starts above this q");
  ov.add<std::int64_t>(conc, "q_max", "Fraction scan stops at this q");
  ov.add<int>(conc, "mesh", "Quadrature nodes per unit degree");
  ov.add<std::uint64_t>(conc, "seed", "RNG seed for the witness search");
  ov.flag(conc, "--allow-asymmetric", "allow_asymmetric", "Accept a non-symmetric E");

  CLI::App* decay = sub("decay", "p = 1 constants over primes as CSV");
  ov.add<std::vector<std::int64_t>>(decay, "primes", "Primes to scan");
  ov.add<int>(decay, "restarts", "Random restarts of the heuristic");
  ov.add<int>(decay, "exhaustive_cap", "Largest q searched exhaustively");
  ov.add<std::uint64_t>(decay, "seed", "RNG seed");

  CLI::App* rep = app.add_subcommand("replay", "Re-run a stored record and compare outputs");
  rep->add_option("record", flags.record, "Path to a record JSON")->required();

  CLI11_PARSE(app, argc, argv);

  cli::Context ctx;
  ctx.cache_dir = cli::resolve_cache_dir(flags.cache_dir);
  ctx.workers = flags.workers;
  ctx.use_cache = !flags.no_cache;
  ctx.write_records = !flags.no_cache;

  try {
    cli::Result res;
    if (rep->parsed()) {
      res = cli::replay(flags.record, ctx);
    } else {
      std::string name;
      CLI::App* s = nullptr;
      for (auto& [n, a] : subs) {
        if (a->parsed()) name = n, s = a;
      }
      Json overrides = flags.inputs_json.empty() ? Json::object() : Json::parse(flags.inputs_json);
      if (!overrides.is_object()) throw concentra::DomainError("--inputs must be a JSON object");
      const Json flagged = ov.collect(s);
      for (auto& [k, v] : flagged.items()) overrides[k] = v;
      if (name == "concentrate" && !flags.e_file.empty()) {
        std::ifstream f(flags.e_file);
        overrides["E"] = Json::parse(f);
      }
      res = cli::run_command(name, overrides, ctx);
    }
    if (flags.output.empty()) {
      std::cout << res.text;
    } else {
      std::ofstream(flags.output) << res.text;
    }
    if (res.cache_hit) std::cerr << "cache hit: " << res.record_path.string() << "\n";
    return res.exit_code;
  } catch (const concentra::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitDomain;
  } catch (const concentra::BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return cli::kExitBudget;
  } catch (const Json::exception& e) {
    std::cerr << "error: bad JSON input: " << e.what() << "\n";
    return cli::kExitDomain;
  }
}
