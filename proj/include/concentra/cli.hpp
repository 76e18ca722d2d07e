// Subcommands behind the `concentra` executable.  Each command takes a JSON
// inputs object (defaults merged with flags), returns JSON outputs plus the
// text to print, and leaves a RunRecord in the cache directory so the run
// can be replayed.

#ifndef CONCENTRA_CLI_HPP
#define CONCENTRA_CLI_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "concentra/json_io.hpp"

namespace concentra::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitBudget = 3;
inline constexpr int kExitAcceptance = 4;

struct Context {
  std::filesystem::path cache_dir;
  int workers = 1;
  /// Serve cmd_search from an existing record with the same hash.
  bool use_cache = true;
  bool write_records = true;
};

struct RunRecord {
  std::string command;
  std::string config_hash;
  Json inputs;
  Json outputs;
  double wall_time = 0.0;
  std::uint64_t seed = 0;
};

Json to_json(const RunRecord& r);
RunRecord run_record_from_json(const Json& j);

struct Result {
  int exit_code = kExitOk;
  Json outputs;
  /// JSON or CSV, ready to print.
  std::string text;
  bool cache_hit = false;
  RunRecord record;
  std::filesystem::path record_path;
};

/// --cache-dir, else $CONCENTRA_CACHE, else ./.concentra-cache.
std::filesystem::path resolve_cache_dir(const std::string& flag);

const std::vector<std::string>& command_names();

/// Default inputs for a command; throws DomainError for unknown names.
Json default_inputs(const std::string& command);

/// FNV-1a over command, canonical inputs and seed, as 16 hex digits.
std::string config_hash(const std::string& command, const Json& inputs, std::uint64_t seed);

/// Runs `command` with `overrides` merged over its defaults.
Result run_command(const std::string& command, const Json& overrides, const Context& ctx);

Result cmd_constants(const Json& overrides, const Context& ctx);
Result cmd_curve(const Json& overrides, const Context& ctx);
Result cmd_search(const Json& overrides, const Context& ctx);
Result cmd_round(const Json& overrides, const Context& ctx);
Result cmd_concentrate(const Json& overrides, const Context& ctx);
Result cmd_decay(const Json& overrides, const Context& ctx);

/// Re-runs a stored record without the cache; outputs.match says whether
/// the fresh outputs equal the recorded ones.  Exit code 1 on mismatch.
Result replay(const std::filesystem::path& record, const Context& ctx);

/// CSV with header "lambda,t,value,tail_bound".
std::string curve_csv(const std::vector<SeriesEval>& rows);

}  // namespace concentra::cli

#endif  // CONCENTRA_CLI_HPP
