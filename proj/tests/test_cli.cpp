#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "concentra/cli.hpp"

using namespace concentra;
namespace fs = std::filesystem;

namespace {

cli::Context temp_context(const std::string& tag) {
  cli::Context ctx;
  ctx.cache_dir = fs::temp_directory_path() / ("concentra-test-" + tag);
  fs::remove_all(ctx.cache_dir);
  return ctx;
}

int count_lines(const fs::path& p) {
  std::ifstream f(p);
  int n = 0;
  for (std::string line; std::getline(f, line);) ++n;
  return n;
}

}  // namespace

TEST_CASE("inputs are merged over defaults") {
  const auto ctx = temp_context("merge");
  CHECK_THROWS_AS(cli::run_command("search", {{"bogus", 1}}, ctx), DomainError);
  CHECK_THROWS_AS(cli::run_command("nope", Json::object(), ctx), DomainError);
  CHECK_THROWS_AS(cli::default_inputs("nope"), DomainError);
  for (const auto& name : cli::command_names()) CHECK(cli::default_inputs(name).is_object());
  const cli::Result r = cli::run_command("search", {{"q", 7}}, ctx);
  CHECK(r.record.inputs["q"] == 7);
  CHECK(r.record.inputs["p"] == 2.0);
  CHECK(r.outputs["method"] == "exhaustive");
}

TEST_CASE("config hash") {
  const Json a = cli::default_inputs("search");
  Json b = a;
  b["q"] = 14;
  CHECK(cli::config_hash("search", a, 0) == cli::config_hash("search", a, 0));
  CHECK(cli::config_hash("search", a, 0) != cli::config_hash("search", b, 0));
  CHECK(cli::config_hash("search", a, 0) != cli::config_hash("search", a, 1));
  CHECK(cli::config_hash("search", a, 0) != cli::config_hash("decay", a, 0));
  CHECK(cli::config_hash("search", a, 0).size() == 16);
}

TEST_CASE("search cache and replay") {
  const auto ctx = temp_context("cache");
  const Json in = {{"q", 12}, {"p", 1.0}};
  const cli::Result first = cli::cmd_search(in, ctx);
  CHECK_FALSE(first.cache_hit);
  CHECK(fs::exists(first.record_path));
  const cli::Result second = cli::cmd_search(in, ctx);
  CHECK(second.cache_hit);
  CHECK(second.outputs == first.outputs);
  CHECK(count_lines(ctx.cache_dir / "results.jsonl") == 1);

  const cli::Result rep = cli::replay(first.record_path, ctx);
  CHECK(rep.exit_code == 0);
  CHECK(rep.outputs["match"] == true);

  // A tampered record must be reported as a mismatch.
  std::ifstream f(first.record_path);
  Json rec = Json::parse(f);
  rec["outputs"]["ratio"] = 0.1;
  const fs::path bad = ctx.cache_dir / "tampered.json";
  std::ofstream(bad) << rec.dump();
  const cli::Result mis = cli::replay(bad, ctx);
  CHECK(mis.exit_code == 1);
  CHECK(mis.outputs["match"] == false);

  std::ofstream(ctx.cache_dir / "broken.json") << "{not json";
  CHECK_THROWS_AS(cli::replay(ctx.cache_dir / "broken.json", ctx), DomainError);
  CHECK_THROWS_AS(cli::replay(ctx.cache_dir / "missing.json", ctx), DomainError);
}

TEST_CASE("records round-trip through JSON") {
  const auto ctx = temp_context("roundtrip");
  const cli::Result r = cli::cmd_search({{"q", 3}, {"mode", "star"}}, ctx);
  const cli::RunRecord back = cli::run_record_from_json(Json::parse(cli::to_json(r.record).dump()));
  CHECK(back.outputs.dump() == r.record.outputs.dump());
  CHECK(back.config_hash == r.record.config_hash);
  CHECK(Json::parse(r.outputs.dump()).dump() == r.outputs.dump());
  REQUIRE(r.outputs["K_sensitivity"].size() == 4);
  // Raising K only relaxes the even-grid constraint.
  for (std::size_t i = 1; i < 4; ++i) {
    CHECK(r.outputs["K_sensitivity"][i]["ratio_star"].get<double>() >=
          r.outputs["K_sensitivity"][i - 1]["ratio_star"].get<double>());
  }
  CHECK_THROWS_AS(cli::run_record_from_json(Json{{"command", "search"}}), DomainError);
}

TEST_CASE("curve and decay emit CSV") {
  auto ctx = temp_context("csv");
  ctx.write_records = false;
  const cli::Result c = cli::cmd_curve({{"points", 4}, {"which", "B"}}, ctx);
  std::istringstream lines(c.text);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "lambda,t,value,tail_bound");
  CHECK(c.outputs["rows"].size() == 4);
  CHECK_THROWS_AS(cli::cmd_curve({{"t_max", 0.7}}, ctx), DomainError);

  const cli::Result d = cli::cmd_decay({{"primes", {3, 5}}}, ctx);
  CHECK(d.text.rfind("q,method,", 0) == 0);
  CHECK(d.outputs["rows"].size() == 2);
  CHECK_FALSE(fs::exists(ctx.cache_dir / "records"));
}

TEST_CASE("round and concentrate") {
  auto ctx = temp_context("round");
  const cli::Result r = cli::cmd_round({{"q", 101}, {"trials", 5}}, ctx);
  CHECK(r.outputs["n"] == 25);
  CHECK(r.outputs["trials"] == 5);
  CHECK(r.outputs["hypotheses"].contains("cond_c"));
  CHECK(cli::cmd_round({{"q", 101}, {"trials", 1}}, ctx).outputs.contains("trial"));
  CHECK_THROWS_AS(cli::cmd_round({{"q", 101}, {"n", 101}}, ctx), DomainError);

  CHECK_THROWS_AS(cli::cmd_concentrate(Json::object(), ctx), DomainError);
  const Json one_window = {{"intervals", Json::array({Json::array({0.1, 0.2})})}};
  const Json E = {{"intervals", {{0.30, 0.35}, {0.65, 0.70}}}};
  const cli::Result c = cli::cmd_concentrate({{"E", E}}, ctx);
  CHECK(c.outputs["meets_target"] == true);
  CHECK(c.outputs["report"]["ratio"].get<double>() >= 0.40);
  CHECK_THROWS_AS(cli::cmd_concentrate({{"E", one_window}}, ctx), DomainError);
  CHECK_NOTHROW(cli::cmd_concentrate({{"E", one_window}, {"allow_asymmetric", true}, {"epsilon", 0.3}}, ctx));
}

TEST_CASE("budget errors surface from search") {
  const auto ctx = temp_context("budget");
  CHECK_THROWS_AS(cli::cmd_search({{"q", 40}, {"mode", "exhaustive"}}, ctx), BudgetError);
  CHECK(cli::cmd_search({{"q", 40}, {"mode", "dirichlet"}}, ctx).exit_code == 0);
}
