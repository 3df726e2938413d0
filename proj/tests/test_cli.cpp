#include <cstddef>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "json.hpp"

#include "epilab/ineq.hpp"
#include "epilab/runner.hpp"

using namespace epilab::runner;
using epilab::ineq::Verdict;

namespace {

// smallest config that still exercises a pair check end to end
const char* kTiny = R"({
  "schema": 1,
  "checks": ["epi_lieb"],
  "distributions": {"g1": {"family": "gaussian", "variance": 1.0},
                    "g4": {"family": "gaussian", "variance": 4.0}},
  "pairs": [["g1", "g4"]],
  "lambdas": [0.5],
  "seed": 7
})";

bool parse_fails_with(const std::string& text, const std::string& needle) {
  try {
    parse_config(text);
  } catch (const std::runtime_error& e) {
    return std::string(e.what()).find(needle) != std::string::npos;
  }
  return false;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config parsing fills every field and round-trips through echo") {
  const auto cfg = parse_config(kTiny);
  CHECK(cfg.schema_version == 1);
  REQUIRE(cfg.checks.size() == 1);
  CHECK(cfg.checks[0] == "epi_lieb");
  REQUIRE(cfg.distributions.size() == 2);
  CHECK(cfg.distributions[0].first == "g1");  // name-sorted
  CHECK(cfg.distributions[1].first == "g4");
  REQUIRE(cfg.pairs.size() == 1);
  CHECK(cfg.seed == 7);
  CHECK(cfg.output_format == "json");

  const auto result = run(cfg);
  const auto text = emit_json(cfg, RunOptions{}, result);
  const auto echo = nlohmann::json::parse(text);
  CHECK(echo.at("schema_version") == 1);
  CHECK(echo.at("config_echo").at("checks")[0] == "epi_lieb");
  CHECK(echo.at("config_echo").at("seed") == 7);
  CHECK(echo.at("summary").at("total").get<std::size_t>() == echo.at("reports").size());
}

TEST_CASE("config parsing names the offending field") {
  CHECK(parse_fails_with("{", "config"));
  CHECK(parse_fails_with(R"({"schema": 2, "checks": [], "distributions": {}})", "schema"));
  CHECK(parse_fails_with(R"({"schema": 1, "checks": ["nope"], "distributions": {}})", "checks"));
  CHECK(parse_fails_with(
      R"({"schema": 1, "checks": [], "distributions": {"d": {"family": "cauchy"}}})", "family"));
  CHECK(parse_fails_with(
      R"({"schema": 1, "checks": [], "distributions": {"d": {"family": "gaussian", "variance": -1}}})",
      "variance"));
  CHECK(parse_fails_with(
      R"({"schema": 1, "checks": [], "distributions": {"d": {"family": "laplace", "scale": 1.0}}, "pairs": [["d", "nope"]]})",
      "pairs"));
  CHECK(parse_fails_with(
      R"({"schema": 1, "checks": [], "distributions": {"d": {"family": "laplace", "scale": 1.0}}, "lambdas": [1.0]})",
      "lambdas"));
  CHECK(parse_fails_with(
      R"({"schema": 1, "checks": [], "distributions": {"d": {"family": "laplace", "b": 1.0}}})",
      "unknown key"));
  CHECK(parse_fails_with(R"({"schema": 1, "checks": [], "distributions": {}, "bogus": 1})",
                         "bogus"));
}

TEST_CASE("cross expands to the full ordered product") {
  const auto cfg = parse_config(R"({
    "schema": 1, "checks": [],
    "distributions": {"a": {"family": "gaussian", "variance": 1.0},
                      "b": {"family": "laplace", "scale": 1.0}},
    "pairs": "cross", "triples": "cross"
  })");
  CHECK(cfg.pairs.size() == 4);
  CHECK(cfg.triples.size() == 8);
}

TEST_CASE("check registry covers every runnable check") {
  CHECK(check_registry().size() == 13);
  const auto* info = find_check("proof_chain");
  REQUIRE(info != nullptr);
  CHECK(!info->summary.empty());
  CHECK(!info->contract.empty());
  CHECK(find_check("no_such_check") == nullptr);
}

TEST_CASE("output is byte-identical for any worker count") {
  const auto cfg = parse_config(kTiny);
  RunOptions one;
  one.workers = 1;
  RunOptions three;
  three.workers = 3;
  const auto a = run(cfg, one);
  const auto b = run(cfg, three);
  CHECK(emit_csv(a) == emit_csv(b));
  // the echo repeats the worker count, so hold the options fixed to compare records
  CHECK(emit_json(cfg, one, a) == emit_json(cfg, one, b));
}

TEST_CASE("chain checks flatten into named step rows plus a total row") {
  auto cfg = parse_config(kTiny);
  cfg.checks = {"deficit_sandwich"};
  const auto result = run(cfg);
  REQUIRE(result.records.size() == 3);
  CHECK(result.records[0].check == "deficit_sandwich.deficit_nonneg");
  CHECK(result.records[1].check == "deficit_sandwich.deficit_le_mi");
  CHECK(result.records[2].check == "deficit_sandwich.total");
  // the total row verifies the telescoping identity two-sided
  CHECK(result.records[2].report.verdict == Verdict::equality);
  CHECK(result.records[2].report.tol == 1e-8);
}

TEST_CASE("tolerance overrides rescale the verdicts but not the diagnostics") {
  auto cfg = parse_config(kTiny);
  cfg.checks = {"epi_lieb", "equality_diagnostics"};
  const auto plain = run(cfg);
  REQUIRE(plain.records.size() == 2);
  CHECK(plain.records[0].report.verdict == Verdict::holds);  // gap ~ 0.11

  cfg.tolerances["epi_lieb"] = 0.2;
  const auto forced = run(cfg);
  CHECK(forced.records[0].report.verdict == Verdict::equality);
  CHECK(forced.records[0].report.tol == 0.2);

  RunOptions scaled;
  scaled.tol_scale = 1e6;
  cfg.tolerances.clear();
  const auto huge = run(cfg, scaled);
  CHECK(huge.records[0].report.verdict == Verdict::equality);

  // equality_diagnostics rows keep their own verdict rule under any override
  CHECK(plain.records[1].report.tol == huge.records[1].report.tol);
  CHECK(plain.records[1].report.verdict == huge.records[1].report.verdict);
  CHECK(plain.records[1].inputs.find("regime=") != std::string::npos);
}

TEST_CASE("seed override reaches the seeded matrix cells and the echo") {
  const auto cfg = parse_config(R"({
    "schema": 1, "checks": ["zamir_feder_rows"],
    "distributions": {"g1": {"family": "gaussian", "variance": 1.0},
                      "g4": {"family": "gaussian", "variance": 4.0}},
    "triples": [["g1", "g4", "g1"]],
    "seed": 1
  })");
  const auto a = run(cfg);
  RunOptions other;
  other.seed = 2;
  const auto b = run(cfg, other);
  REQUIRE(a.records.size() == 1);
  REQUIRE(b.records.size() == 1);
  CHECK(a.records[0].report.gap != b.records[0].report.gap);

  const auto echo = nlohmann::json::parse(emit_json(cfg, other, b));
  CHECK(echo.at("config_echo").at("seed") == 2);
}

TEST_CASE("a throwing cell becomes an error record and the run continues") {
  const auto cfg = parse_config(R"({
    "schema": 1, "checks": ["young_check", "epi_lieb"],
    "distributions": {"g1": {"family": "gaussian", "variance": 1.0}},
    "pairs": [["g1", "g1"]],
    "lambdas": [0.5],
    "exponents": [[2.0, 2.0, 2.0]]
  })");
  const auto result = run(cfg);
  CHECK(result.summary.errors == 1);
  CHECK(result.summary.total() == result.records.size());
  CHECK(result.ok());  // errors are not violations

  bool saw_error = false;
  bool saw_lieb = false;
  for (const auto& rec : result.records) {
    if (!rec.error.empty()) {
      saw_error = true;
      CHECK(rec.check == "young_check");
      CHECK(!rec.inputs.empty());
    }
    if (rec.check == "epi_lieb") saw_lieb = true;
  }
  CHECK(saw_error);
  CHECK(saw_lieb);

  const auto csv = emit_csv(result);
  CHECK(csv.find(",,,,error\n") != std::string::npos);
  CHECK(csv.rfind("check,inputs,lhs,rhs,gap,err,verdict\n", 0) == 0);

  const auto js = nlohmann::json::parse(emit_json(cfg, RunOptions{}, result));
  bool json_error = false;
  for (const auto& row : js.at("reports")) json_error = json_error || row.contains("error");
  CHECK(json_error);
  CHECK(js.at("summary").at("errors") == 1);
}

TEST_CASE("csv always quotes the inputs column") {
  const auto cfg = parse_config(kTiny);
  const auto csv = emit_csv(run(cfg));
  CHECK(csv.find("\"X=gaussian(variance=1.000000); Y=gaussian(variance=4.000000)") !=
        std::string::npos);

  // component lists carry commas inside the field, so the quoting is load-bearing
  const auto rows_cfg = parse_config(R"({
    "schema": 1, "checks": ["zamir_feder_rows"],
    "distributions": {"g1": {"family": "gaussian", "variance": 1.0}},
    "triples": [["g1", "g1", "g1"]],
    "seed": 5
  })");
  const auto rows_csv = emit_csv(run(rows_cfg));
  const auto line_start = rows_csv.find("zamir_feder_rows,\"");
  REQUIRE(line_start != std::string::npos);
  CHECK(rows_csv.find("X=[gaussian(variance=1.000000), gaussian", line_start) !=
        std::string::npos);
}

TEST_CASE("summary tallies partition the records") {
  auto cfg = parse_config(kTiny);
  cfg.checks = {"epi_lieb", "proof_chain", "always_violated"};
  const auto r = run(cfg);
  CHECK(r.summary.total() == r.records.size());
  CHECK(r.summary.violated == 1);
  CHECK(!r.ok());
}

TEST_CASE("loading a missing config file fails loudly") {
  CHECK_THROWS_AS(load_config("/nonexistent/epilab.json"), std::runtime_error);
}

}  // TEST_SUITE
