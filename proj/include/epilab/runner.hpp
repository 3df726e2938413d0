#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "epilab/dist.hpp"
#include "epilab/ineq.hpp"

namespace epilab::runner {

// Declarative description of a sweep: which checks to run and the grid of
// inputs (distributions, pairs/triples of them, mixing weights, exponent
// triples) to feed them. Parsed from a JSON file with a versioned schema.
struct ExperimentConfig {
  int schema_version = 1;
  std::vector<std::string> checks;
  // name-sorted; parse rejects configs whose pair/triple entries do not resolve
  std::vector<std::pair<std::string, dist::Distribution1D>> distributions;
  std::vector<std::array<std::string, 2>> pairs;
  std::vector<std::array<std::string, 3>> triples;
  std::vector<double> lambdas;
  std::vector<std::array<double, 3>> exponents;  // (p, q, r)
  std::uint64_t seed = 0;
  std::map<std::string, double> tolerances;  // per-check overrides
  std::string output_path;                   // empty means stdout
  std::string output_format = "json";
};

// Throws std::runtime_error with the offending field named.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

struct CheckInfo {
  std::string name;
  std::string summary;   // one line, for list-checks
  std::string contract;  // what is computed, how the gap is oriented, tolerances
  std::string cells;     // which config inputs generate cells
};
const std::vector<CheckInfo>& check_registry();
const CheckInfo* find_check(const std::string& name);

// One output row. Chain checks emit one record per step named
// "<check>.<step>" plus a "<check>.total" record whose gap is the difference
// between the telescoped sum and the independently assembled reference.
// Cells that throw produce a record with `error` set and no numbers.
struct ReportRecord {
  std::string check;
  std::string inputs;
  std::string error;
  ineq::InequalityReport report;
};

struct Summary {
  std::size_t holds = 0;
  std::size_t equality = 0;
  std::size_t violated_within_err = 0;
  std::size_t violated = 0;
  std::size_t errors = 0;
  std::size_t total() const { return holds + equality + violated_within_err + violated + errors; }
};

struct RunResult {
  std::vector<ReportRecord> records;
  Summary summary;
  // The exit-status contract cares about hard violations only.
  bool ok() const { return summary.violated == 0; }
};

struct RunOptions {
  int workers = 1;
  double tol_scale = 1.0;
  std::optional<std::uint64_t> seed;  // overrides the config seed
};

// Cells are generated in config order and executed on a static stride across
// the workers; records are assembled in cell order, so the output is
// byte-identical whatever the worker count.
RunResult run(const ExperimentConfig& cfg, const RunOptions& opts = {});

std::string emit_json(const ExperimentConfig& cfg, const RunOptions& opts, const RunResult& r);
std::string emit_csv(const RunResult& r);

}  // namespace epilab::runner
