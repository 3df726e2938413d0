#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"

#include "epilab/runner.hpp"
#include "epilab/selftest.hpp"

namespace {

// precedence: --workers flag, then EPI_LAB_WORKERS, then 1
int resolve_workers(int flag_value, bool flag_given) {
  if (flag_given) return flag_value;
  if (const char* env = std::getenv("EPI_LAB_WORKERS")) {
    try {
      const int w = std::stoi(env);
      if (w >= 1) return w;
    } catch (const std::exception&) {
    }
    std::fprintf(stderr, "EPI_LAB_WORKERS='%s' is not a positive integer; using 1 worker\n", env);
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"epi-lab: certify entropy-power, transport, and convolution inequalities over "
               "configurable sweeps"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string format;
  std::uint64_t seed = 0;
  int workers = 1;
  double tol_scale = 1.0;

  auto* run_cmd = app.add_subcommand("run", "run the checks of a config and emit a report");
  run_cmd->add_option("--config", config_path, "experiment config (JSON, schema 1)")->required();
  auto* out_opt =
      run_cmd->add_option("--out", out_path, "output file (default: config output.path, else stdout)");
  auto* fmt_opt = run_cmd->add_option("--format", format, "json or csv (default: config output.format)")
                      ->check(CLI::IsMember({"json", "csv"}));
  auto* seed_opt = run_cmd->add_option("--seed", seed, "override the config seed");
  auto* workers_opt =
      run_cmd->add_option("--workers", workers, "worker threads (default: EPI_LAB_WORKERS, else 1)")
          ->check(CLI::PositiveNumber);
  run_cmd->add_option("--tol-scale", tol_scale, "multiply every tolerance by this factor")
      ->check(CLI::PositiveNumber);

  auto* list_cmd = app.add_subcommand("list-checks", "list available checks");

  std::string describe_name;
  auto* desc_cmd = app.add_subcommand("describe-check", "print the contract of one check");
  desc_cmd->add_option("name", describe_name, "check name")->required();

  auto* self_cmd = app.add_subcommand("selftest", "run the acceptance checklist");

  CLI11_PARSE(app, argc, argv);

  if (list_cmd->parsed()) {
    for (const auto& info : epilab::runner::check_registry())
      std::printf("%-22s %s\n", info.name.c_str(), info.summary.c_str());
    return 0;
  }

  if (desc_cmd->parsed()) {
    const auto* info = epilab::runner::find_check(describe_name);
    if (info == nullptr) {
      std::fprintf(stderr, "unknown check '%s'; see list-checks\n", describe_name.c_str());
      return 2;
    }
    std::printf("%s\n  %s\n\n%s\n\ncells: %s\n", info->name.c_str(), info->summary.c_str(),
                info->contract.c_str(), info->cells.c_str());
    return 0;
  }

  if (self_cmd->parsed()) return epilab::selftest::run_all(std::cout);

  if (run_cmd->parsed()) {
    try {
      const auto cfg = epilab::runner::load_config(config_path);
      epilab::runner::RunOptions opts;
      opts.workers = resolve_workers(workers, workers_opt->count() > 0);
      opts.tol_scale = tol_scale;
      if (seed_opt->count() > 0) opts.seed = seed;

      const auto result = epilab::runner::run(cfg, opts);

      const std::string fmt = fmt_opt->count() > 0 ? format : cfg.output_format;
      const std::string path = out_opt->count() > 0 ? out_path : cfg.output_path;
      const std::string text = fmt == "csv" ? epilab::runner::emit_csv(result)
                                            : epilab::runner::emit_json(cfg, opts, result);
      if (path.empty()) {
        std::fputs(text.c_str(), stdout);
      } else {
        std::ofstream out(path, std::ios::binary);
        out << text;
        if (!out.good()) {
          std::fprintf(stderr, "cannot write output file '%s'\n", path.c_str());
          return 2;
        }
      }
      // the summary goes to stderr so a stdout report stays machine-parsable
      const auto& s = result.summary;
      std::fprintf(stderr,
                   "summary: holds=%zu equality=%zu violated_within_err=%zu violated=%zu "
                   "errors=%zu total=%zu\n",
                   s.holds, s.equality, s.violated_within_err, s.violated, s.errors, s.total());
      return result.ok() ? 0 : 1;
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return 2;
    }
  }

  return 0;
}
