// Batch front door: `weylab run config.json [--out DIR] [--seed N]
// [--threads N]` executes one experiment and writes rows.csv, report.json and
// plot.svg; `weylab list` prints the experiment catalog.  Exit status: 0 all
// assertions passed, 1 some assertion failed, 2 configuration/runtime error
// (with a JSON diagnostic on stderr).

#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "weylab/common.hpp"
#include "weylab/report.hpp"

namespace {

int diagnose(const std::string& code, const std::string& message) {
  nlohmann::json j{{"error", {{"code", code}, {"message", message}}}};
  std::cerr << j.dump() << '\n';
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weylab: eigenvalue-counting experiments on rough planar domains"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;

  CLI::App* run_cmd = app.add_subcommand("run", "execute one experiment config");
  run_cmd->add_option("config", config_path, "JSON config file")->required();
  run_cmd->add_option("--out", out_dir, "output directory (overrides the config)");
  run_cmd->add_option("--seed", seed, "seed override for randomized sweeps");
  run_cmd->add_option("--threads", threads, "worker thread override");

  CLI::App* list_cmd = app.add_subcommand("list", "print the experiment catalog");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    return diagnose("invalid-configuration", e.what());
  }

  try {
    if (list_cmd->parsed()) {
      std::cout << weylab::list_experiments().dump(2) << '\n';
      return 0;
    }
    weylab::RunConfig cfg = weylab::load_run_config(config_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (seed) cfg.seed = *seed;
    if (threads) cfg.threads = *threads;
    return weylab::run(cfg);
  } catch (const weylab::Error& e) {
    return diagnose(weylab::errc_name(e.code()), e.what());
  } catch (const std::exception& e) {
    return diagnose("internal-error", e.what());
  }
}
