#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "weylab/experiments.hpp"
#include "weylab/semiclassics.hpp"

namespace weylab {

// Parsed and validated batch configuration ("schema": 1).  Fields beyond the
// common block are experiment-specific; parse_run_config enforces presence
// per tag and rejects unknown keys outright.
struct RunConfig {
  std::string experiment;
  std::optional<Domain2D> domain;
  std::optional<PotentialSpec> potential;
  std::optional<PotentialSpec> potential_n;  // splitting_check override
  std::optional<ParameterSet> parameters;

  double h = 0.0;
  std::vector<double> h_sequence;  // blowup_scan
  std::vector<double> lambdas;     // resolved geometric grid

  double lambda_single = 0.0;  // splitting_check / rooms_probe threshold
  double delta = 0.0;          // splitting_check
  int truncation_n = 4;        // splitting_check default approximant
  bool strict = false;         // splitting_check exactness
  double gamma = 0.0;          // blowup_scan
  double alpha = 0.0;          // blowup_scan
  std::vector<int> n_rooms_list;  // rooms_probe

  std::string out_dir = ".";
  std::uint64_t seed = 1;
  int threads = 1;
  bool plot = true;
};

RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

// Dispatch without touching the filesystem.
ScanReport execute(const RunConfig& cfg);

// Execute and write rows.csv, report.json and (unless disabled) plot.svg into
// cfg.out_dir, each atomically (write to a temp file, then rename).  Returns 0
// when every assertion passed, 1 otherwise; configuration or runtime errors
// propagate as exceptions for the CLI to map to exit 2.
int run(const RunConfig& cfg);

// Machine-readable experiment catalog; every entry carries a config schema
// and an example accepted by parse_run_config.
nlohmann::json list_experiments();

// Diagnostic log-log plot of ratio vs lambda with a unit reference line.
void write_scan_svg(const ScanReport& r, std::ostream& os);

}  // namespace weylab
