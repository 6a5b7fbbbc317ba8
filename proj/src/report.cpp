#include "weylab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "weylab/common.hpp"
#include "weylab/serialize.hpp"

namespace weylab {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& msg) { fail(Errc::invalid_configuration, msg); }

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

double get_num(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) bad(std::string("config: missing \"") + key + "\"");
  if (!it->is_number()) bad(std::string("config: \"") + key + "\" must be a number");
  const double v = it->get<double>();
  if (!std::isfinite(v)) bad(std::string("config: \"") + key + "\" must be finite");
  return v;
}

std::vector<double> geometric_grid(const json& grid) {
  if (!grid.is_object()) bad("config: \"lambda_grid\" must be an object {min, max, points}");
  const double lo = get_num(grid, "min");
  const double hi = get_num(grid, "max");
  auto it = grid.find("points");
  if (it == grid.end() || !it->is_number_integer())
    bad("config: \"lambda_grid.points\" must be an integer");
  const int n = it->get<int>();
  if (n < 1) bad("config: \"lambda_grid.points\" must be >= 1");
  if (lo <= 0) bad("config: \"lambda_grid.min\" must be positive (geometric grid)");
  if (n == 1) {
    if (hi != lo) bad("config: a one-point lambda grid needs min == max");
    return {lo};
  }
  if (hi <= lo) bad("config: \"lambda_grid\" needs max > min");
  std::vector<double> out(static_cast<std::size_t>(n));
  const double q = hi / lo;
  for (int i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] =
        lo * std::pow(q, static_cast<double>(i) / static_cast<double>(n - 1));
  out.back() = hi;  // kill the last-ulp wobble so the endpoint is exact
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i] <= out[i - 1]) bad("config: lambda grid degenerated; spread min/max apart");
  return out;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "schema",     "experiment", "domain",      "potential", "potential_n",
      "parameters", "h",          "h_sequence",  "lambda_grid", "lambda",
      "delta",      "truncation_n", "strict",    "gamma",     "alpha",
      "n_rooms_list", "out_dir",  "seed",        "threads",   "plot"};
  return keys;
}

void atomic_write(const std::filesystem::path& target, const std::string& payload) {
  const std::filesystem::path tmp = target.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    require(os.good(), Errc::invalid_configuration,
            "cannot open " + tmp.string() + " for writing");
    os.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    os.flush();
    require(os.good(), Errc::invalid_configuration, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  require(!ec, Errc::invalid_configuration,
          "cannot rename " + tmp.string() + " -> " + target.string() + ": " + ec.message());
}

ScanOptions options_of(const RunConfig& cfg) {
  ScanOptions opts;
  opts.threads = cfg.threads;
  opts.seed = cfg.seed;
  return opts;
}

ScanReport run_splitting(const RunConfig& cfg) {
  const GridMask mask = rasterize(*cfg.domain, cfg.h);
  const PotentialField V = sample_potential(mask, *cfg.potential);
  const PotentialField Vn = cfg.potential_n
                                ? sample_potential(mask, *cfg.potential_n)
                                : make_vn_approximant(mask, V, cfg.truncation_n);
  const SplitResult sr =
      splitting_check(mask, V, Vn, cfg.delta, cfg.lambda_single, cfg.strict);

  ScanReport report;
  report.experiment = "splitting_check";
  report.parameters.emplace_back("domain", cfg.domain->type_name());
  report.parameters.emplace_back("potential", V.provenance);
  report.parameters.emplace_back("approximant", Vn.provenance);
  report.parameters.emplace_back("h", fmt_g(cfg.h));
  report.parameters.emplace_back("delta", fmt_g(cfg.delta));
  report.parameters.emplace_back("lambda", fmt_g(cfg.lambda_single));
  report.parameters.emplace_back("strict", cfg.strict ? "true" : "false");
  report.parameters.emplace_back("cells", std::to_string(mask.cell_count()));

  ScanRow row;
  row.lambda = cfg.lambda_single;
  row.count = sr.lhs;
  row.prediction = static_cast<double>(sr.rhs1 + sr.rhs2);
  row.ratio = row.prediction > 0 ? static_cast<double>(sr.lhs) / row.prediction : 0.0;
  row.aux.emplace_back("rhs_truncated", static_cast<double>(sr.rhs1));
  row.aux.emplace_back("rhs_remainder", static_cast<double>(sr.rhs2));
  row.aux.emplace_back("clipped", static_cast<double>(sr.clipped));
  report.rows.push_back(row);

  ScanAssertion a;
  a.invariant = "subadditive";
  a.pass = sr.lhs <= sr.rhs1 + sr.rhs2;
  a.detail = "N(full) = " + std::to_string(sr.lhs) + " vs " + std::to_string(sr.rhs1) +
             " + " + std::to_string(sr.rhs2);
  report.assertions.push_back(a);
  return report;
}

json schema_entry(const char* tag, const char* description,
                  std::initializer_list<const char*> required,
                  std::initializer_list<std::pair<const char*, const char*>> fields,
                  json example) {
  json req = json::array();
  for (const char* r : required) req.push_back(r);
  json props = json::object();
  props["experiment"] = "experiment tag (string)";
  props["out_dir"] = "output directory (string, default \".\")";
  props["seed"] = "seed for randomized sweeps (integer, default 1)";
  props["threads"] = "worker threads (integer, default 1)";
  props["plot"] = "emit plot.svg (bool, default true)";
  for (const auto& kv : fields) props[kv.first] = kv.second;
  example["experiment"] = tag;
  return json{{"tag", tag},
              {"description", description},
              {"config_schema", json{{"required", std::move(req)}, {"properties", std::move(props)}}},
              {"example", std::move(example)}};
}

}  // namespace

RunConfig parse_run_config(const json& j) {
  if (!j.is_object()) bad("config: top level must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known_keys().count(it.key())) bad("config: unknown key \"" + it.key() + "\"");
  if (j.contains("schema")) {
    if (!j["schema"].is_number_integer() || j["schema"].get<int>() != 1)
      bad("config: unsupported schema (only 1)");
  }

  RunConfig cfg;
  {
    auto it = j.find("experiment");
    if (it == j.end() || !it->is_string()) bad("config: missing string \"experiment\"");
    cfg.experiment = it->get<std::string>();
  }
  if (j.contains("domain")) cfg.domain = domain_from_json(j["domain"]);
  if (j.contains("potential")) cfg.potential = potential_from_json(j["potential"]);
  if (j.contains("potential_n")) cfg.potential_n = potential_from_json(j["potential_n"]);
  if (j.contains("parameters")) cfg.parameters = parameters_from_json(j["parameters"]);
  if (j.contains("h")) {
    cfg.h = get_num(j, "h");
    if (cfg.h <= 0) bad("config: \"h\" must be positive");
  }
  if (j.contains("h_sequence")) {
    if (!j["h_sequence"].is_array() || j["h_sequence"].empty())
      bad("config: \"h_sequence\" must be a nonempty array");
    for (const auto& v : j["h_sequence"]) {
      if (!v.is_number()) bad("config: \"h_sequence\" entries must be numbers");
      cfg.h_sequence.push_back(v.get<double>());
    }
  }
  if (j.contains("lambda_grid")) cfg.lambdas = geometric_grid(j["lambda_grid"]);
  if (j.contains("lambda")) cfg.lambda_single = get_num(j, "lambda");
  if (j.contains("delta")) cfg.delta = get_num(j, "delta");
  if (j.contains("truncation_n")) {
    if (!j["truncation_n"].is_number_integer()) bad("config: \"truncation_n\" must be an integer");
    cfg.truncation_n = j["truncation_n"].get<int>();
  }
  if (j.contains("strict")) {
    if (!j["strict"].is_boolean()) bad("config: \"strict\" must be a bool");
    cfg.strict = j["strict"].get<bool>();
  }
  if (j.contains("gamma")) cfg.gamma = get_num(j, "gamma");
  if (j.contains("alpha")) cfg.alpha = get_num(j, "alpha");
  if (j.contains("n_rooms_list")) {
    if (!j["n_rooms_list"].is_array() || j["n_rooms_list"].empty())
      bad("config: \"n_rooms_list\" must be a nonempty array");
    for (const auto& v : j["n_rooms_list"]) {
      if (!v.is_number_integer()) bad("config: \"n_rooms_list\" entries must be integers");
      cfg.n_rooms_list.push_back(v.get<int>());
    }
  }
  if (j.contains("out_dir")) {
    if (!j["out_dir"].is_string()) bad("config: \"out_dir\" must be a string");
    cfg.out_dir = j["out_dir"].get<std::string>();
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer()) bad("config: \"seed\" must be an integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("threads")) {
    if (!j["threads"].is_number_integer()) bad("config: \"threads\" must be an integer");
    cfg.threads = j["threads"].get<int>();
  }
  if (j.contains("plot")) {
    if (!j["plot"].is_boolean()) bad("config: \"plot\" must be a bool");
    cfg.plot = j["plot"].get<bool>();
  }

  // Per-experiment presence checks, so a bad config dies before any work.
  auto need = [&](bool cond, const char* what) {
    if (!cond) bad("config: " + cfg.experiment + " requires " + what);
  };
  if (cfg.experiment == "weyl_scan") {
    need(cfg.domain.has_value(), "\"domain\"");
    need(cfg.h > 0, "\"h\"");
    need(!cfg.lambdas.empty(), "\"lambda_grid\"");
  } else if (cfg.experiment == "schrodinger_weyl_scan") {
    need(cfg.domain.has_value(), "\"domain\"");
    need(cfg.potential.has_value(), "\"potential\"");
    need(cfg.h > 0, "\"h\"");
    need(!cfg.lambdas.empty(), "\"lambda_grid\"");
  } else if (cfg.experiment == "clr_scan") {
    need(cfg.domain.has_value(), "\"domain\"");
    need(cfg.potential.has_value(), "\"potential\"");
    need(cfg.parameters.has_value(), "\"parameters\" (gamma, s [, beta])");
    need(cfg.h > 0, "\"h\"");
    need(!cfg.lambdas.empty(), "\"lambda_grid\"");
  } else if (cfg.experiment == "splitting_check") {
    need(cfg.domain.has_value(), "\"domain\"");
    need(cfg.potential.has_value(), "\"potential\"");
    need(cfg.h > 0, "\"h\"");
    need(j.contains("delta"), "\"delta\"");
    need(j.contains("lambda"), "\"lambda\"");
  } else if (cfg.experiment == "blowup_scan") {
    need(j.contains("gamma"), "\"gamma\"");
    need(j.contains("alpha"), "\"alpha\"");
    need(!cfg.h_sequence.empty(), "\"h_sequence\"");
    need(!cfg.lambdas.empty(), "\"lambda_grid\"");
  } else if (cfg.experiment == "rooms_probe") {
    need(!cfg.n_rooms_list.empty(), "\"n_rooms_list\"");
    need(j.contains("lambda"), "\"lambda\"");
    need(cfg.h > 0, "\"h\"");
  } else {
    bad("config: unknown experiment \"" + cfg.experiment + "\" (see `weylab list`)");
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream is(path);
  require(is.good(), Errc::invalid_configuration, "cannot read config file " + path);
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    bad("config: " + path + " is not valid JSON (" + e.what() + ")");
  }
  return parse_run_config(j);
}

ScanReport execute(const RunConfig& cfg) {
  const ScanOptions opts = options_of(cfg);
  if (cfg.experiment == "weyl_scan") return weyl_scan(*cfg.domain, cfg.h, cfg.lambdas, opts);
  if (cfg.experiment == "schrodinger_weyl_scan")
    return schrodinger_weyl_scan(*cfg.domain, *cfg.potential, cfg.h, cfg.lambdas, opts);
  if (cfg.experiment == "clr_scan")
    return clr_scan(*cfg.domain, *cfg.potential, *cfg.parameters, cfg.h, cfg.lambdas, opts);
  if (cfg.experiment == "splitting_check") return run_splitting(cfg);
  if (cfg.experiment == "blowup_scan")
    return blowup_scan(cfg.gamma, cfg.alpha, cfg.h_sequence, cfg.lambdas, opts,
                       cfg.parameters);
  if (cfg.experiment == "rooms_probe")
    return rooms_probe(cfg.n_rooms_list, cfg.lambda_single, cfg.h, opts);
  bad("config: unknown experiment \"" + cfg.experiment + "\"");
}

int run(const RunConfig& cfg) {
  const ScanReport report = execute(cfg);

  namespace fs = std::filesystem;
  const fs::path dir(cfg.out_dir);
  if (!dir.empty()) fs::create_directories(dir);

  std::ostringstream csv;
  report.write_csv(csv);
  atomic_write(dir / "rows.csv", csv.str());

  json rj = scan_report_to_json(report);
  rj["schema"] = 1;
  atomic_write(dir / "report.json", rj.dump(2) + "\n");

  if (cfg.plot) {
    std::ostringstream svg;
    write_scan_svg(report, svg);
    atomic_write(dir / "plot.svg", svg.str());
  }
  return report.all_pass() ? 0 : 1;
}

nlohmann::json list_experiments() {
  json experiments = json::array();

  experiments.push_back(schema_entry(
      "weyl_scan", "Neumann eigenvalue counts vs the leading Weyl term on a lambda grid",
      {"experiment", "domain", "h", "lambda_grid"},
      {{"domain", "domain spec (rectangle | disk | graph | rooms_and_passages)"},
       {"h", "grid spacing (number > 0)"},
       {"lambda_grid", "geometric grid {min, max, points}"}},
      json{{"domain", {{"type", "rectangle"}, {"a", 1.0}, {"b", 1.0}}},
           {"h", 0.02},
           {"lambda_grid", {{"min", 40.0}, {"max", 400.0}, {"points", 6}}}}));

  experiments.push_back(schema_entry(
      "schrodinger_weyl_scan",
      "N(-Delta + lambda V) at threshold 0 vs the phase-space prediction",
      {"experiment", "domain", "potential", "h", "lambda_grid"},
      {{"domain", "domain spec"},
       {"potential", "potential spec (zero | constant | distance_power | half_plane | bump)"},
       {"h", "grid spacing (number > 0)"},
       {"lambda_grid", "geometric grid {min, max, points}"}},
      json{{"domain", {{"type", "rectangle"}, {"a", 1.0}, {"b", 1.0}}},
           {"potential", {{"type", "constant"}, {"value", -1.0}}},
           {"h", 0.02},
           {"lambda_grid", {{"min", 40.0}, {"max", 400.0}, {"points", 6}}}}));

  experiments.push_back(schema_entry(
      "splitting_check",
      "integer subadditivity N(V) <= N((1-delta), V_n) + N(delta, V - V_n)",
      {"experiment", "domain", "potential", "h", "delta", "lambda"},
      {{"domain", "domain spec"},
       {"potential", "potential spec"},
       {"potential_n", "optional explicit approximant spec (default: truncation)"},
       {"truncation_n", "approximant index when potential_n is absent (integer >= 1)"},
       {"strict", "treat clipped cells in V - V_n as an error (bool)"},
       {"h", "grid spacing (number > 0)"},
       {"delta", "form split weight in (0,1)"},
       {"lambda", "coupling constant (number >= 0)"}},
      json{{"domain", {{"type", "rectangle"}, {"a", 1.0}, {"b", 1.0}}},
           {"potential", {{"type", "constant"}, {"value", -1.0}}},
           {"h", 0.05},
           {"delta", 0.5},
           {"lambda", 30.0},
           {"truncation_n", 2}}));

  experiments.push_back(schema_entry(
      "clr_scan", "CLR-type boundedness proxy: count/lambda^{d/2} against the triple norm",
      {"experiment", "domain", "potential", "parameters", "h", "lambda_grid"},
      {{"domain", "domain spec"},
       {"potential", "potential spec"},
       {"parameters", "{gamma, s [, d, beta]}; s', p~ derived"},
       {"h", "grid spacing (number > 0)"},
       {"lambda_grid", "geometric grid {min, max, points}"}},
      json{{"domain", {{"type", "rectangle"}, {"a", 1.0}, {"b", 1.0}}},
           {"potential", {{"type", "bump"}, {"cx", 0.5}, {"cy", 0.5}, {"radius", 0.3}, {"depth", 1.0}}},
           {"parameters", {{"gamma", 0.8}, {"s", 2.0}}},
           {"h", 0.02},
           {"lambda_grid", {{"min", 20.0}, {"max", 320.0}, {"points", 5}}}}));

  experiments.push_back(schema_entry(
      "blowup_scan",
      "non-semiclassical probe on a gamma-Hoelder graph domain with V = -dist^(-alpha): "
      "the weighted norm part must blow up under h-halving while L^{d/2} stabilizes",
      {"experiment", "gamma", "alpha", "h_sequence", "lambda_grid"},
      {{"gamma", "Hoelder exponent in (1/2, 1)"},
       {"alpha", "boundary blow-up rate of the potential (> 0)"},
       {"h_sequence", "halving grid spacings, coarse to fine"},
       {"lambda_grid", "geometric grid {min, max, points} (counts at the finest h)"},
       {"parameters", "optional {gamma, s [, beta]} override for the norm exponents"}},
      json{{"gamma", 0.8},
           {"alpha", 0.5},
           {"h_sequence", {0.02, 0.01, 0.005}},
           {"lambda_grid", {{"min", 8.0}, {"max", 128.0}, {"points", 4}}},
           {"parameters", {{"gamma", 0.8}, {"s", 2.0}, {"beta", 2.0}}}}));

  experiments.push_back(schema_entry(
      "rooms_probe", "low-lying Neumann counts on rooms-and-passages combs of growing depth",
      {"experiment", "n_rooms_list", "lambda", "h"},
      {{"n_rooms_list", "strictly increasing room counts (integers >= 1)"},
       {"lambda", "fixed small threshold"},
       {"h", "grid spacing (number > 0), must resolve the narrowest passage"}},
      json{{"n_rooms_list", {2, 3, 4}}, {"lambda", 0.4}, {"h", 0.01}}));

  return json{{"schema", 1}, {"experiments", std::move(experiments)}};
}

void write_scan_svg(const ScanReport& r, std::ostream& os) {
  const int W = 640, H = 480;
  const double ml = 70, mr = 20, mt = 40, mb = 50;

  struct Pt {
    double x, y;
  };
  std::vector<Pt> pts;
  for (const ScanRow& row : r.rows)
    if (row.lambda > 0 && row.ratio > 0)
      pts.push_back({std::log10(row.lambda), std::log10(row.ratio)});

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
  os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << ml << "\" y=\"24\" font-family=\"monospace\" font-size=\"15\">"
     << r.experiment << (r.exploratory ? " (exploratory)" : "") << "</text>\n";

  if (pts.size() < 1) {
    os << "<text x=\"" << ml << "\" y=\"" << H / 2
       << "\" font-family=\"monospace\" font-size=\"13\">no positive ratios to plot</text>\n";
    os << "</svg>\n";
    return;
  }

  double x0 = pts.front().x, x1 = pts.front().x, y0 = pts.front().y, y1 = pts.front().y;
  for (const Pt& p : pts) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  y0 = std::min(y0, 0.0);  // keep the ratio = 1 line in frame
  y1 = std::max(y1, 0.0);
  if (x1 - x0 < 1e-12) {
    x0 -= 0.5;
    x1 += 0.5;
  }
  const double pad = 0.05 * (y1 - y0 + 1e-12);
  y0 -= pad;
  y1 += pad;

  auto sx = [&](double x) { return ml + (x - x0) / (x1 - x0) * (W - ml - mr); };
  auto sy = [&](double y) { return H - mb - (y - y0) / (y1 - y0) * (H - mt - mb); };
  char buf[64];

  // frame + decade ticks
  os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << (W - ml - mr)
     << "\" height=\"" << (H - mt - mb)
     << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  for (int e = static_cast<int>(std::ceil(x0)); e <= static_cast<int>(std::floor(x1)); ++e) {
    const double px = sx(e);
    os << "<line x1=\"" << px << "\" y1=\"" << (H - mb) << "\" x2=\"" << px << "\" y2=\""
       << (H - mb + 6) << "\" stroke=\"black\"/>\n";
    std::snprintf(buf, sizeof(buf), "1e%d", e);
    os << "<text x=\"" << px << "\" y=\"" << (H - mb + 22)
       << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"12\">" << buf
       << "</text>\n";
  }
  for (int e = static_cast<int>(std::ceil(y0)); e <= static_cast<int>(std::floor(y1)); ++e) {
    const double py = sy(e);
    os << "<line x1=\"" << (ml - 6) << "\" y1=\"" << py << "\" x2=\"" << ml << "\" y2=\"" << py
       << "\" stroke=\"black\"/>\n";
    std::snprintf(buf, sizeof(buf), "1e%d", e);
    os << "<text x=\"" << (ml - 10) << "\" y=\"" << (py + 4)
       << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"12\">" << buf
       << "</text>\n";
  }
  os << "<text x=\"" << (W - mr) << "\" y=\"" << (H - 12)
     << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"12\">lambda</text>\n";
  os << "<text x=\"14\" y=\"" << mt
     << "\" font-family=\"monospace\" font-size=\"12\" transform=\"rotate(-90 14," << mt
     << ")\" text-anchor=\"end\">ratio</text>\n";

  // ratio = 1 reference
  os << "<line x1=\"" << ml << "\" y1=\"" << sy(0.0) << "\" x2=\"" << (W - mr) << "\" y2=\""
     << sy(0.0) << "\" stroke=\"gray\" stroke-dasharray=\"6 4\"/>\n";

  os << "<polyline fill=\"none\" stroke=\"crimson\" stroke-width=\"1.5\" points=\"";
  for (const Pt& p : pts) {
    std::snprintf(buf, sizeof(buf), "%.6g,%.6g ", sx(p.x), sy(p.y));
    os << buf;
  }
  os << "\"/>\n";
  for (const Pt& p : pts)
    os << "<circle cx=\"" << sx(p.x) << "\" cy=\"" << sy(p.y)
       << "\" r=\"3\" fill=\"crimson\"/>\n";
  os << "</svg>\n";
}

}  // namespace weylab
