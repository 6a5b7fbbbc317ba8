#include "weylab/serialize.hpp"

#include <cmath>

#include "weylab/common.hpp"

namespace weylab {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& msg) { fail(Errc::invalid_configuration, msg); }

const json& member(const json& j, const char* key, const char* ctx) {
  if (!j.is_object()) bad(std::string(ctx) + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(std::string(ctx) + ": missing key \"" + key + "\"");
  return *it;
}

double num(const json& j, const char* key, const char* ctx) {
  const json& v = member(j, key, ctx);
  if (!v.is_number()) bad(std::string(ctx) + ": \"" + key + "\" must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) bad(std::string(ctx) + ": \"" + key + "\" must be finite");
  return d;
}

double num_or(const json& j, const char* key, double fallback, const char* ctx) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return num(j, key, ctx);
}

int integer(const json& j, const char* key, const char* ctx) {
  const json& v = member(j, key, ctx);
  if (!v.is_number_integer()) bad(std::string(ctx) + ": \"" + key + "\" must be an integer");
  return v.get<int>();
}

std::string tag_of(const json& j, const char* ctx) {
  const json& v = member(j, "type", ctx);
  if (!v.is_string()) bad(std::string(ctx) + ": \"type\" must be a string");
  return v.get<std::string>();
}

}  // namespace

json holder_to_json(const HolderFunction& f) {
  return json{{"gamma", f.gamma()},
              {"amplitude", f.amplitude()},
              {"base", f.base()},
              {"terms", f.terms()},
              {"offset", f.offset()}};
}

HolderFunction holder_from_json(const json& j) {
  const char* ctx = "profile";
  return HolderFunction(num(j, "gamma", ctx), num(j, "amplitude", ctx),
                        integer(j, "base", ctx), integer(j, "terms", ctx),
                        num(j, "offset", ctx));
}

json domain_to_json(const Domain2D& d) {
  json j;
  std::visit(
      [&](const auto& shape) {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, Rectangle>) {
          j = json{{"type", "rectangle"}, {"a", shape.a}, {"b", shape.b}};
        } else if constexpr (std::is_same_v<T, Disk>) {
          j = json{{"type", "disk"}, {"r", shape.r}};
        } else if constexpr (std::is_same_v<T, GraphDomain>) {
          j = json{{"type", "graph"},
                   {"profile", holder_to_json(shape.f)},
                   {"base_lo", shape.base_lo},
                   {"base_hi", shape.base_hi},
                   {"floor_y", shape.floor_y}};
        } else {
          j = json{{"type", "rooms_and_passages"}, {"n_rooms", shape.n_rooms}};
        }
      },
      d.shape());
  return j;
}

Domain2D domain_from_json(const json& j) {
  const char* ctx = "domain";
  const std::string type = tag_of(j, ctx);
  if (type == "rectangle") return make_rectangle(num(j, "a", ctx), num(j, "b", ctx));
  if (type == "disk") return make_disk(num(j, "r", ctx));
  if (type == "graph")
    return make_graph_domain(holder_from_json(member(j, "profile", ctx)),
                             num(j, "base_lo", ctx), num(j, "base_hi", ctx),
                             num(j, "floor_y", ctx));
  if (type == "rooms_and_passages") return make_rooms_and_passages(integer(j, "n_rooms", ctx));
  bad("domain: unknown type \"" + type + "\"");
}

json potential_to_json(const PotentialSpec& v) {
  json j;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ZeroPotential>) {
          j = json{{"type", "zero"}};
        } else if constexpr (std::is_same_v<T, ConstantPotential>) {
          j = json{{"type", "constant"}, {"value", p.value}};
        } else if constexpr (std::is_same_v<T, DistancePowerPotential>) {
          j = json{{"type", "distance_power"}, {"alpha", p.alpha}, {"amplitude", p.amplitude}};
        } else if constexpr (std::is_same_v<T, HalfPlanePotential>) {
          j = json{{"type", "half_plane"}, {"split_x", p.split_x}, {"depth", p.depth}};
        } else {
          j = json{{"type", "bump"},
                   {"cx", p.cx},
                   {"cy", p.cy},
                   {"radius", p.radius},
                   {"depth", p.depth}};
        }
      },
      v);
  return j;
}

PotentialSpec potential_from_json(const json& j) {
  const char* ctx = "potential";
  const std::string type = tag_of(j, ctx);
  if (type == "zero") return ZeroPotential{};
  if (type == "constant") return ConstantPotential{num(j, "value", ctx)};
  if (type == "distance_power")
    return DistancePowerPotential{num(j, "alpha", ctx), num_or(j, "amplitude", 1.0, ctx)};
  if (type == "half_plane")
    return HalfPlanePotential{num(j, "split_x", ctx), num(j, "depth", ctx)};
  if (type == "bump")
    return BumpPotential{num(j, "cx", ctx), num(j, "cy", ctx), num(j, "radius", ctx),
                         num(j, "depth", ctx)};
  bad("potential: unknown type \"" + type + "\"");
}

json weight_to_json(const WeightSpec& w) {
  if (w.kind == WeightSpec::Kind::Unit) return json{{"type", "unit"}};
  return json{{"type", "distance_power"}, {"beta", w.beta}};
}

WeightSpec weight_from_json(const json& j) {
  const char* ctx = "weight";
  const std::string type = tag_of(j, ctx);
  WeightSpec w;
  if (type == "unit") {
    w.kind = WeightSpec::Kind::Unit;
    return w;
  }
  if (type == "distance_power") {
    w.kind = WeightSpec::Kind::DistancePower;
    w.beta = num(j, "beta", ctx);
    return w;
  }
  bad("weight: unknown type \"" + type + "\"");
}

json parameters_to_json(const ParameterSet& p) {
  return json{{"d", p.d},         {"gamma", p.gamma},     {"s", p.s},
              {"s_prime", p.s_prime}, {"p_tilde", p.p_tilde}, {"beta", p.beta}};
}

ParameterSet parameters_from_json(const json& j) {
  const char* ctx = "parameters";
  const int d = j.contains("d") ? integer(j, "d", ctx) : 2;
  const double gamma = num(j, "gamma", ctx);
  const double s = num(j, "s", ctx);
  std::optional<double> beta;
  if (j.contains("beta")) beta = num(j, "beta", ctx);
  const ParameterSet p = solve_parameters(d, gamma, s, beta);
  const double tol = 1e-9;
  if (j.contains("s_prime") && std::abs(num(j, "s_prime", ctx) - p.s_prime) > tol)
    bad("parameters: \"s_prime\" disagrees with s/(s-1)");
  if (j.contains("p_tilde") && std::abs(num(j, "p_tilde", ctx) - p.p_tilde) > tol)
    bad("parameters: \"p_tilde\" disagrees with s*(d/2 + 1/(2s'))");
  return p;
}

json scan_report_to_json(const ScanReport& r) {
  json params = json::object();
  for (const auto& kv : r.parameters) params[kv.first] = kv.second;
  json assertions = json::array();
  for (const auto& a : r.assertions)
    assertions.push_back(json{{"invariant", a.invariant}, {"pass", a.pass}, {"detail", a.detail}});
  json rows = json::array();
  for (const auto& row : r.rows) {
    json jr{{"lambda", row.lambda},
            {"count", row.count},
            {"prediction", row.prediction},
            {"ratio", row.ratio}};
    for (const auto& kv : row.aux) jr[kv.first] = kv.second;
    rows.push_back(std::move(jr));
  }
  return json{{"experiment", r.experiment}, {"exploratory", r.exploratory},
              {"parameters", std::move(params)}, {"assertions", std::move(assertions)},
              {"rows", std::move(rows)},         {"all_pass", r.all_pass()}};
}

json cover_to_json(const OscillatoryCover& c) {
  auto tag_name = [](BoxTag t) {
    switch (t) {
      case BoxTag::Bulk:
        return "bulk";
      case BoxTag::BoundaryStack:
        return "stack";
      default:
        return "cap";
    }
  };
  json boxes = json::array();
  for (const auto& b : c.boxes)
    boxes.push_back(json{{"x0", b.box.x0},
                         {"y0", b.box.y0},
                         {"x1", b.box.x1},
                         {"y1", b.box.y1},
                         {"tag", tag_name(b.tag)}});
  json partition = json::array();
  for (const auto& iv : c.base_partition)
    partition.push_back(
        json{{"x0", iv.x0}, {"x1", iv.x1}, {"f_min", iv.f_min}, {"f_max", iv.f_max}});
  json j{{"lambda", c.lambda},
         {"ell", c.ell},
         {"delta", c.delta},
         {"overlap_multiplicity", c.overlap_multiplicity},
         {"bulk_count", c.bulk_count},
         {"stack_count", c.stack_count},
         {"cap_count", c.cap_count},
         {"boxes", std::move(boxes)},
         {"base_partition", std::move(partition)}};
  if (c.profile) j["profile"] = holder_to_json(*c.profile);
  return j;
}

}  // namespace weylab
