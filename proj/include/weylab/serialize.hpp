#pragma once

#include <string>

#include "json.hpp"
#include "weylab/covering.hpp"
#include "weylab/experiments.hpp"
#include "weylab/forms.hpp"
#include "weylab/geometry.hpp"
#include "weylab/semiclassics.hpp"

namespace weylab {

// JSON shapes are tagged unions keyed on "type"; every *_from_json rejects
// unknown tags, missing fields, and out-of-range values with
// invalid-configuration errors that name the offending key.

nlohmann::json holder_to_json(const HolderFunction& f);
HolderFunction holder_from_json(const nlohmann::json& j);

nlohmann::json domain_to_json(const Domain2D& d);
Domain2D domain_from_json(const nlohmann::json& j);

nlohmann::json potential_to_json(const PotentialSpec& v);
PotentialSpec potential_from_json(const nlohmann::json& j);

nlohmann::json weight_to_json(const WeightSpec& w);
WeightSpec weight_from_json(const nlohmann::json& j);

nlohmann::json parameters_to_json(const ParameterSet& p);
// Accepts either the full record or just {gamma, s [, d, beta]}; derived
// entries, when present, are cross-checked against solve_parameters.
ParameterSet parameters_from_json(const nlohmann::json& j);

// One-way exports for reports and covers.
nlohmann::json scan_report_to_json(const ScanReport& r);
nlohmann::json cover_to_json(const OscillatoryCover& c);

}  // namespace weylab
