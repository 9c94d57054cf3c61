#pragma once

// JSON-level counterparts of io.hpp, shared by io.cpp and cli.cpp.

#include <json.hpp>

#include "biasforge/io.hpp"

namespace biasforge::detail {

using json = nlohmann::ordered_json;

json parse_json(std::string_view text, std::string_view what);

Distribution distribution_from(const json& j);
/// j is a string (built-in name, or JSON text) or a pieces object.
BiasFunction bias_from(const json& j, const Distribution* X);
std::vector<double> nodes_from(const json& j);
SteinOperator operator_from(const json& j, const Distribution* X);

json to_json(const BiasedDistribution& law, int k, int m);
json to_json(const SuiteReport& report);
json to_json(const FixedPointReport& report);
json to_json(const DistanceBound& bound);
json to_json(const BoundEstimate& estimate);

}  // namespace biasforge::detail
