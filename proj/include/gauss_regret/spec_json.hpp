#pragma once

#include <string>

#include <json.hpp>

#include "gauss_regret/set_spec.hpp"

namespace gauss_regret {

// Parses a set spec; errors carry the JSON path of the offending field, or the
// line and column for syntax errors.
SetSpec spec_from_json(const nlohmann::json& j);
SetSpec spec_from_string(const std::string& text);
SetSpec spec_from_file(const std::string& path);

nlohmann::json spec_to_json(const SetSpec& s);

}  // namespace gauss_regret
