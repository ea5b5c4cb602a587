#pragma once

// Internal helpers shared by the serialization code. Not installed.

#include <string>

#include "json.hpp"
#include "statepredict/error.hpp"
#include "statepredict/params.hpp"

namespace statepredict::detail {

nlohmann::json value_to_json(const Value& value);

/// Accepts JSON booleans, integers, floats and strings; anything else is a
/// schema violation reported with the given code.
Value value_from_json(const nlohmann::json& j, ErrorCode on_error);

nlohmann::json params_to_json(const ParameterSet& params);
ParameterSet params_from_json(const nlohmann::json& j, ErrorCode on_error);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace statepredict::detail
