#include "statepredict/params.hpp"

#include <fstream>
#include <sstream>

#include "json_util.hpp"
#include "statepredict/error.hpp"

namespace statepredict {

namespace detail {

nlohmann::json value_to_json(const Value& value) {
  return std::visit([](const auto& v) { return nlohmann::json(v); }, value);
}

Value value_from_json(const nlohmann::json& j, ErrorCode on_error) {
  switch (j.type()) {
    case nlohmann::json::value_t::boolean:
      return j.get<bool>();
    case nlohmann::json::value_t::number_integer:
    case nlohmann::json::value_t::number_unsigned:
      return j.get<std::int64_t>();
    case nlohmann::json::value_t::number_float:
      return j.get<double>();
    case nlohmann::json::value_t::string:
      return j.get<std::string>();
    default:
      throw Error(on_error, "parameter values must be scalar, got " + std::string(j.type_name()));
  }
}

nlohmann::json params_to_json(const ParameterSet& params) {
  nlohmann::json obj = nlohmann::json::object();
  for (const auto& [key, value] : params) obj[key] = value_to_json(value);
  return obj;
}

ParameterSet params_from_json(const nlohmann::json& j, ErrorCode on_error) {
  if (!j.is_object()) throw Error(on_error, "parameter set must be a JSON object");
  ParameterSet out;
  for (const auto& [key, value] : j.items()) out.set(key, value_from_json(value, on_error));
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_failure, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::io_failure, "read failed for " + path);
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io_failure, "cannot open " + path + " for writing");
  out << content;
  out.flush();
  if (!out) throw Error(ErrorCode::io_failure, "write failed for " + path);
}

}  // namespace detail

std::string value_text(const Value& value) {
  return detail::value_to_json(value).dump();
}

void ParameterSet::set(const std::string& key, Value value) {
  if (key.empty()) throw Error(ErrorCode::invalid_argument, "parameter key must be non-empty");
  entries_[key] = std::move(value);
}

const Value* ParameterSet::find(const std::string& key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

std::string ParameterSet::canonical_text() const {
  return detail::params_to_json(*this).dump();
}

}  // namespace statepredict
