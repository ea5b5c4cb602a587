#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <utility>
#include <variant>

namespace statepredict {

/// Scalar parameter value. Booleans, integers, decimals and tokens are
/// distinct: 1, 1.0 and "1" are three different values.
using Value = std::variant<bool, std::int64_t, double, std::string>;

/// Canonical JSON text of a single value ("true", "42", "1.5", "\"token\"").
std::string value_text(const Value& value);

/// Ordered key/value set used for state parameters (phi) and environment
/// snapshots (psi). Keys are unique and kept sorted ascending, which makes
/// the canonical form and equality trivial.
class ParameterSet {
 public:
  ParameterSet() = default;
  ParameterSet(std::initializer_list<std::pair<const std::string, Value>> init)
      : entries_(init) {}

  void set(const std::string& key, Value value);
  const Value* find(const std::string& key) const;
  bool contains(const std::string& key) const { return entries_.count(key) > 0; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  /// JSON object with sorted keys and no insignificant whitespace.
  std::string canonical_text() const;

  friend bool operator==(const ParameterSet&, const ParameterSet&) = default;

 private:
  std::map<std::string, Value> entries_;
};

}  // namespace statepredict
