#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "statepredict/params.hpp"
#include "statepredict/statechart.hpp"

namespace statepredict {

/// The unit the Markov chain is defined over: the active statechart state
/// together with its parameterization (phi) and an environment snapshot
/// (psi). Equality is exact canonical equality of all components.
struct WorldState {
  StateId state;
  ParameterSet state_params;
  ParameterSet env_params;

  /// Canonical JSON text; identical world states serialize identically.
  std::string canonical_key() const;

  friend bool operator==(const WorldState&, const WorldState&) = default;
};

/// Dense index assigned in interning order; defines the row/column order of
/// the transition matrix and the tie-break order for predictions.
struct WorldStateId {
  std::uint32_t index = 0;
  auto operator<=>(const WorldStateId&) const = default;
};

struct TransitionRecord {
  WorldStateId from;
  WorldStateId to;
  std::uint64_t count = 0;
};

/// Immutable copy of the store contents used by the predictor, so a running
/// prediction never observes a half-applied update.
struct StoreSnapshot {
  std::uint64_t revision = 0;
  std::vector<WorldState> states;
  std::vector<std::vector<std::pair<std::uint32_t, std::uint64_t>>> outgoing;

  std::size_t size() const { return states.size(); }
};

/// Interns world states and accumulates transition counts online. Single
/// writer, any number of snapshot readers.
///
/// Persistent form (.wsdb.jsonl): one JSON object per line. Line 1 is the
/// header {"format":"wsdb","version":1}; then one "ws" line per world state
/// in id order; then one "tr" line per record sorted by (from, to). Keys
/// sorted, no insignificant whitespace.
class WorldStore {
 public:
  WorldStore() = default;
  WorldStore(WorldStore&& other) noexcept;
  WorldStore& operator=(WorldStore&& other) noexcept;

  /// Returns the existing id for an equal world state, or assigns the next
  /// dense index.
  WorldStateId intern(const WorldState& ws);

  /// Lookup without interning.
  std::optional<WorldStateId> find(const WorldState& ws) const;

  /// Increments the (from, to) count, creating it at 1. Both ids must be
  /// interned. Returns the updated record.
  TransitionRecord record_transition(WorldStateId from, WorldStateId to);

  /// Records with the given source, sorted by target id ascending.
  std::vector<std::pair<WorldStateId, std::uint64_t>> outgoing(WorldStateId from) const;

  const WorldState& world_state(WorldStateId id) const;
  std::size_t size() const;
  std::uint64_t total_count() const;
  std::uint64_t revision() const;

  StoreSnapshot snapshot() const;
  WorldStore clone() const;

 private:
  void require_known(WorldStateId id) const;

  mutable std::mutex mu_;
  std::vector<WorldState> states_;
  std::unordered_map<std::string, std::uint32_t> index_;  // canonical key -> id
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> counts_;
  std::uint64_t revision_ = 0;
};

void save_store(const WorldStore& store, const std::string& path);
WorldStore load_store(const std::string& path);

std::string store_to_text(const WorldStore& store);
WorldStore store_from_text(const std::string& text);

}  // namespace statepredict
