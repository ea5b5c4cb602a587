#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "statepredict/params.hpp"

namespace statepredict {

/// Absolute path of a state from the root, e.g. root/PickTask/GraspObject.
/// Ordering is lexicographic over the path segments; it is the tie-break
/// order used everywhere downstream.
class StateId {
 public:
  StateId() = default;
  explicit StateId(std::vector<std::string> path);

  /// Splits on '/'. Rejects empty input and empty segments.
  static StateId parse(std::string_view text);

  const std::vector<std::string>& path() const { return path_; }
  std::string to_string() const;
  bool empty() const { return path_.empty(); }

  std::optional<StateId> parent() const;
  bool is_ancestor_or_self_of(const StateId& other) const;

  auto operator<=>(const StateId&) const = default;

 private:
  std::vector<std::string> path_;
};

enum class StateKind { normal, success, failure };

const char* to_string(StateKind kind);
StateKind state_kind_from_string(std::string_view text);

/// One state in the hierarchy. Children are implied by the id paths of the
/// other nodes; composites must name their initial child.
struct StateNode {
  StateId id;
  StateKind kind = StateKind::normal;
  bool important = false;
  std::optional<StateId> initial_child;
};

struct EventDef {
  std::string name;
  ParameterSet payload;
};

struct TransitionDef {
  StateId from;
  std::string event_name;
  StateId to;

  friend bool operator==(const TransitionDef&, const TransitionDef&) = default;
};

/// Validated hierarchical state machine definition. Immutable once built;
/// stepping happens on MachineState values.
class Statechart {
 public:
  const StateId& root() const { return root_; }
  bool contains(const StateId& id) const { return nodes_.count(id) > 0; }
  const StateNode& node(const StateId& id) const;
  const std::vector<StateId>& children(const StateId& id) const;
  bool is_leaf(const StateId& id) const { return children(id).empty(); }

  /// All state ids, sorted.
  std::vector<StateId> state_ids() const;

  /// Leaves whose node carries the important flag, plus important
  /// composites; sorted.
  std::set<StateId> important_states() const;

  /// Deepest leaf reached from `from` by following initial_child links.
  StateId initial_leaf(const StateId& from) const;

  /// Transition registered for (from, event), if any.
  const TransitionDef* transition(const StateId& from, const std::string& event) const;

  std::vector<TransitionDef> transitions() const;

  friend Statechart build_statechart(std::vector<StateNode> nodes,
                                     std::vector<TransitionDef> transitions);

 private:
  Statechart() = default;

  StateId root_;
  std::map<StateId, StateNode> nodes_;
  std::map<StateId, std::vector<StateId>> children_;
  std::map<std::pair<StateId, std::string>, TransitionDef> transitions_;
};

/// Validates the node and transition sets and assembles the machine.
/// Throws Error with code duplicate_state_id, unknown_state_in_transition,
/// ambiguous_transition, missing_initial_child or invalid_statechart.
Statechart build_statechart(std::vector<StateNode> nodes,
                            std::vector<TransitionDef> transitions);

/// Current execution point of one machine instance. Plain value; stepping
/// returns a new state and never mutates the chart.
struct MachineState {
  const Statechart* chart = nullptr;
  StateId active;  // always a leaf
};

MachineState initial_machine_state(const Statechart& chart);

struct StepResult {
  MachineState state;
  std::optional<TransitionDef> fired;
};

/// Dispatches the event from the active leaf upward; the innermost state
/// with a matching transition fires it and the machine descends to the
/// target's initial leaf. Events nobody handles are absorbed silently: the
/// scenario injects environment events that most states ignore.
StepResult step(const MachineState& ms, const EventDef& event);

StateId active_state(const MachineState& ms);

/// Canonical JSON document with a nested `states` tree and a sorted
/// `transitions` array. Reserializing a parsed document is byte-stable.
std::string to_canonical_json(const Statechart& chart);
Statechart statechart_from_json(const std::string& text);
Statechart load_statechart(const std::string& path);
void save_statechart(const Statechart& chart, const std::string& path);

}  // namespace statepredict
