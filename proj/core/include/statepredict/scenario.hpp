#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "statepredict/monitor.hpp"
#include "statepredict/resources.hpp"
#include "statepredict/rng.hpp"
#include "statepredict/statechart.hpp"
#include "statepredict/worldstore.hpp"

namespace statepredict {

/// Stochastic human interruption model. At every tick the human makes one
/// three-way decision: stay near the entrance, walk to the table and grasp
/// an object, or leave (staying out when already absent). A grasp targets
/// the robot's object with probability p_grasp_robot_object, which forces
/// the robot to abort and start a dialog; grasping another object lets the
/// robot continue. The identity is drawn from human_ids when (re)entering.
struct HumanModelConfig {
  double p_enter_stay = 0.6;
  double p_walk_and_grasp = 0.25;
  double p_leave = 0.15;
  double p_grasp_robot_object = 0.5;
  std::vector<std::pair<std::string, double>> human_ids = {{"alice", 0.7}, {"bob", 0.3}};
};

struct ScenarioConfig {
  HumanModelConfig human;
  double p_failure_per_substate = 0.3;
  std::uint64_t seed = 0;
  int horizon = 3;
  /// Empty means: use the chart's own important flags.
  std::vector<StateId> important_states;
  std::vector<std::string> env_keys = {"human_action", "human_id", "human_present",
                                       "object_location"};
  /// State parameterization (phi) applied to every executed state.
  ParameterSet state_params = {{"object_id", std::string("cup")},
                               {"target_location", std::string("sidebar")}};
  /// Path of a profile table file; empty means built-in defaults.
  std::string profiles;
};

/// Throws invalid_config on out-of-range probabilities or horizon < 1.
void validate_config(const ScenarioConfig& cfg);

ScenarioConfig default_config();
std::string config_to_json(const ScenarioConfig& cfg);
ScenarioConfig config_from_json(const std::string& text);
ScenarioConfig load_config(const std::string& path);
void save_config(const ScenarioConfig& cfg, const std::string& path);

/// FNV-1a digest of the canonical config JSON, as 16 hex digits.
std::string config_digest(const ScenarioConfig& cfg);

/// The pick-and-place task machine:
///
///   root
///   +-- Idle
///   +-- PickTask   (MoveToLocation -> FindObject -> VisualServo ->
///   |               GraspObject -> LiftObject -> Success;
///   |               GraspErrorHandling; Failure)
///   +-- PlaceTask  (MoveToLocation -> PlaceObject -> ReleaseGrasp ->
///   |               LiftHand -> Success; Failure)
///   +-- Dialog
///
/// Every task substate has an explicit failure transition into its task's
/// Failure state, and both tasks abort into Dialog when the human grasps
/// the robot's object.
Statechart pick_and_place_statechart();

/// Illustrative CPU/memory profiles for the scenario states. The values are
/// configuration, not measurements; tests only rely on their ordering.
ProfileTable default_profile_table();

enum class HumanAction { enter_stay, walk_and_grasp, leave };

struct HumanState {
  bool present = false;
  std::string action = "absent";
  std::string id = "none";
};

struct HumanStepResult {
  HumanAction action;
  std::optional<EventDef> event;
};

/// Advances the human automaton by one decision and returns the
/// environment-changing event, if any. Absent humans that decide to stay
/// away produce no event.
HumanStepResult human_step(Rng& rng, const HumanModelConfig& cfg, HumanState& state);

enum class Outcome { success, failure, aborted_by_human };

const char* to_string(Outcome outcome);

struct EpisodeTrace {
  std::uint64_t episode_id = 0;
  std::vector<TransitionEvent> events;  // important-level, in publication order
  Outcome outcome = Outcome::success;

  /// Monitored state sequence, starting with the initial state.
  std::vector<StateId> state_sequence() const;
};

/// Called on every important-state change, after the new world state has
/// been interned and the incoming transition recorded.
using PredictHook = std::function<void(WorldStateId, const WorldState&)>;

/// Runs one pick-and-place execution: steps the statechart, interleaves
/// human decisions and (optionally) per-substate failure injection, and
/// feeds every important-state change through the monitor into the store.
EpisodeTrace run_episode(const ScenarioConfig& cfg, WorldStore& store, Rng& rng,
                         bool inject_failures = false, const PredictHook& hook = nullptr,
                         std::uint64_t episode_id = 0);

/// Runs n episodes with learning enabled and no prediction hook.
void train(const ScenarioConfig& cfg, WorldStore& store, Rng& rng, int n_episodes,
           bool inject_failures = false);

}  // namespace statepredict
