#include "statepredict/scenario.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "json_util.hpp"
#include "statepredict/error.hpp"
#include "statepredict/logging.hpp"

namespace statepredict {

namespace {

constexpr const char* kTransitionTopic = "statechart.transitions";
constexpr int kMaxTicks = 100000;

struct StateSpec {
  const char* path;
  StateKind kind;
  bool important;
  const char* initial;  // child name, nullptr for leaves
};

constexpr StateSpec kStates[] = {
    {"root", StateKind::normal, false, "Idle"},
    {"root/Idle", StateKind::normal, true, nullptr},
    {"root/PickTask", StateKind::normal, false, "MoveToLocation"},
    {"root/PickTask/MoveToLocation", StateKind::normal, true, nullptr},
    {"root/PickTask/FindObject", StateKind::normal, true, nullptr},
    {"root/PickTask/VisualServo", StateKind::normal, true, nullptr},
    {"root/PickTask/GraspObject", StateKind::normal, true, nullptr},
    {"root/PickTask/LiftObject", StateKind::normal, true, nullptr},
    {"root/PickTask/GraspErrorHandling", StateKind::normal, true, nullptr},
    {"root/PickTask/Success", StateKind::success, true, nullptr},
    {"root/PickTask/Failure", StateKind::failure, true, nullptr},
    {"root/PlaceTask", StateKind::normal, false, "MoveToLocation"},
    {"root/PlaceTask/MoveToLocation", StateKind::normal, true, nullptr},
    {"root/PlaceTask/PlaceObject", StateKind::normal, true, nullptr},
    {"root/PlaceTask/ReleaseGrasp", StateKind::normal, true, nullptr},
    {"root/PlaceTask/LiftHand", StateKind::normal, true, nullptr},
    {"root/PlaceTask/Success", StateKind::success, true, nullptr},
    {"root/PlaceTask/Failure", StateKind::failure, true, nullptr},
    {"root/Dialog", StateKind::normal, true, nullptr},
};

struct TransitionSpec {
  const char* from;
  const char* event;
  const char* to;
};

constexpr TransitionSpec kTransitions[] = {
    {"root/Idle", "start", "root/PickTask"},
    {"root/PickTask/MoveToLocation", "arrived", "root/PickTask/FindObject"},
    {"root/PickTask/FindObject", "object_found", "root/PickTask/VisualServo"},
    {"root/PickTask/VisualServo", "aligned", "root/PickTask/GraspObject"},
    {"root/PickTask/GraspObject", "grasped", "root/PickTask/LiftObject"},
    {"root/PickTask/GraspObject", "grasp_error", "root/PickTask/GraspErrorHandling"},
    {"root/PickTask/GraspErrorHandling", "recovered", "root/PickTask/VisualServo"},
    {"root/PickTask/LiftObject", "lifted", "root/PickTask/Success"},
    {"root/PickTask/Success", "pick_done", "root/PlaceTask"},
    {"root/PlaceTask/MoveToLocation", "arrived", "root/PlaceTask/PlaceObject"},
    {"root/PlaceTask/PlaceObject", "placed", "root/PlaceTask/ReleaseGrasp"},
    {"root/PlaceTask/ReleaseGrasp", "released", "root/PlaceTask/LiftHand"},
    {"root/PlaceTask/LiftHand", "hand_lifted", "root/PlaceTask/Success"},
    // The human grasping the robot's object aborts whichever task runs.
    {"root/PickTask", "human_grasped_robot_object", "root/Dialog"},
    {"root/PlaceTask", "human_grasped_robot_object", "root/Dialog"},
};

// Work event the robot emits when a state finishes normally.
struct CompletionSpec {
  const char* state;
  const char* event;
};

constexpr CompletionSpec kCompletions[] = {
    {"root/Idle", "start"},
    {"root/PickTask/MoveToLocation", "arrived"},
    {"root/PickTask/FindObject", "object_found"},
    {"root/PickTask/VisualServo", "aligned"},
    {"root/PickTask/GraspObject", "grasped"},
    {"root/PickTask/GraspErrorHandling", "recovered"},
    {"root/PickTask/LiftObject", "lifted"},
    {"root/PickTask/Success", "pick_done"},
    {"root/PlaceTask/MoveToLocation", "arrived"},
    {"root/PlaceTask/PlaceObject", "placed"},
    {"root/PlaceTask/ReleaseGrasp", "released"},
    {"root/PlaceTask/LiftHand", "hand_lifted"},
};

void require_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::invalid_config,
                std::string(name) + " must be in [0,1], got " + std::to_string(p));
  }
}

std::string sample_human_id(Rng& rng, const HumanModelConfig& cfg) {
  std::vector<double> weights;
  weights.reserve(cfg.human_ids.size());
  for (const auto& [id, weight] : cfg.human_ids) weights.push_back(weight);
  return cfg.human_ids[rng.weighted(weights)].first;
}

}  // namespace

void validate_config(const ScenarioConfig& cfg) {
  require_probability(cfg.human.p_enter_stay, "p_enter_stay");
  require_probability(cfg.human.p_walk_and_grasp, "p_walk_and_grasp");
  require_probability(cfg.human.p_leave, "p_leave");
  require_probability(cfg.human.p_grasp_robot_object, "p_grasp_robot_object");
  const double sum = cfg.human.p_enter_stay + cfg.human.p_walk_and_grasp + cfg.human.p_leave;
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(ErrorCode::invalid_config,
                "human action probabilities must sum to 1, got " + std::to_string(sum));
  }
  if (cfg.human.human_ids.empty()) {
    throw Error(ErrorCode::invalid_config, "human_ids must not be empty");
  }
  double id_mass = 0.0;
  for (const auto& [id, weight] : cfg.human.human_ids) {
    if (id.empty()) throw Error(ErrorCode::invalid_config, "human id must be non-empty");
    if (weight < 0.0) throw Error(ErrorCode::invalid_config, "human id weight must be >= 0");
    id_mass += weight;
  }
  if (id_mass <= 0.0) {
    throw Error(ErrorCode::invalid_config, "human id weights must have positive mass");
  }
  require_probability(cfg.p_failure_per_substate, "p_failure_per_substate");
  if (cfg.horizon < 1) {
    throw Error(ErrorCode::invalid_config, "horizon must be >= 1");
  }
}

ScenarioConfig default_config() { return ScenarioConfig{}; }

std::string config_to_json(const ScenarioConfig& cfg) {
  nlohmann::json doc = nlohmann::json::object();
  nlohmann::json human = nlohmann::json::object();
  human["p_enter_stay"] = cfg.human.p_enter_stay;
  human["p_walk_and_grasp"] = cfg.human.p_walk_and_grasp;
  human["p_leave"] = cfg.human.p_leave;
  human["p_grasp_robot_object"] = cfg.human.p_grasp_robot_object;
  nlohmann::json ids = nlohmann::json::object();
  for (const auto& [id, weight] : cfg.human.human_ids) ids[id] = weight;
  human["human_ids"] = ids;
  doc["human"] = human;
  doc["p_failure_per_substate"] = cfg.p_failure_per_substate;
  doc["seed"] = cfg.seed;
  doc["horizon"] = cfg.horizon;
  nlohmann::json important = nlohmann::json::array();
  for (const auto& id : cfg.important_states) important.push_back(id.to_string());
  doc["important_states"] = important;
  doc["env_keys"] = cfg.env_keys;
  doc["state_params"] = detail::params_to_json(cfg.state_params);
  doc["profiles"] = cfg.profiles;
  return doc.dump(2) + "\n";
}

ScenarioConfig config_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::invalid_config, std::string("bad config JSON: ") + e.what());
  }
  ScenarioConfig cfg;
  try {
    if (doc.contains("human")) {
      const auto& human = doc.at("human");
      cfg.human.p_enter_stay = human.value("p_enter_stay", cfg.human.p_enter_stay);
      cfg.human.p_walk_and_grasp = human.value("p_walk_and_grasp", cfg.human.p_walk_and_grasp);
      cfg.human.p_leave = human.value("p_leave", cfg.human.p_leave);
      cfg.human.p_grasp_robot_object =
          human.value("p_grasp_robot_object", cfg.human.p_grasp_robot_object);
      if (human.contains("human_ids")) {
        cfg.human.human_ids.clear();
        for (const auto& [id, weight] : human.at("human_ids").items()) {
          cfg.human.human_ids.emplace_back(id, weight.get<double>());
        }
      }
    }
    cfg.p_failure_per_substate = doc.value("p_failure_per_substate", cfg.p_failure_per_substate);
    cfg.seed = doc.value("seed", cfg.seed);
    cfg.horizon = doc.value("horizon", cfg.horizon);
    if (doc.contains("important_states")) {
      cfg.important_states.clear();
      for (const auto& id : doc.at("important_states")) {
        cfg.important_states.push_back(StateId::parse(id.get<std::string>()));
      }
    }
    if (doc.contains("env_keys")) {
      cfg.env_keys = doc.at("env_keys").get<std::vector<std::string>>();
    }
    if (doc.contains("state_params")) {
      cfg.state_params = detail::params_from_json(doc.at("state_params"),
                                                  ErrorCode::invalid_config);
    }
    cfg.profiles = doc.value("profiles", cfg.profiles);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::invalid_config, std::string("bad config schema: ") + e.what());
  }
  validate_config(cfg);
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  return config_from_json(detail::read_file(path));
}

void save_config(const ScenarioConfig& cfg, const std::string& path) {
  detail::write_file(path, config_to_json(cfg));
}

std::string config_digest(const ScenarioConfig& cfg) {
  const std::string text = config_to_json(cfg);
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

Statechart pick_and_place_statechart() {
  std::vector<StateNode> nodes;
  for (const auto& spec : kStates) {
    StateNode node;
    node.id = StateId::parse(spec.path);
    node.kind = spec.kind;
    node.important = spec.important;
    if (spec.initial != nullptr) {
      auto path = node.id.path();
      path.emplace_back(spec.initial);
      node.initial_child = StateId(path);
    }
    nodes.push_back(node);
  }

  std::vector<TransitionDef> transitions;
  for (const auto& spec : kTransitions) {
    transitions.push_back(
        TransitionDef{StateId::parse(spec.from), spec.event, StateId::parse(spec.to)});
  }
  // Unhandled errors force every task substate into its task's Failure.
  for (const auto& spec : kStates) {
    StateId id = StateId::parse(spec.path);
    if (id.path().size() != 3 || spec.kind != StateKind::normal) continue;
    StateId failure = StateId({id.path()[0], id.path()[1], "Failure"});
    transitions.push_back(TransitionDef{id, "failure", failure});
  }

  return build_statechart(std::move(nodes), std::move(transitions));
}

ProfileTable default_profile_table() {
  std::map<StateId, ResourceProfile> profiles;
  auto add = [&](const char* path, double cpu, double mem) {
    profiles.emplace(StateId::parse(path), ResourceProfile{cpu, mem});
  };
  add("root/Idle", 2.0, 50.0);
  add("root/PickTask/MoveToLocation", 35.0, 220.0);
  add("root/PickTask/FindObject", 70.0, 420.0);
  add("root/PickTask/VisualServo", 85.0, 480.0);
  add("root/PickTask/GraspObject", 60.0, 350.0);
  add("root/PickTask/LiftObject", 45.0, 300.0);
  add("root/PickTask/GraspErrorHandling", 30.0, 260.0);
  add("root/PickTask/Success", 0.0, 0.0);
  add("root/PickTask/Failure", 5.0, 80.0);
  add("root/PlaceTask/MoveToLocation", 35.0, 220.0);
  add("root/PlaceTask/PlaceObject", 55.0, 340.0);
  add("root/PlaceTask/ReleaseGrasp", 25.0, 180.0);
  add("root/PlaceTask/LiftHand", 20.0, 160.0);
  add("root/PlaceTask/Success", 0.0, 0.0);
  add("root/PlaceTask/Failure", 5.0, 80.0);
  add("root/Dialog", 10.0, 120.0);
  return ProfileTable(std::move(profiles), ResourceProfile{10.0, 100.0});
}

HumanStepResult human_step(Rng& rng, const HumanModelConfig& cfg, HumanState& state) {
  const std::array<double, 3> weights = {cfg.p_enter_stay, cfg.p_walk_and_grasp, cfg.p_leave};
  const auto action = static_cast<HumanAction>(rng.weighted(weights));

  HumanStepResult result{action, std::nullopt};
  auto payload = [&state]() {
    ParameterSet p;
    p.set("human_action", state.action);
    p.set("human_id", state.id);
    p.set("human_present", state.present);
    return p;
  };

  switch (action) {
    case HumanAction::enter_stay: {
      if (!state.present) {
        state.present = true;
        state.id = sample_human_id(rng, cfg);
      }
      state.action = "at_entrance";
      result.event = EventDef{"human_at_entrance", payload()};
      break;
    }
    case HumanAction::walk_and_grasp: {
      if (!state.present) {
        state.present = true;
        state.id = sample_human_id(rng, cfg);
      }
      const bool robot_object = rng.bernoulli(cfg.p_grasp_robot_object);
      state.action = robot_object ? "grasping_robot_object" : "grasping_other_object";
      result.event = EventDef{robot_object ? "human_grasped_robot_object"
                                           : "human_grasped_other_object",
                              payload()};
      break;
    }
    case HumanAction::leave: {
      if (state.present) {
        state.present = false;
        state.action = "absent";
        state.id = "none";
        result.event = EventDef{"human_left", payload()};
      }
      break;
    }
  }
  return result;
}

const char* to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::success: return "success";
    case Outcome::failure: return "failure";
    case Outcome::aborted_by_human: return "aborted_by_human";
  }
  return "success";
}

std::vector<StateId> EpisodeTrace::state_sequence() const {
  std::vector<StateId> out;
  for (const auto& event : events) {
    if (out.empty() || out.back() != event.to_state) out.push_back(event.to_state);
  }
  return out;
}

namespace {

EpisodeTrace run_episode_impl(const ScenarioConfig& cfg, const Statechart& chart,
                              WorldStore& store, Rng& rng, bool inject_failures,
                              const PredictHook& hook, std::uint64_t episode_id) {
  LoggerConfig logger;
  logger.enabled = true;
  if (cfg.important_states.empty()) {
    logger.important_states = chart.important_states();
  } else {
    logger.important_states.insert(cfg.important_states.begin(), cfg.important_states.end());
  }
  validate_logger_config(chart, logger);

  std::map<StateId, std::string> completions;
  for (const auto& spec : kCompletions) {
    completions.emplace(StateId::parse(spec.state), spec.event);
  }
  const StateId dialog = StateId::parse("root/Dialog");
  const StateId grasp_object = StateId::parse("root/PickTask/GraspObject");
  const StateId place_success = StateId::parse("root/PlaceTask/Success");

  std::string target_location = "elsewhere";
  if (const Value* v = cfg.state_params.find("target_location")) {
    if (const auto* token = std::get_if<std::string>(v)) target_location = *token;
  }

  EnvironmentModel env;
  env.set("human_present", false);
  env.set("human_action", std::string("absent"));
  env.set("human_id", std::string("none"));
  env.set("object_location", std::string("table"));

  EventBus bus;
  Subscription subscription = bus.subscribe(kTransitionTopic);

  EpisodeTrace trace;
  trace.episode_id = episode_id;

  // Online learning: every change of the monitored state becomes a world
  // state; the transition from the previous one is counted immediately.
  std::optional<StateId> last_state;
  std::optional<WorldStateId> last_id;
  auto process_published = [&]() {
    for (const auto& event : subscription.drain()) {
      trace.events.push_back(event);
      if (last_state && *last_state == event.to_state) continue;
      WorldState ws{event.to_state, event.state_params, event.env_snapshot};
      WorldStateId id = store.intern(ws);
      if (last_id) store.record_transition(*last_id, id);
      last_state = event.to_state;
      last_id = id;
      if (hook) hook(id, ws);
    }
  };

  MachineState ms = initial_machine_state(chart);
  std::uint64_t seq = 0;
  auto publish = [&](const std::optional<TransitionDef>& fired, const StateId& from,
                     const StateId& to) {
    TransitionEvent te;
    te.fired = fired;
    te.from_state = from;
    te.to_state = to;
    te.state_params = cfg.state_params;
    te.env_snapshot = snapshot_environment(env, cfg.env_keys);
    te.sequence_no = seq++;
    if (auto filtered = log_transition(logger, te)) {
      bus.publish(kTransitionTopic, *filtered);
      process_published();
    }
  };
  auto fire = [&](const EventDef& event) {
    const StateId before = ms.active;
    StepResult r = step(ms, event);
    ms = r.state;
    if (r.fired) publish(r.fired, before, ms.active);
  };
  auto finished = [&]() -> std::optional<Outcome> {
    if (chart.node(ms.active).kind == StateKind::failure) return Outcome::failure;
    if (ms.active == dialog) return Outcome::aborted_by_human;
    if (ms.active == place_success) return Outcome::success;
    return std::nullopt;
  };

  publish(std::nullopt, ms.active, ms.active);  // episode starts in Idle

  HumanState human;
  for (int tick = 0; tick < kMaxTicks; ++tick) {
    HumanStepResult h = human_step(rng, cfg.human, human);
    if (h.event) {
      for (const auto& [key, value] : h.event->payload) env.set(key, value);
      fire(*h.event);
    }
    if (auto outcome = finished()) {
      trace.outcome = *outcome;
      return trace;
    }

    auto completion = completions.find(ms.active);
    if (completion == completions.end()) continue;
    std::string event_name = completion->second;
    const bool injectable =
        ms.active.path().size() == 3 && chart.node(ms.active).kind == StateKind::normal;
    if (inject_failures && injectable && rng.bernoulli(cfg.p_failure_per_substate)) {
      // Grasp errors are handled explicitly; everything else is fatal.
      event_name = (ms.active == grasp_object) ? "grasp_error" : "failure";
    }
    if (event_name == "grasped") env.set("object_location", std::string("robot_hand"));
    if (event_name == "placed") env.set("object_location", target_location);
    fire(EventDef{event_name, {}});
    if (auto outcome = finished()) {
      trace.outcome = *outcome;
      return trace;
    }
  }
  throw std::logic_error("episode did not terminate");
}

}  // namespace

EpisodeTrace run_episode(const ScenarioConfig& cfg, WorldStore& store, Rng& rng,
                         bool inject_failures, const PredictHook& hook,
                         std::uint64_t episode_id) {
  validate_config(cfg);
  const Statechart chart = pick_and_place_statechart();
  return run_episode_impl(cfg, chart, store, rng, inject_failures, hook, episode_id);
}

void train(const ScenarioConfig& cfg, WorldStore& store, Rng& rng, int n_episodes,
           bool inject_failures) {
  if (n_episodes < 1) {
    throw Error(ErrorCode::invalid_argument, "n_episodes must be >= 1");
  }
  validate_config(cfg);
  const Statechart chart = pick_and_place_statechart();
  for (int i = 0; i < n_episodes; ++i) {
    run_episode_impl(cfg, chart, store, rng, inject_failures, nullptr,
                     static_cast<std::uint64_t>(i));
  }
  logging::debug("trained " + std::to_string(n_episodes) + " episodes, store size " +
                 std::to_string(store.size()));
}

}  // namespace statepredict
