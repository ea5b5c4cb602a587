#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "statepredict/params.hpp"
#include "statepredict/statechart.hpp"

namespace statepredict {

/// One observed transition, enriched with the parameters of the entered
/// state (phi) and an environment snapshot (psi). Importance filtering may
/// re-label to_state to the nearest important ancestor of the entered leaf,
/// so published events carry the monitored abstraction level.
struct TransitionEvent {
  std::optional<TransitionDef> fired;
  StateId from_state;
  StateId to_state;
  ParameterSet state_params;
  ParameterSet env_snapshot;
  std::uint64_t sequence_no = 0;

  friend bool operator==(const TransitionEvent&, const TransitionEvent&) = default;
};

struct LoggerConfig {
  bool enabled = true;
  std::set<StateId> important_states;
};

/// Throws invalid_config if important_states names a state the chart does
/// not contain.
void validate_logger_config(const Statechart& chart, const LoggerConfig& cfg);

/// Passes the event iff logging is enabled and the entered state or one of
/// its ancestors is important; the result is re-labeled to that ancestor.
/// Applying the filter to its own output returns it unchanged.
std::optional<TransitionEvent> log_transition(const LoggerConfig& cfg,
                                              const TransitionEvent& event);

/// Ordered, lossless delivery handle for one subscriber. Events published
/// after subscription are queued until polled; there is no replay.
class Subscription {
 public:
  std::optional<TransitionEvent> poll();
  std::vector<TransitionEvent> drain();

 private:
  friend class EventBus;
  struct Queue {
    std::mutex mu;
    std::deque<TransitionEvent> events;
  };
  std::shared_ptr<Queue> queue_ = std::make_shared<Queue>();
};

/// In-process publish/subscribe fan-out. Every subscriber of a topic
/// receives every event published afterwards, in publication order.
/// Publishing with no subscribers succeeds and drops the event.
class EventBus {
 public:
  Subscription subscribe(const std::string& topic);
  void publish(const std::string& topic, const TransitionEvent& event);

 private:
  std::mutex mu_;
  std::map<std::string, std::vector<std::shared_ptr<Subscription::Queue>>> topics_;
};

/// stateChanged condition: yields one element per change of the monitored
/// state; consecutive identical states yield nothing. The first observed
/// state primes the detector without yielding.
class ChangeDetector {
 public:
  std::optional<std::pair<StateId, TransitionEvent>> observe(const TransitionEvent& event);

  /// Drains the subscription and returns the change events in order.
  std::vector<std::pair<StateId, TransitionEvent>> poll(Subscription& sub);

  const std::optional<StateId>& last_state() const { return last_state_; }

 private:
  std::optional<StateId> last_state_;
};

/// Mutable symbolic environment the scenario maintains (human presence,
/// object location, ...). Snapshots are canonical ParameterSets.
class EnvironmentModel {
 public:
  void set(const std::string& key, Value value) { values_.set(key, std::move(value)); }
  const Value* find(const std::string& key) const { return values_.find(key); }
  const ParameterSet& values() const { return values_; }

 private:
  ParameterSet values_;
};

/// Reads the configured keys from the environment. Throws
/// missing_environment_key if a configured key is absent.
ParameterSet snapshot_environment(const EnvironmentModel& env,
                                  const std::vector<std::string>& keys);

}  // namespace statepredict
