#include "statepredict/monitor.hpp"

#include "statepredict/error.hpp"

namespace statepredict {

void validate_logger_config(const Statechart& chart, const LoggerConfig& cfg) {
  for (const auto& id : cfg.important_states) {
    if (!chart.contains(id)) {
      throw Error(ErrorCode::invalid_config,
                  "important state " + id.to_string() + " is not in the statechart");
    }
  }
}

std::optional<TransitionEvent> log_transition(const LoggerConfig& cfg,
                                              const TransitionEvent& event) {
  if (!cfg.enabled) return std::nullopt;
  // Nearest important ancestor-or-self of the entered state.
  for (std::optional<StateId> scope = event.to_state; scope; scope = scope->parent()) {
    if (cfg.important_states.count(*scope) > 0) {
      TransitionEvent out = event;
      out.to_state = *scope;
      return out;
    }
  }
  return std::nullopt;
}

std::optional<TransitionEvent> Subscription::poll() {
  std::lock_guard lock(queue_->mu);
  if (queue_->events.empty()) return std::nullopt;
  TransitionEvent front = std::move(queue_->events.front());
  queue_->events.pop_front();
  return front;
}

std::vector<TransitionEvent> Subscription::drain() {
  std::lock_guard lock(queue_->mu);
  std::vector<TransitionEvent> out(queue_->events.begin(), queue_->events.end());
  queue_->events.clear();
  return out;
}

Subscription EventBus::subscribe(const std::string& topic) {
  Subscription sub;
  std::lock_guard lock(mu_);
  topics_[topic].push_back(sub.queue_);
  return sub;
}

void EventBus::publish(const std::string& topic, const TransitionEvent& event) {
  std::lock_guard lock(mu_);
  auto it = topics_.find(topic);
  if (it == topics_.end()) return;
  for (const auto& queue : it->second) {
    std::lock_guard qlock(queue->mu);
    queue->events.push_back(event);
  }
}

std::optional<std::pair<StateId, TransitionEvent>> ChangeDetector::observe(
    const TransitionEvent& event) {
  const bool changed = last_state_.has_value() && *last_state_ != event.to_state;
  const bool primed = !last_state_.has_value();
  last_state_ = event.to_state;
  if (primed || !changed) return std::nullopt;
  return std::make_pair(event.to_state, event);
}

std::vector<std::pair<StateId, TransitionEvent>> ChangeDetector::poll(Subscription& sub) {
  std::vector<std::pair<StateId, TransitionEvent>> out;
  for (const auto& event : sub.drain()) {
    if (auto change = observe(event)) out.push_back(*change);
  }
  return out;
}

ParameterSet snapshot_environment(const EnvironmentModel& env,
                                  const std::vector<std::string>& keys) {
  ParameterSet out;
  for (const auto& key : keys) {
    const Value* value = env.find(key);
    if (value == nullptr) {
      throw Error(ErrorCode::missing_environment_key, key);
    }
    out.set(key, *value);
  }
  return out;
}

}  // namespace statepredict
