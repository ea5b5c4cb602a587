#include "statepredict/resources.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "json_util.hpp"
#include "statepredict/error.hpp"

namespace statepredict {

void validate_profile(const ResourceProfile& profile) {
  if (!(profile.cpu_percent >= 0.0 && profile.cpu_percent <= 100.0)) {
    throw Error(ErrorCode::invalid_config,
                "cpu_percent out of [0,100]: " + std::to_string(profile.cpu_percent));
  }
  if (!(profile.memory_mb >= 0.0 && profile.memory_mb <= 1000.0)) {
    throw Error(ErrorCode::invalid_config,
                "memory_mb out of [0,1000]: " + std::to_string(profile.memory_mb));
  }
}

ProfileTable::ProfileTable(std::map<StateId, ResourceProfile> profiles, ResourceProfile fallback)
    : profiles_(std::move(profiles)), default_(fallback) {
  for (const auto& [state, profile] : profiles_) validate_profile(profile);
  validate_profile(default_);
}

const ResourceProfile& ProfileTable::lookup(const StateId& state) const {
  auto it = profiles_.find(state);
  return it == profiles_.end() ? default_ : it->second;
}

std::string profile_table_to_json(const ProfileTable& table) {
  nlohmann::json doc = nlohmann::json::object();
  auto entry = [](const ResourceProfile& p) {
    nlohmann::json e = nlohmann::json::object();
    e["cpu_percent"] = p.cpu_percent;
    e["memory_mb"] = p.memory_mb;
    return e;
  };
  doc["default"] = entry(table.fallback());
  for (const auto& [state, profile] : table.profiles()) {
    doc[state.to_string()] = entry(profile);
  }
  return doc.dump(2) + "\n";
}

ProfileTable profile_table_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::invalid_config, std::string("bad profile JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::invalid_config, "profile table must be an object");
  auto parse_profile = [](const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("cpu_percent") || !j.contains("memory_mb")) {
      throw Error(ErrorCode::invalid_config, "profile needs cpu_percent and memory_mb");
    }
    return ResourceProfile{j.at("cpu_percent").get<double>(), j.at("memory_mb").get<double>()};
  };
  ResourceProfile fallback;
  std::map<StateId, ResourceProfile> profiles;
  for (const auto& [key, value] : doc.items()) {
    if (key == "default") {
      fallback = parse_profile(value);
    } else {
      profiles.emplace(StateId::parse(key), parse_profile(value));
    }
  }
  return ProfileTable(std::move(profiles), fallback);
}

ProfileTable load_profile_table(const std::string& path) {
  return profile_table_from_json(detail::read_file(path));
}

void save_profile_table(const ProfileTable& table, const std::string& path) {
  detail::write_file(path, profile_table_to_json(table));
}

std::vector<EnvelopeStep> envelope(const std::vector<PredictionStep>& steps,
                                   const StoreSnapshot& snapshot, const ProfileTable& table,
                                   double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw Error(ErrorCode::invalid_threshold, std::to_string(threshold));
  }
  std::vector<EnvelopeStep> out;
  out.reserve(steps.size());
  for (const auto& step : steps) {
    const auto& dist = step.distribution;
    if (dist.size() != snapshot.size()) {
      throw Error(ErrorCode::dimension_mismatch, "distribution does not match snapshot");
    }
    std::vector<std::uint32_t> order(dist.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      if (dist[a] != dist[b]) return dist[a] > dist[b];
      return a < b;
    });

    EnvelopeStep env;
    env.step = step.step;
    double cum = 0.0;
    bool first = true;
    for (std::uint32_t id : order) {
      const ResourceProfile& profile = table.lookup(snapshot.states[id].state);
      if (first) {
        env.cpu_min = env.cpu_max = profile.cpu_percent;
        env.mem_min = env.mem_max = profile.memory_mb;
        env.cpu_most = profile.cpu_percent;  // top entry: highest p, lowest id
        env.mem_most = profile.memory_mb;
        first = false;
      } else {
        env.cpu_min = std::min(env.cpu_min, profile.cpu_percent);
        env.cpu_max = std::max(env.cpu_max, profile.cpu_percent);
        env.mem_min = std::min(env.mem_min, profile.memory_mb);
        env.mem_max = std::max(env.mem_max, profile.memory_mb);
      }
      cum += dist[id];
      if (cum >= threshold - 1e-9) break;
    }
    env.covered_probability = cum;
    out.push_back(env);
  }
  return out;
}

std::string envelope_to_csv(const std::vector<EnvelopeStep>& envelope) {
  std::string out = "step,cpu_min,cpu_most,cpu_max,mem_min,mem_most,mem_max,covered_probability\n";
  char buf[256];
  for (const auto& e : envelope) {
    std::snprintf(buf, sizeof(buf), "%d,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", e.step, e.cpu_min,
                  e.cpu_most, e.cpu_max, e.mem_min, e.mem_most, e.mem_max, e.covered_probability);
    out += buf;
  }
  return out;
}

void export_envelope(const std::vector<EnvelopeStep>& envelope, const std::string& path) {
  detail::write_file(path, envelope_to_csv(envelope));
}

}  // namespace statepredict
