#include "statepredict/worldstore.hpp"

#include <sstream>

#include "json_util.hpp"
#include "statepredict/error.hpp"

namespace statepredict {

std::string WorldState::canonical_key() const {
  nlohmann::json obj = nlohmann::json::object();
  obj["phi"] = detail::params_to_json(state_params);
  obj["psi"] = detail::params_to_json(env_params);
  obj["state"] = state.to_string();
  return obj.dump();
}

WorldStore::WorldStore(WorldStore&& other) noexcept {
  std::lock_guard lock(other.mu_);
  states_ = std::move(other.states_);
  index_ = std::move(other.index_);
  counts_ = std::move(other.counts_);
  revision_ = other.revision_;
}

WorldStore& WorldStore::operator=(WorldStore&& other) noexcept {
  if (this != &other) {
    std::scoped_lock lock(mu_, other.mu_);
    states_ = std::move(other.states_);
    index_ = std::move(other.index_);
    counts_ = std::move(other.counts_);
    revision_ = other.revision_;
  }
  return *this;
}

WorldStateId WorldStore::intern(const WorldState& ws) {
  std::lock_guard lock(mu_);
  const std::string key = ws.canonical_key();
  auto it = index_.find(key);
  if (it != index_.end()) return WorldStateId{it->second};
  auto id = static_cast<std::uint32_t>(states_.size());
  states_.push_back(ws);
  index_.emplace(key, id);
  ++revision_;
  return WorldStateId{id};
}

std::optional<WorldStateId> WorldStore::find(const WorldState& ws) const {
  std::lock_guard lock(mu_);
  auto it = index_.find(ws.canonical_key());
  if (it == index_.end()) return std::nullopt;
  return WorldStateId{it->second};
}

void WorldStore::require_known(WorldStateId id) const {
  if (id.index >= states_.size()) {
    throw Error(ErrorCode::unknown_world_state_id, std::to_string(id.index));
  }
}

TransitionRecord WorldStore::record_transition(WorldStateId from, WorldStateId to) {
  std::lock_guard lock(mu_);
  require_known(from);
  require_known(to);
  std::uint64_t& count = counts_[{from.index, to.index}];
  ++count;
  ++revision_;
  return TransitionRecord{from, to, count};
}

std::vector<std::pair<WorldStateId, std::uint64_t>> WorldStore::outgoing(WorldStateId from) const {
  std::lock_guard lock(mu_);
  require_known(from);
  std::vector<std::pair<WorldStateId, std::uint64_t>> out;
  auto it = counts_.lower_bound({from.index, 0});
  for (; it != counts_.end() && it->first.first == from.index; ++it) {
    out.emplace_back(WorldStateId{it->first.second}, it->second);
  }
  return out;
}

const WorldState& WorldStore::world_state(WorldStateId id) const {
  std::lock_guard lock(mu_);
  require_known(id);
  return states_[id.index];
}

std::size_t WorldStore::size() const {
  std::lock_guard lock(mu_);
  return states_.size();
}

std::uint64_t WorldStore::total_count() const {
  std::lock_guard lock(mu_);
  std::uint64_t total = 0;
  for (const auto& [key, count] : counts_) total += count;
  return total;
}

std::uint64_t WorldStore::revision() const {
  std::lock_guard lock(mu_);
  return revision_;
}

StoreSnapshot WorldStore::snapshot() const {
  std::lock_guard lock(mu_);
  StoreSnapshot snap;
  snap.revision = revision_;
  snap.states = states_;
  snap.outgoing.resize(states_.size());
  for (const auto& [key, count] : counts_) {
    snap.outgoing[key.first].emplace_back(key.second, count);
  }
  return snap;
}

WorldStore WorldStore::clone() const {
  std::lock_guard lock(mu_);
  WorldStore copy;
  copy.states_ = states_;
  copy.index_ = index_;
  copy.counts_ = counts_;
  copy.revision_ = revision_;
  return copy;
}

std::string store_to_text(const WorldStore& store) {
  StoreSnapshot snap = store.snapshot();
  std::ostringstream out;
  nlohmann::json header = nlohmann::json::object();
  header["format"] = "wsdb";
  header["version"] = 1;
  out << header.dump() << '\n';
  for (std::size_t id = 0; id < snap.states.size(); ++id) {
    const WorldState& ws = snap.states[id];
    nlohmann::json line = nlohmann::json::object();
    line["id"] = id;
    line["kind"] = "ws";
    line["phi"] = detail::params_to_json(ws.state_params);
    line["psi"] = detail::params_to_json(ws.env_params);
    line["state"] = ws.state.to_string();
    out << line.dump() << '\n';
  }
  for (std::size_t from = 0; from < snap.outgoing.size(); ++from) {
    for (const auto& [to, count] : snap.outgoing[from]) {
      nlohmann::json line = nlohmann::json::object();
      line["count"] = count;
      line["from"] = from;
      line["kind"] = "tr";
      line["to"] = to;
      out << line.dump() << '\n';
    }
  }
  return out.str();
}

namespace {

nlohmann::json parse_line(const std::string& line, std::size_t line_no) {
  try {
    return nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::corrupt_database,
                "line " + std::to_string(line_no) + ": " + e.what());
  }
}

}  // namespace

WorldStore store_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) {
    throw Error(ErrorCode::corrupt_database, "missing header line");
  }
  ++line_no;
  nlohmann::json header = parse_line(line, line_no);
  if (!header.is_object() || header.value("format", "") != "wsdb" ||
      header.value("version", -1) != 1) {
    throw Error(ErrorCode::corrupt_database, "unsupported header " + line);
  }

  WorldStore store;
  std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint64_t>> records;
  try {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) {
        throw Error(ErrorCode::corrupt_database, "blank line " + std::to_string(line_no));
      }
      nlohmann::json obj = parse_line(line, line_no);
      const std::string kind = obj.value("kind", "");
      if (kind == "ws") {
        WorldState ws;
        ws.state = StateId::parse(obj.at("state").get<std::string>());
        ws.state_params = detail::params_from_json(obj.at("phi"), ErrorCode::corrupt_database);
        ws.env_params = detail::params_from_json(obj.at("psi"), ErrorCode::corrupt_database);
        const auto declared = obj.at("id").get<std::int64_t>();
        if (declared < 0 || static_cast<std::size_t>(declared) != store.size()) {
          throw Error(ErrorCode::corrupt_database,
                      "world state ids must be dense and in order, got " +
                          std::to_string(declared) + " at line " + std::to_string(line_no));
        }
        WorldStateId assigned = store.intern(ws);
        if (assigned.index != static_cast<std::uint32_t>(declared)) {
          throw Error(ErrorCode::corrupt_database,
                      "duplicate world state at line " + std::to_string(line_no));
        }
      } else if (kind == "tr") {
        if (!obj.at("count").is_number_integer() && !obj.at("count").is_number_unsigned()) {
          throw Error(ErrorCode::corrupt_database,
                      "count must be an integer at line " + std::to_string(line_no));
        }
        const auto count = obj.at("count").get<std::int64_t>();
        if (count < 1) {
          throw Error(ErrorCode::corrupt_database,
                      "count must be >= 1 at line " + std::to_string(line_no));
        }
        records.emplace_back(obj.at("from").get<std::uint32_t>(),
                             obj.at("to").get<std::uint32_t>(),
                             static_cast<std::uint64_t>(count));
      } else {
        throw Error(ErrorCode::corrupt_database,
                    "unknown record kind at line " + std::to_string(line_no));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::corrupt_database,
                "line " + std::to_string(line_no) + ": " + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::corrupt_database || e.code() == ErrorCode::io_failure) throw;
    throw Error(ErrorCode::corrupt_database,
                "line " + std::to_string(line_no) + ": " + e.what());
  }

  std::map<std::pair<std::uint32_t, std::uint32_t>, bool> seen;
  for (const auto& [from, to, count] : records) {
    if (from >= store.size() || to >= store.size()) {
      throw Error(ErrorCode::corrupt_database, "transition references unknown world state");
    }
    if (!seen.emplace(std::make_pair(from, to), true).second) {
      throw Error(ErrorCode::corrupt_database, "duplicate transition record");
    }
    for (std::uint64_t i = 0; i < count; ++i) {
      store.record_transition(WorldStateId{from}, WorldStateId{to});
    }
  }
  return store;
}

void save_store(const WorldStore& store, const std::string& path) {
  detail::write_file(path, store_to_text(store));
}

WorldStore load_store(const std::string& path) {
  return store_from_text(detail::read_file(path));
}

}  // namespace statepredict
