#include "statepredict/statechart.hpp"

#include <algorithm>

#include "json_util.hpp"
#include "statepredict/error.hpp"

namespace statepredict {

StateId::StateId(std::vector<std::string> path) : path_(std::move(path)) {
  if (path_.empty()) throw Error(ErrorCode::invalid_argument, "state path must be non-empty");
  for (const auto& segment : path_) {
    if (segment.empty()) {
      throw Error(ErrorCode::invalid_argument, "state path segment must be non-empty");
    }
  }
}

StateId StateId::parse(std::string_view text) {
  std::vector<std::string> segments;
  std::size_t start = 0;
  while (true) {
    std::size_t slash = text.find('/', start);
    if (slash == std::string_view::npos) {
      segments.emplace_back(text.substr(start));
      break;
    }
    segments.emplace_back(text.substr(start, slash - start));
    start = slash + 1;
  }
  return StateId(std::move(segments));
}

std::string StateId::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < path_.size(); ++i) {
    if (i > 0) out += '/';
    out += path_[i];
  }
  return out;
}

std::optional<StateId> StateId::parent() const {
  if (path_.size() <= 1) return std::nullopt;
  return StateId(std::vector<std::string>(path_.begin(), path_.end() - 1));
}

bool StateId::is_ancestor_or_self_of(const StateId& other) const {
  if (path_.size() > other.path_.size()) return false;
  return std::equal(path_.begin(), path_.end(), other.path_.begin());
}

const char* to_string(StateKind kind) {
  switch (kind) {
    case StateKind::normal: return "normal";
    case StateKind::success: return "success";
    case StateKind::failure: return "failure";
  }
  return "normal";
}

StateKind state_kind_from_string(std::string_view text) {
  if (text == "normal") return StateKind::normal;
  if (text == "success") return StateKind::success;
  if (text == "failure") return StateKind::failure;
  throw Error(ErrorCode::invalid_argument, "unknown state kind '" + std::string(text) + "'");
}

const StateNode& Statechart::node(const StateId& id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) {
    throw Error(ErrorCode::invalid_argument, "unknown state " + id.to_string());
  }
  return it->second;
}

const std::vector<StateId>& Statechart::children(const StateId& id) const {
  auto it = children_.find(id);
  if (it == children_.end()) {
    throw Error(ErrorCode::invalid_argument, "unknown state " + id.to_string());
  }
  return it->second;
}

std::vector<StateId> Statechart::state_ids() const {
  std::vector<StateId> out;
  out.reserve(nodes_.size());
  for (const auto& [id, node] : nodes_) out.push_back(id);
  return out;
}

std::set<StateId> Statechart::important_states() const {
  std::set<StateId> out;
  for (const auto& [id, node] : nodes_) {
    if (node.important) out.insert(id);
  }
  return out;
}

StateId Statechart::initial_leaf(const StateId& from) const {
  StateId current = from;
  while (!is_leaf(current)) {
    current = *node(current).initial_child;
  }
  return current;
}

const TransitionDef* Statechart::transition(const StateId& from, const std::string& event) const {
  auto it = transitions_.find({from, event});
  return it == transitions_.end() ? nullptr : &it->second;
}

std::vector<TransitionDef> Statechart::transitions() const {
  std::vector<TransitionDef> out;
  out.reserve(transitions_.size());
  for (const auto& [key, def] : transitions_) out.push_back(def);
  return out;
}

Statechart build_statechart(std::vector<StateNode> nodes,
                            std::vector<TransitionDef> transitions) {
  Statechart chart;
  if (nodes.empty()) {
    throw Error(ErrorCode::invalid_statechart, "statechart needs at least one state");
  }

  for (auto& node : nodes) {
    if (node.id.empty()) {
      throw Error(ErrorCode::invalid_statechart, "state with empty id");
    }
    if (!chart.nodes_.emplace(node.id, node).second) {
      throw Error(ErrorCode::duplicate_state_id, node.id.to_string());
    }
    chart.children_.emplace(node.id, std::vector<StateId>{});
  }

  // Wire parent/child links from the paths; every non-root node's parent
  // must itself be declared.
  for (const auto& [id, node] : chart.nodes_) {
    auto parent = id.parent();
    if (!parent) {
      if (!chart.root_.empty()) {
        throw Error(ErrorCode::invalid_statechart,
                    "multiple roots: " + chart.root_.to_string() + " and " + id.to_string());
      }
      chart.root_ = id;
      continue;
    }
    auto it = chart.children_.find(*parent);
    if (it == chart.children_.end()) {
      throw Error(ErrorCode::invalid_statechart,
                  "state " + id.to_string() + " has undeclared parent");
    }
    it->second.push_back(id);
  }
  if (chart.root_.empty()) {
    throw Error(ErrorCode::invalid_statechart, "no root state");
  }
  for (auto& [id, kids] : chart.children_) std::sort(kids.begin(), kids.end());

  for (const auto& [id, node] : chart.nodes_) {
    const auto& kids = chart.children_.at(id);
    if (kids.empty()) {
      if (node.initial_child) {
        throw Error(ErrorCode::invalid_statechart,
                    "leaf " + id.to_string() + " declares an initial child");
      }
      continue;
    }
    if (node.kind != StateKind::normal) {
      throw Error(ErrorCode::invalid_statechart,
                  "terminal kind on composite state " + id.to_string());
    }
    if (!node.initial_child) {
      throw Error(ErrorCode::missing_initial_child, id.to_string());
    }
    if (std::find(kids.begin(), kids.end(), *node.initial_child) == kids.end()) {
      throw Error(ErrorCode::missing_initial_child,
                  id.to_string() + ": initial child " + node.initial_child->to_string() +
                      " is not a child");
    }
  }

  for (auto& tr : transitions) {
    if (!chart.contains(tr.from)) {
      throw Error(ErrorCode::unknown_state_in_transition, tr.from.to_string());
    }
    if (!chart.contains(tr.to)) {
      throw Error(ErrorCode::unknown_state_in_transition, tr.to.to_string());
    }
    if (tr.event_name.empty()) {
      throw Error(ErrorCode::invalid_statechart, "transition with empty event name");
    }
    auto key = std::make_pair(tr.from, tr.event_name);
    if (!chart.transitions_.emplace(key, tr).second) {
      throw Error(ErrorCode::ambiguous_transition,
                  tr.from.to_string() + " on '" + tr.event_name + "'");
    }
  }

  return chart;
}

MachineState initial_machine_state(const Statechart& chart) {
  return MachineState{&chart, chart.initial_leaf(chart.root())};
}

StepResult step(const MachineState& ms, const EventDef& event) {
  if (ms.chart == nullptr || ms.active.empty()) {
    throw Error(ErrorCode::invalid_argument, "machine state is not initialized");
  }
  // Innermost-first dispatch: the active leaf shadows its ancestors.
  for (std::optional<StateId> scope = ms.active; scope; scope = scope->parent()) {
    const TransitionDef* tr = ms.chart->transition(*scope, event.name);
    if (tr != nullptr) {
      MachineState next{ms.chart, ms.chart->initial_leaf(tr->to)};
      return StepResult{next, *tr};
    }
  }
  return StepResult{ms, std::nullopt};
}

StateId active_state(const MachineState& ms) { return ms.active; }

namespace {

nlohmann::json state_tree_to_json(const Statechart& chart, const StateId& id) {
  const StateNode& node = chart.node(id);
  nlohmann::json obj = nlohmann::json::object();
  obj["name"] = id.path().back();
  obj["kind"] = to_string(node.kind);
  obj["important"] = node.important;
  const auto& kids = chart.children(id);
  if (!kids.empty()) {
    obj["initial"] = node.initial_child->path().back();
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& child : kids) arr.push_back(state_tree_to_json(chart, child));
    obj["children"] = arr;
  }
  return obj;
}

void collect_states(const nlohmann::json& obj, const std::vector<std::string>& parent_path,
                    std::vector<StateNode>& out) {
  if (!obj.is_object() || !obj.contains("name") || !obj.at("name").is_string()) {
    throw Error(ErrorCode::invalid_statechart, "state object needs a string 'name'");
  }
  std::vector<std::string> path = parent_path;
  path.push_back(obj.at("name").get<std::string>());

  StateNode node;
  node.id = StateId(path);
  node.kind = obj.contains("kind")
                  ? state_kind_from_string(obj.at("kind").get<std::string>())
                  : StateKind::normal;
  node.important = obj.contains("important") && obj.at("important").get<bool>();
  if (obj.contains("initial")) {
    std::vector<std::string> init_path = path;
    init_path.push_back(obj.at("initial").get<std::string>());
    node.initial_child = StateId(init_path);
  }
  out.push_back(node);

  if (obj.contains("children")) {
    if (!obj.at("children").is_array()) {
      throw Error(ErrorCode::invalid_statechart, "'children' must be an array");
    }
    for (const auto& child : obj.at("children")) collect_states(child, path, out);
  }
}

}  // namespace

std::string to_canonical_json(const Statechart& chart) {
  nlohmann::json doc = nlohmann::json::object();
  doc["states"] = state_tree_to_json(chart, chart.root());
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& tr : chart.transitions()) {
    nlohmann::json t = nlohmann::json::object();
    t["from"] = tr.from.to_string();
    t["event"] = tr.event_name;
    t["to"] = tr.to.to_string();
    arr.push_back(t);
  }
  doc["transitions"] = arr;
  return doc.dump(2) + "\n";
}

Statechart statechart_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::invalid_statechart, std::string("bad JSON: ") + e.what());
  }
  try {
    if (!doc.is_object() || !doc.contains("states")) {
      throw Error(ErrorCode::invalid_statechart, "document needs a 'states' tree");
    }
    std::vector<StateNode> nodes;
    collect_states(doc.at("states"), {}, nodes);

    std::vector<TransitionDef> transitions;
    if (doc.contains("transitions")) {
      for (const auto& t : doc.at("transitions")) {
        transitions.push_back(TransitionDef{StateId::parse(t.at("from").get<std::string>()),
                                            t.at("event").get<std::string>(),
                                            StateId::parse(t.at("to").get<std::string>())});
      }
    }
    return build_statechart(std::move(nodes), std::move(transitions));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::invalid_statechart, std::string("bad schema: ") + e.what());
  }
}

Statechart load_statechart(const std::string& path) {
  return statechart_from_json(detail::read_file(path));
}

void save_statechart(const Statechart& chart, const std::string& path) {
  detail::write_file(path, to_canonical_json(chart));
}

}  // namespace statepredict
