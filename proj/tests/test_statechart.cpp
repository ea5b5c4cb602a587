#include <vector>

#include "doctest.h"
#include "statepredict/error.hpp"
#include "statepredict/statechart.hpp"

using namespace statepredict;

namespace {

StateNode node(const char* path, StateKind kind = StateKind::normal,
               const char* initial = nullptr, bool important = false) {
  StateNode n;
  n.id = StateId::parse(path);
  n.kind = kind;
  n.important = important;
  if (initial != nullptr) {
    auto p = n.id.path();
    p.emplace_back(initial);
    n.initial_child = StateId(p);
  }
  return n;
}

TransitionDef tr(const char* from, const char* event, const char* to) {
  return TransitionDef{StateId::parse(from), event, StateId::parse(to)};
}

// Two-level machine with a composite task state, used across the cases.
Statechart tiny_chart() {
  return build_statechart(
      {node("root", StateKind::normal, "Idle"), node("root/Idle"),
       node("root/PickTask", StateKind::normal, "Grasp"), node("root/PickTask/Grasp"),
       node("root/PickTask/Lift"), node("root/Failure", StateKind::failure)},
      {tr("root/Idle", "start", "root/PickTask"),
       tr("root/PickTask/Grasp", "grasped", "root/PickTask/Lift"),
       tr("root/PickTask", "task_error", "root/Failure")});
}

}  // namespace

TEST_CASE("state id ordering and ancestry") {
  StateId a = StateId::parse("root/A");
  StateId ab = StateId::parse("root/A/B");
  CHECK(a < ab);
  CHECK(a.is_ancestor_or_self_of(ab));
  CHECK(!ab.is_ancestor_or_self_of(a));
  CHECK(a.is_ancestor_or_self_of(a));
  CHECK(ab.parent() == a);
  CHECK(StateId::parse("root").parent() == std::nullopt);
  CHECK(StateId::parse("root/A/B").to_string() == "root/A/B");
}

TEST_CASE("state id rejects empty paths and segments") {
  CHECK_THROWS_AS(StateId::parse(""), Error);
  CHECK_THROWS_AS(StateId::parse("root//leaf"), Error);
  CHECK_THROWS_AS(StateId::parse("root/"), Error);
}

TEST_CASE("a minimal two-state machine builds and steps") {
  Statechart chart = build_statechart(
      {node("root", StateKind::normal, "Idle"), node("root/Idle"), node("root/PickTask")},
      {tr("root/Idle", "start", "root/PickTask")});
  CHECK(chart.state_ids().size() == 3);

  MachineState ms = initial_machine_state(chart);
  CHECK(active_state(ms) == StateId::parse("root/Idle"));

  StepResult r = step(ms, EventDef{"start", {}});
  REQUIRE(r.fired.has_value());
  CHECK(r.fired->from == StateId::parse("root/Idle"));
  CHECK(active_state(r.state) == StateId::parse("root/PickTask"));
}

TEST_CASE("entering a composite descends to its initial leaf") {
  Statechart chart = tiny_chart();
  MachineState ms = initial_machine_state(chart);
  StepResult r = step(ms, EventDef{"start", {}});
  CHECK(active_state(r.state) == StateId::parse("root/PickTask/Grasp"));
}

TEST_CASE("events bubble up to ancestors") {
  Statechart chart = tiny_chart();
  MachineState ms = initial_machine_state(chart);
  ms = step(ms, EventDef{"start", {}}).state;

  // task_error is handled at the PickTask level while a leaf is active
  StepResult r = step(ms, EventDef{"task_error", {}});
  REQUIRE(r.fired.has_value());
  CHECK(r.fired->from == StateId::parse("root/PickTask"));
  CHECK(active_state(r.state) == StateId::parse("root/Failure"));
}

TEST_CASE("innermost transition shadows the ancestor's") {
  Statechart chart = build_statechart(
      {node("root", StateKind::normal, "A"), node("root/A", StateKind::normal, "A1"),
       node("root/A/A1"), node("root/B"), node("root/C")},
      {tr("root/A", "go", "root/B"), tr("root/A/A1", "go", "root/C")});
  MachineState ms = initial_machine_state(chart);
  StepResult r = step(ms, EventDef{"go", {}});
  REQUIRE(r.fired.has_value());
  CHECK(r.fired->from == StateId::parse("root/A/A1"));
  CHECK(active_state(r.state) == StateId::parse("root/C"));
}

TEST_CASE("unhandled events are absorbed") {
  Statechart chart = tiny_chart();
  MachineState ms = initial_machine_state(chart);
  StepResult r = step(ms, EventDef{"unknown", {}});
  CHECK(!r.fired.has_value());
  CHECK(active_state(r.state) == active_state(ms));
}

TEST_CASE("active_state is a pure query") {
  Statechart chart = tiny_chart();
  MachineState ms = initial_machine_state(chart);
  CHECK(active_state(ms) == active_state(ms));
}

TEST_CASE("stepping is deterministic over event sequences") {
  std::vector<EventDef> events = {{"start", {}}, {"bogus", {}}, {"grasped", {}},
                                  {"task_error", {}}};
  auto run = [&events]() {
    Statechart chart = tiny_chart();
    MachineState ms = initial_machine_state(chart);
    std::vector<StateId> states{active_state(ms)};
    for (const auto& ev : events) {
      ms = step(ms, ev).state;
      states.push_back(active_state(ms));
    }
    return states;
  };
  CHECK(run() == run());
}

TEST_CASE("after any step the active state is a leaf") {
  Statechart chart = tiny_chart();
  MachineState ms = initial_machine_state(chart);
  for (const char* name : {"start", "grasped", "nothing", "task_error"}) {
    ms = step(ms, EventDef{name, {}}).state;
    CHECK(chart.is_leaf(active_state(ms)));
  }
}

TEST_CASE("build validation failures") {
  SUBCASE("duplicate state id") {
    try {
      build_statechart({node("root"), node("root")}, {});
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::duplicate_state_id);
    }
  }
  SUBCASE("transition referencing an undeclared state") {
    try {
      build_statechart({node("root", StateKind::normal, "Idle"), node("root/Idle")},
                       {tr("root/Idle", "go", "root/Ghost")});
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::unknown_state_in_transition);
    }
  }
  SUBCASE("duplicate (from, event) pair") {
    try {
      build_statechart({node("root", StateKind::normal, "A"), node("root/A"), node("root/B"),
                        node("root/C")},
                       {tr("root/A", "go", "root/B"), tr("root/A", "go", "root/C")});
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ambiguous_transition);
    }
  }
  SUBCASE("composite without initial child") {
    try {
      build_statechart({node("root"), node("root/A")}, {});
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::missing_initial_child);
    }
  }
  SUBCASE("terminal kind on a composite") {
    CHECK_THROWS_AS(build_statechart({node("root", StateKind::success, "A"), node("root/A")}, {}),
                    Error);
  }
}

TEST_CASE("statechart JSON round-trips byte-identically") {
  Statechart chart = tiny_chart();
  std::string text = to_canonical_json(chart);
  Statechart reparsed = statechart_from_json(text);
  CHECK(to_canonical_json(reparsed) == text);
  CHECK(reparsed.state_ids() == chart.state_ids());
  CHECK(reparsed.transitions().size() == chart.transitions().size());
}

TEST_CASE("statechart JSON rejects malformed input") {
  CHECK_THROWS_AS(statechart_from_json("not json"), Error);
  CHECK_THROWS_AS(statechart_from_json("{}"), Error);
  CHECK_THROWS_AS(statechart_from_json(R"({"states":{"kind":"normal"}})"), Error);
}
