// Acceptance suite: one check per release criterion, one PASS/FAIL line
// each. Exits non-zero if any check fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "statepredict/evaluate.hpp"
#include "statepredict/predictor.hpp"
#include "statepredict/resources.hpp"
#include "statepredict/scenario.hpp"
#include "statepredict/worldstore.hpp"
#include "support/oracles.hpp"

namespace sp = statepredict;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct CheckResult {
  bool pass = true;
  std::string detail;
};

struct Check {
  CheckResult result;
  std::ostringstream detail;

  void require(bool condition, const std::string& what) {
    if (!condition && result.pass) {
      result.pass = false;
      detail << "FAILED: " << what << "; ";
    }
  }
  CheckResult finish() {
    result.detail = detail.str();
    return result;
  }
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// ---------------------------------------------------------------------------

CheckResult markov_oracle_equivalence() {
  Check check;
  const auto start = Clock::now();
  std::mt19937_64 rng(0xACCE0001);
  for (int iteration = 0; iteration < 1000 && check.result.pass; ++iteration) {
    const std::size_t n = rng() % 6 + 1;
    oracles::CountMap counts = oracles::random_counts(rng, n);
    const auto start_state = static_cast<std::uint32_t>(rng() % n);
    const int horizon = static_cast<int>(rng() % 4) + 1;

    sp::TransitionMatrix m = sp::build_matrix(oracles::make_snapshot(n, counts));
    auto steps = sp::predict(sp::WorldStateId{start_state}, horizon, m);
    for (int k = 1; k <= horizon; ++k) {
      auto expected = oracles::path_enumeration_distribution(counts, n, start_state, k);
      for (std::size_t j = 0; j < n; ++j) {
        check.require(std::abs(steps[k - 1].distribution[j] - expected[j]) <= 1e-9,
                      "case " + std::to_string(iteration) + " step " + std::to_string(k) +
                          " entry " + std::to_string(j));
      }
    }
  }
  const double elapsed = seconds_since(start);
  check.require(elapsed < 30.0, "runtime " + std::to_string(elapsed) + "s >= 30s");
  check.detail << "1000 random stores (n<=6, h<=4) vs path enumeration, "
               << std::to_string(elapsed).substr(0, 5) << "s";
  return check.finish();
}

CheckResult row_stochasticity_and_homogeneity() {
  Check check;
  std::mt19937_64 rng(0xACCE0002);
  int matrices = 0;
  for (int iteration = 0; iteration < 300 && check.result.pass; ++iteration) {
    const std::size_t n = rng() % 12 + 1;
    oracles::CountMap counts = oracles::random_counts(rng, n);
    sp::TransitionMatrix m = sp::build_matrix(oracles::make_snapshot(n, counts));
    ++matrices;
    std::vector<double> dense(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      check.require(sp::is_probability_vector(m.row(i), 1e-9),
                    "row " + std::to_string(i) + " not stochastic");
      for (std::size_t j = 0; j < n; ++j) dense[i * n + j] = m.at(i, j);
    }

    const auto start_state = static_cast<std::uint32_t>(rng() % n);
    const int horizon = 4;
    auto steps = sp::predict(sp::WorldStateId{start_state}, horizon, m);
    for (int k = 1; k <= horizon; ++k) {
      auto power = oracles::matrix_power(dense, n, k);
      for (std::size_t j = 0; j < n; ++j) {
        check.require(
            std::abs(steps[k - 1].distribution[j] - power[start_state * n + j]) <= 1e-9,
            "homogeneity step " + std::to_string(k));
      }
    }
  }
  check.detail << matrices << " random matrices row-stochastic; predict == one_hot x M^k";
  return check.finish();
}

CheckResult equal_distribution_fallback() {
  Check check;
  for (std::size_t n : {1, 2, 3, 5, 7, 11, 64}) {
    oracles::CountMap counts;
    for (std::uint32_t i = 0; i + 1 < n; ++i) counts[{i, i + 1}] = i + 1;  // last row dangling
    sp::TransitionMatrix m = sp::build_matrix(oracles::make_snapshot(n, counts));

    auto steps = sp::predict(sp::WorldStateId{static_cast<std::uint32_t>(n - 1)}, 1, m);
    for (double p : steps[0].distribution) {
      check.require(p == 1.0 / static_cast<double>(n),
                    "interned dangling state, n=" + std::to_string(n));
    }
    auto unobserved = sp::predict_unobserved(1, m);
    for (double p : unobserved[0].distribution) {
      check.require(p == 1.0 / static_cast<double>(n),
                    "unobserved query, n=" + std::to_string(n));
    }
  }
  check.detail << "never-observed states predict exactly 1/n per entry";
  return check.finish();
}

CheckResult envelope_rule() {
  Check check;
  std::mt19937_64 rng(0xACCE0004);

  std::map<sp::StateId, sp::ResourceProfile> profiles;
  sp::StoreSnapshot snap;
  const std::size_t n = 8;
  for (std::size_t i = 0; i < n; ++i) {
    sp::WorldState ws;
    ws.state = sp::StateId::parse("root/S" + std::to_string(i));
    snap.states.push_back(ws);
    profiles.emplace(ws.state, sp::ResourceProfile{static_cast<double>((i * 13) % 101),
                                                   static_cast<double>((i * 131) % 1001)});
  }
  snap.outgoing.resize(n);
  sp::ProfileTable table(std::move(profiles), sp::ResourceProfile{50.0, 500.0});

  for (int iteration = 0; iteration < 1000 && check.result.pass; ++iteration) {
    sp::ProbabilityVector dist(n, 0.0);
    double total = 0.0;
    for (double& p : dist) {
      p = static_cast<double>(rng() % 1000);
      total += p;
    }
    if (total == 0.0) {
      dist[rng() % n] = 1.0;
    } else {
      for (double& p : dist) p /= total;
    }

    sp::PredictionStep step;
    step.step = 1;
    step.distribution = dist;
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (dist[i] > dist[best]) best = i;
    }
    step.top = sp::WorldStateId{static_cast<std::uint32_t>(best)};

    auto env = sp::envelope({step}, snap, table, 0.75);
    const auto& e = env[0];
    check.require(e.covered_probability >= 0.75 - 1e-9, "coverage below threshold");
    check.require(e.cpu_min <= e.cpu_most && e.cpu_most <= e.cpu_max, "cpu bounds out of order");
    check.require(e.mem_min <= e.mem_most && e.mem_most <= e.mem_max, "mem bounds out of order");

    // minimality: dropping the prefix's least probable retained entry must
    // push coverage below the threshold
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      if (dist[a] != dist[b]) return dist[a] > dist[b];
      return a < b;
    });
    double cum = 0.0;
    std::size_t prefix_len = 0;
    for (std::uint32_t id : order) {
      cum += dist[id];
      ++prefix_len;
      if (cum >= 0.75 - 1e-9) break;
    }
    check.require(std::abs(cum - e.covered_probability) <= 1e-12, "coverage mismatch");
    if (prefix_len > 1) {
      check.require(cum - dist[order[prefix_len - 1]] < 0.75 - 1e-9, "prefix not minimal");
    }
  }
  check.detail << "1000 random distributions: minimal 0.75-prefix, min <= most <= max";
  return check.finish();
}

CheckResult table_trend_reproduction() {
  Check check;
  const auto start = Clock::now();

  std::vector<double> s_off, w_off, s_on, w_on;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    sp::ScenarioConfig cfg = sp::default_config();
    cfg.seed = seed;

    sp::WorldStore store;
    sp::Rng train_rng(seed);
    sp::train(cfg, store, train_rng, 500);

    const std::vector<sp::MatchCriterion> criteria = {sp::MatchCriterion::s_match,
                                                      sp::MatchCriterion::w_match};
    sp::WorldStore store_off = store.clone();
    sp::Rng rng_off(seed + 1000000);
    sp::EvalReport off = sp::evaluate(cfg, store_off, 40, criteria, false, rng_off);

    sp::WorldStore store_on = store.clone();
    sp::Rng rng_on(seed + 2000000);
    sp::EvalReport on = sp::evaluate(cfg, store_on, 70, criteria, true, rng_on);

    check.require(off.rows[0].predictions_total >= 200,
                  "seed " + std::to_string(seed) + ": only " +
                      std::to_string(off.rows[0].predictions_total) + " scored (no failures)");
    check.require(on.rows[0].predictions_total >= 200,
                  "seed " + std::to_string(seed) + ": only " +
                      std::to_string(on.rows[0].predictions_total) + " scored (failures)");

    // (a) S-Match >= W-Match on every seed, in both conditions
    check.require(off.rows[0].precision_percent >= off.rows[1].precision_percent,
                  "seed " + std::to_string(seed) + ": S < W without failures");
    check.require(on.rows[0].precision_percent >= on.rows[1].precision_percent,
                  "seed " + std::to_string(seed) + ": S < W with failures");

    s_off.push_back(off.rows[0].precision_percent);
    w_off.push_back(off.rows[1].precision_percent);
    s_on.push_back(on.rows[0].precision_percent);
    w_on.push_back(on.rows[1].precision_percent);
  }

  auto mean = [](const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  };
  const double ms_off = mean(s_off), mw_off = mean(w_off);
  const double ms_on = mean(s_on), mw_on = mean(w_on);

  // (b) enabling failures costs both criteria at least 10 points on average
  check.require(ms_off - ms_on >= 10.0, "S-Match drop " + std::to_string(ms_off - ms_on));
  check.require(mw_off - mw_on >= 10.0, "W-Match drop " + std::to_string(mw_off - mw_on));
  // (c) the no-failure S-Match precision stays high
  check.require(ms_off >= 70.0, "S-Match without failures " + std::to_string(ms_off));

  const double elapsed = seconds_since(start);
  check.require(elapsed < 300.0, "runtime " + std::to_string(elapsed) + "s >= 300s");

  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "10 seeds: S/W %.1f/%.1f%% -> %.1f/%.1f%% with failures, %.1fs", ms_off, mw_off,
                ms_on, mw_on, elapsed);
  check.detail << buf;
  return check.finish();
}

CheckResult prediction_latency() {
  Check check;
  sp::WorldStore store;
  const std::size_t n = 5000;
  for (std::size_t i = 0; i < n; ++i) {
    sp::WorldState ws;
    ws.state = sp::StateId::parse("root/S" + std::to_string(i % 16));
    ws.state_params.set("index", static_cast<std::int64_t>(i));
    store.intern(ws);
  }
  for (std::uint32_t i = 0; i < n; ++i) {
    auto to = [&](std::size_t j) { return sp::WorldStateId{static_cast<std::uint32_t>(j % n)}; };
    store.record_transition(sp::WorldStateId{i}, to(i + 1));
    store.record_transition(sp::WorldStateId{i}, to(i * 7 + 1));
    store.record_transition(sp::WorldStateId{i}, to(i * 13 + 5));
  }

  const auto start = Clock::now();
  sp::StoreSnapshot snap = store.snapshot();
  sp::TransitionMatrix m = sp::build_matrix(snap);
  auto steps = sp::predict(sp::WorldStateId{0}, 3, m);
  const double elapsed = seconds_since(start);

  check.require(steps.size() == 3, "wrong step count");
  check.require(elapsed < 1.0, "latency " + std::to_string(elapsed) + "s >= 1s");
  char buf[96];
  std::snprintf(buf, sizeof(buf), "snapshot + matrix + predict(h=3) over %zu states: %.3fs", n,
                elapsed);
  check.detail << buf;
  return check.finish();
}

CheckResult determinism_and_persistence() {
  Check check;
  fs::path dir = fs::temp_directory_path() / "statepredict_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);

  sp::ScenarioConfig cfg = sp::default_config();
  cfg.seed = 99;

  auto one_run = [&](const std::string& tag) {
    sp::WorldStore store;
    sp::Rng rng(cfg.seed);
    sp::train(cfg, store, rng, 80);
    const std::string db = (dir / ("store_" + tag + ".jsonl")).string();
    sp::save_store(store, db);

    sp::StoreSnapshot snap = store.snapshot();
    sp::TransitionMatrix m = sp::build_matrix(snap);
    auto steps = sp::predict(sp::WorldStateId{0}, 3, m);
    auto env = sp::envelope(steps, snap, sp::default_profile_table(), 0.75);
    const std::string env_csv = (dir / ("env_" + tag + ".csv")).string();
    sp::export_envelope(env, env_csv);

    sp::WorldStore eval_store = store.clone();
    sp::Rng eval_rng(cfg.seed + 1);
    sp::EvalReport report = sp::evaluate(
        cfg, eval_store, 3, {sp::MatchCriterion::s_match, sp::MatchCriterion::w_match}, false,
        eval_rng);
    const std::string report_csv = (dir / ("report_" + tag + ".csv")).string();
    sp::report_table(report, report_csv);

    return slurp(db) + "\x1f" + slurp(env_csv) + "\x1f" + slurp(report_csv);
  };

  check.require(one_run("a") == one_run("b"), "two identical runs diverged");

  // save / load / save is byte-stable
  sp::WorldStore store;
  sp::Rng rng(7);
  sp::train(cfg, store, rng, 20);
  const std::string first = (dir / "roundtrip_1.jsonl").string();
  const std::string second = (dir / "roundtrip_2.jsonl").string();
  sp::save_store(store, first);
  sp::WorldStore loaded = sp::load_store(first);
  sp::save_store(loaded, second);
  check.require(slurp(first) == slurp(second), "save/load round-trip changed bytes");

  fs::remove_all(dir);
  check.detail << "stores, envelopes and reports byte-identical across reruns";
  return check.finish();
}

CheckResult scenario_fidelity() {
  Check check;

  sp::ScenarioConfig quiet = sp::default_config();
  quiet.human.p_enter_stay = 0.0;
  quiet.human.p_walk_and_grasp = 0.0;
  quiet.human.p_leave = 1.0;
  sp::WorldStore store;
  sp::Rng rng(1);
  sp::EpisodeTrace trace = sp::run_episode(quiet, store, rng);
  check.require(trace.outcome == sp::Outcome::success, "uninterrupted episode not successful");

  const std::vector<std::string> canonical = {
      "root/Idle",
      "root/PickTask/MoveToLocation",   // go to table
      "root/PickTask/FindObject",       // locate object
      "root/PickTask/VisualServo",      // reach object
      "root/PickTask/GraspObject",      // grasp
      "root/PickTask/LiftObject",       // lift object
      "root/PickTask/Success",
      "root/PlaceTask/MoveToLocation",  // go to different location
      "root/PlaceTask/PlaceObject",     // place object
      "root/PlaceTask/ReleaseGrasp",    // release grasp
      "root/PlaceTask/LiftHand",        // lift hand
      "root/PlaceTask/Success",
  };
  auto sequence = trace.state_sequence();
  check.require(sequence.size() == canonical.size(), "sequence length mismatch");
  for (std::size_t i = 0; i < sequence.size() && i < canonical.size(); ++i) {
    check.require(sequence[i].to_string() == canonical[i],
                  "position " + std::to_string(i) + ": " + sequence[i].to_string());
  }

  sp::ScenarioConfig grabby = sp::default_config();
  grabby.human.p_enter_stay = 0.0;
  grabby.human.p_walk_and_grasp = 1.0;
  grabby.human.p_leave = 0.0;
  grabby.human.p_grasp_robot_object = 1.0;
  sp::WorldStore store2;
  sp::Rng rng2(2);
  sp::EpisodeTrace aborted = sp::run_episode(grabby, store2, rng2);
  check.require(aborted.outcome == sp::Outcome::aborted_by_human,
                "grasping the robot's object did not abort");

  check.detail << "canonical task sequence reproduced; robot-object grasp aborts into dialog";
  return check.finish();
}

CheckResult human_model_statistics() {
  Check check;
  sp::HumanModelConfig cfg;  // 0.6 / 0.25 / 0.15
  sp::Rng rng(0xACCE0009);
  sp::HumanState state;
  std::array<int, 3> counts{0, 0, 0};
  const int samples = 10000;
  for (int i = 0; i < samples; ++i) {
    counts[static_cast<int>(sp::human_step(rng, cfg, state).action)]++;
  }
  const std::array<double, 3> expected{cfg.p_enter_stay, cfg.p_walk_and_grasp, cfg.p_leave};
  const char* names[3] = {"enter_stay", "walk_and_grasp", "leave"};
  char buf[128];
  for (int a = 0; a < 3; ++a) {
    const double freq = static_cast<double>(counts[a]) / samples;
    check.require(std::abs(freq - expected[a]) <= 0.02,
                  std::string(names[a]) + " frequency " + std::to_string(freq));
  }
  std::snprintf(buf, sizeof(buf), "10000 decisions: %.3f/%.3f/%.3f vs 0.600/0.250/0.150",
                counts[0] / 10000.0, counts[1] / 10000.0, counts[2] / 10000.0);
  check.detail << buf;
  return check.finish();
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<CheckResult()> run;
  };
  const std::vector<Criterion> criteria = {
      {"markov-oracle-equivalence", markov_oracle_equivalence},
      {"row-stochasticity-and-homogeneity", row_stochasticity_and_homogeneity},
      {"equal-distribution-fallback", equal_distribution_fallback},
      {"envelope-rule", envelope_rule},
      {"precision-trend-reproduction", table_trend_reproduction},
      {"prediction-latency", prediction_latency},
      {"determinism-and-persistence", determinism_and_persistence},
      {"scenario-fidelity", scenario_fidelity},
      {"human-model-statistics", human_model_statistics},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    CheckResult result;
    try {
      result = criteria[i].run();
    } catch (const std::exception& e) {
      result.pass = false;
      result.detail = std::string("exception: ") + e.what();
    }
    if (!result.pass) ++failed;
    std::printf("%s  %zu %s  (%s)\n", result.pass ? "PASS" : "FAIL", i + 1, criteria[i].name,
                result.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu acceptance criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
