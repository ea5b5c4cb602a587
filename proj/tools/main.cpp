// statepredict: simulate a statechart-driven pick-and-place program, learn a
// context-conditioned Markov model of its world-state transitions online,
// and forecast future CPU/memory demand as probability-weighted envelopes.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "statepredict/error.hpp"
#include "statepredict/evaluate.hpp"
#include "statepredict/logging.hpp"
#include "statepredict/predictor.hpp"
#include "statepredict/resources.hpp"
#include "statepredict/scenario.hpp"
#include "statepredict/worldstore.hpp"

namespace sp = statepredict;

namespace {

struct CommonOpts {
  std::string config_path;
  std::optional<std::uint64_t> seed;
};

sp::ScenarioConfig resolve_config(const CommonOpts& opts) {
  sp::ScenarioConfig cfg =
      opts.config_path.empty() ? sp::default_config() : sp::load_config(opts.config_path);
  if (opts.seed) cfg.seed = *opts.seed;
  sp::validate_config(cfg);
  return cfg;
}

sp::ProfileTable resolve_profiles(const std::string& flag_path, const sp::ScenarioConfig& cfg) {
  if (!flag_path.empty()) return sp::load_profile_table(flag_path);
  if (!cfg.profiles.empty()) return sp::load_profile_table(cfg.profiles);
  return sp::default_profile_table();
}

// key=value with the scalar type inferred: true/false, integer, decimal,
// anything else is a token.
sp::Value parse_scalar(const std::string& text) {
  if (text == "true") return true;
  if (text == "false") return false;
  try {
    std::size_t used = 0;
    const long long integer = std::stoll(text, &used);
    if (used == text.size()) return static_cast<std::int64_t>(integer);
  } catch (const std::exception&) {
  }
  try {
    std::size_t used = 0;
    const double decimal = std::stod(text, &used);
    if (used == text.size()) return decimal;
  } catch (const std::exception&) {
  }
  return text;
}

void apply_kv_flags(const std::vector<std::string>& pairs, sp::ParameterSet& out) {
  for (const auto& pair : pairs) {
    const std::size_t eq = pair.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw sp::Error(sp::ErrorCode::invalid_argument, "expected key=value, got '" + pair + "'");
    }
    out.set(pair.substr(0, eq), parse_scalar(pair.substr(eq + 1)));
  }
}

int run_simulate(const CommonOpts& opts, int episodes, bool failures,
                 const std::string& db_path) {
  sp::ScenarioConfig cfg = resolve_config(opts);
  sp::WorldStore store;
  sp::Rng rng(cfg.seed);
  for (int i = 0; i < episodes; ++i) {
    sp::EpisodeTrace trace = sp::run_episode(cfg, store, rng, failures, nullptr, i);
    std::cout << "episode " << trace.episode_id << " outcome=" << to_string(trace.outcome)
              << " states=";
    const auto sequence = trace.state_sequence();
    for (std::size_t s = 0; s < sequence.size(); ++s) {
      if (s > 0) std::cout << " -> ";
      std::cout << sequence[s].to_string();
    }
    std::cout << "\n";
  }
  if (!db_path.empty()) {
    sp::save_store(store, db_path);
    std::cout << "store: " << store.size() << " world states, " << store.total_count()
              << " observations -> " << db_path << "\n";
  }
  return 0;
}

int run_train(const CommonOpts& opts, int episodes, bool failures, const std::string& db_path) {
  sp::ScenarioConfig cfg = resolve_config(opts);
  sp::WorldStore store;
  sp::Rng rng(cfg.seed);
  sp::train(cfg, store, rng, episodes, failures);
  sp::save_store(store, db_path);
  std::cout << "trained " << episodes << " episodes: " << store.size() << " world states, "
            << store.total_count() << " observations -> " << db_path << "\n";
  return 0;
}

int run_predict(const CommonOpts& opts, const std::string& db_path, const std::string& state,
                const std::vector<std::string>& phi, const std::vector<std::string>& psi,
                int horizon, double threshold, const std::string& profiles_path,
                const std::string& out_path, const std::string& json_out) {
  sp::ScenarioConfig cfg = resolve_config(opts);
  sp::WorldStore store = sp::load_store(db_path);
  sp::ProfileTable profiles = resolve_profiles(profiles_path, cfg);

  sp::WorldState query;
  query.state = sp::StateId::parse(state);
  apply_kv_flags(phi, query.state_params);
  apply_kv_flags(psi, query.env_params);

  sp::StoreSnapshot snapshot = store.snapshot();
  sp::TransitionMatrix matrix = sp::build_matrix(snapshot);

  std::vector<sp::PredictionStep> steps;
  if (auto id = store.find(query)) {
    steps = sp::predict(*id, horizon, matrix);
  } else {
    std::cerr << "warning: world state not in database, using the uniform fallback\n";
    steps = sp::predict_unobserved(horizon, matrix);
  }

  auto env = sp::envelope(steps, snapshot, profiles, threshold);
  if (!out_path.empty()) sp::export_envelope(env, out_path);
  if (!json_out.empty()) sp::export_prediction(steps, json_out);

  for (const auto& step : env) {
    const sp::StateId top = sp::top_state(steps[step.step - 1], snapshot);
    std::cout << "step " << step.step << ": top=" << top.to_string()
              << " cpu=[" << step.cpu_min << "," << step.cpu_most << "," << step.cpu_max
              << "] mem=[" << step.mem_min << "," << step.mem_most << "," << step.mem_max
              << "] covered=" << step.covered_probability << "\n";
  }
  return 0;
}

int run_evaluate(const CommonOpts& opts, const std::string& db_path, int episodes,
                 const std::string& criterion, bool failures, const std::string& out_path,
                 const std::string& json_out) {
  sp::ScenarioConfig cfg = resolve_config(opts);
  sp::WorldStore store = sp::load_store(db_path);
  if (store.size() == 0) {
    sp::logging::info("evaluating an empty store: predictions start from the uniform fallback");
  }

  std::vector<sp::MatchCriterion> criteria;
  if (criterion == "s") {
    criteria = {sp::MatchCriterion::s_match};
  } else if (criterion == "w") {
    criteria = {sp::MatchCriterion::w_match};
  } else if (criterion == "both") {
    criteria = {sp::MatchCriterion::s_match, sp::MatchCriterion::w_match};
  } else {
    throw sp::Error(sp::ErrorCode::invalid_argument,
                    "--criterion must be s, w or both, got '" + criterion + "'");
  }

  sp::Rng rng(cfg.seed);
  sp::EvalReport report = sp::evaluate(cfg, store, episodes, criteria, failures, rng);
  if (!out_path.empty()) sp::report_table(report, out_path);
  if (!json_out.empty()) sp::export_report_json(report, json_out);
  std::cout << sp::report_to_csv(report);
  return 0;
}

int run_export_profiles(const std::string& out_path, const std::string& scenario_out,
                        const std::string& statechart_out) {
  if (!out_path.empty()) {
    sp::save_profile_table(sp::default_profile_table(), out_path);
    std::cout << "profiles -> " << out_path << "\n";
  }
  if (!scenario_out.empty()) {
    sp::save_config(sp::default_config(), scenario_out);
    std::cout << "scenario config -> " << scenario_out << "\n";
  }
  if (!statechart_out.empty()) {
    sp::save_statechart(sp::pick_and_place_statechart(), statechart_out);
    std::cout << "statechart -> " << statechart_out << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Markov-chain behavior and resource prediction for statechart programs"};
  app.require_subcommand(1);

  CommonOpts common;

  auto add_common = [&common](CLI::App* cmd) {
    cmd->add_option("--config", common.config_path, "Scenario config JSON");
    cmd->add_option("--seed", common.seed, "Seed overriding the config");
  };

  auto* simulate = app.add_subcommand("simulate", "Run episodes and print their traces");
  int sim_episodes = 1;
  bool sim_failures = false;
  std::string sim_db;
  add_common(simulate);
  simulate->add_option("--episodes", sim_episodes, "Number of episodes")
      ->check(CLI::PositiveNumber);
  simulate->add_flag("--failures", sim_failures, "Inject per-substate failure events");
  simulate->add_option("--db", sim_db, "Also save the learned store here");

  auto* train_cmd = app.add_subcommand("train", "Run training episodes and save the store");
  int train_episodes = 500;
  bool train_failures = false;
  std::string train_db;
  add_common(train_cmd);
  train_cmd->add_option("--episodes", train_episodes, "Number of training episodes")
      ->check(CLI::PositiveNumber);
  train_cmd->add_flag("--failures", train_failures, "Inject per-substate failure events");
  train_cmd->add_option("--db", train_db, "Output database path")->required();

  auto* predict_cmd = app.add_subcommand("predict", "Forecast resource envelopes for a state");
  std::string predict_db, predict_state, predict_profiles, predict_out, predict_json;
  std::vector<std::string> predict_phi, predict_psi;
  int predict_horizon = 3;
  double predict_threshold = 0.75;
  add_common(predict_cmd);
  predict_cmd->add_option("--db", predict_db, "Trained database path")->required();
  predict_cmd->add_option("--state", predict_state, "Statechart state path")->required();
  predict_cmd->add_option("--phi", predict_phi, "State parameter key=value (repeatable)");
  predict_cmd->add_option("--psi", predict_psi, "Environment parameter key=value (repeatable)");
  predict_cmd->add_option("--horizon", predict_horizon, "Prediction horizon")
      ->check(CLI::PositiveNumber);
  predict_cmd->add_option("--threshold", predict_threshold,
                          "Cumulative probability kept per step");
  predict_cmd->add_option("--profiles", predict_profiles, "Profile table JSON");
  predict_cmd->add_option("--out", predict_out, "Envelope CSV output path");
  predict_cmd->add_option("--json-out", predict_json, "Raw prediction JSON output path");

  auto* eval_cmd = app.add_subcommand("evaluate", "Score prediction precision");
  std::string eval_db, eval_criterion = "both", eval_out, eval_json;
  int eval_episodes = 4;
  bool eval_failures = false;
  add_common(eval_cmd);
  eval_cmd->add_option("--db", eval_db, "Trained database path")->required();
  eval_cmd->add_option("--episodes", eval_episodes, "Number of evaluation episodes")
      ->check(CLI::PositiveNumber);
  eval_cmd->add_option("--criterion", eval_criterion, "s, w or both");
  eval_cmd->add_flag("--failures", eval_failures, "Inject per-substate failure events");
  eval_cmd->add_option("--out", eval_out, "Report CSV output path");
  eval_cmd->add_option("--json-out", eval_json, "Report JSON output path");

  auto* export_cmd =
      app.add_subcommand("export-profiles", "Write the built-in defaults to files");
  std::string export_out, export_scenario, export_statechart;
  export_cmd->add_option("--out", export_out, "Profile table JSON output path");
  export_cmd->add_option("--scenario-out", export_scenario, "Scenario config output path");
  export_cmd->add_option("--statechart-out", export_statechart,
                         "Statechart definition output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    std::cerr << "error:validation: " << e.what() << "\n";
    return 1;
  }

  try {
    if (simulate->parsed()) return run_simulate(common, sim_episodes, sim_failures, sim_db);
    if (train_cmd->parsed()) return run_train(common, train_episodes, train_failures, train_db);
    if (predict_cmd->parsed()) {
      return run_predict(common, predict_db, predict_state, predict_phi, predict_psi,
                         predict_horizon, predict_threshold, predict_profiles, predict_out,
                         predict_json);
    }
    if (eval_cmd->parsed()) {
      return run_evaluate(common, eval_db, eval_episodes, eval_criterion, eval_failures,
                          eval_out, eval_json);
    }
    if (export_cmd->parsed()) {
      return run_export_profiles(export_out, export_scenario, export_statechart);
    }
  } catch (const sp::Error& e) {
    std::cerr << "error:" << e.category() << ": " << e.what() << "\n";
    return std::string(e.category()) == "io" ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error:internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
