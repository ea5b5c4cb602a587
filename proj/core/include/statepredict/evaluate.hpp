#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "statepredict/scenario.hpp"
#include "statepredict/worldstore.hpp"

namespace statepredict {

/// Prediction-correctness criteria: s_match compares only the statechart
/// state, w_match additionally requires equal state and environment
/// parameters (full world-state equality).
enum class MatchCriterion { s_match, w_match };

const char* to_string(MatchCriterion criterion);

bool score(const WorldState& predicted_top, const WorldState& actual_next,
           MatchCriterion criterion);

struct EvalRow {
  MatchCriterion criterion = MatchCriterion::s_match;
  bool failures_enabled = false;
  std::uint64_t predictions_total = 0;
  std::uint64_t predictions_correct = 0;
  double precision_percent = 0.0;
};

struct EvalReport {
  std::vector<EvalRow> rows;
  std::string config_digest;
  std::uint64_t seed = 0;
};

/// Runs n evaluation episodes. Every important-state change triggers a
/// horizon-long prediction; the step-1 top world state is scored against
/// the world state actually reached at the next trigger. Learning stays
/// enabled, so the model keeps updating online while being evaluated.
EvalReport evaluate(const ScenarioConfig& cfg, WorldStore& store, int n_eval_episodes,
                    const std::vector<MatchCriterion>& criteria, bool failures, Rng& rng);

/// Combines reports from separate runs (e.g. with and without failure
/// injection) into one table; rows are sorted by (criterion, failures).
EvalReport merge_reports(const EvalReport& a, const EvalReport& b);

/// CSV with header criterion,failures_enabled,total,correct,precision_percent.
std::string report_to_csv(const EvalReport& report);
void report_table(const EvalReport& report, const std::string& path);

/// Full JSON report with counts, seed and config digest.
std::string report_to_json(const EvalReport& report);
void export_report_json(const EvalReport& report, const std::string& path);

}  // namespace statepredict
