#include "statepredict/evaluate.hpp"

#include <algorithm>
#include <cstdio>
#include <optional>

#include "json_util.hpp"
#include "statepredict/error.hpp"
#include "statepredict/predictor.hpp"

namespace statepredict {

const char* to_string(MatchCriterion criterion) {
  return criterion == MatchCriterion::s_match ? "s_match" : "w_match";
}

bool score(const WorldState& predicted_top, const WorldState& actual_next,
           MatchCriterion criterion) {
  if (criterion == MatchCriterion::s_match) {
    return predicted_top.state == actual_next.state;
  }
  return predicted_top == actual_next;
}

EvalReport evaluate(const ScenarioConfig& cfg, WorldStore& store, int n_eval_episodes,
                    const std::vector<MatchCriterion>& criteria, bool failures, Rng& rng) {
  if (n_eval_episodes < 1) {
    throw Error(ErrorCode::invalid_argument, "n_eval_episodes must be >= 1");
  }
  validate_config(cfg);

  struct Cell {
    std::uint64_t total = 0;
    std::uint64_t correct = 0;
  };
  std::vector<Cell> cells(criteria.size());

  // The pending prediction carries the step-1 top world state; it is scored
  // when the next trigger reveals the state actually reached.
  std::optional<WorldState> pending_top;
  auto hook = [&](WorldStateId current, const WorldState& current_ws) {
    if (pending_top) {
      for (std::size_t c = 0; c < criteria.size(); ++c) {
        ++cells[c].total;
        if (score(*pending_top, current_ws, criteria[c])) ++cells[c].correct;
      }
    }
    StoreSnapshot snapshot = store.snapshot();
    TransitionMatrix matrix = build_matrix(snapshot);
    std::vector<PredictionStep> steps = predict(current, cfg.horizon, matrix);
    pending_top = snapshot.states[steps.front().top.index];
  };

  for (int episode = 0; episode < n_eval_episodes; ++episode) {
    pending_top.reset();  // predictions do not cross episode boundaries
    run_episode(cfg, store, rng, failures, hook, static_cast<std::uint64_t>(episode));
  }

  EvalReport report;
  report.seed = cfg.seed;
  report.config_digest = config_digest(cfg);
  for (std::size_t c = 0; c < criteria.size(); ++c) {
    EvalRow row;
    row.criterion = criteria[c];
    row.failures_enabled = failures;
    row.predictions_total = cells[c].total;
    row.predictions_correct = cells[c].correct;
    row.precision_percent =
        cells[c].total == 0
            ? 0.0
            : 100.0 * static_cast<double>(cells[c].correct) / static_cast<double>(cells[c].total);
    report.rows.push_back(row);
  }
  std::sort(report.rows.begin(), report.rows.end(), [](const EvalRow& a, const EvalRow& b) {
    if (a.criterion != b.criterion) return a.criterion < b.criterion;
    return a.failures_enabled < b.failures_enabled;
  });
  return report;
}

EvalReport merge_reports(const EvalReport& a, const EvalReport& b) {
  EvalReport merged = a;
  merged.rows.insert(merged.rows.end(), b.rows.begin(), b.rows.end());
  std::sort(merged.rows.begin(), merged.rows.end(), [](const EvalRow& x, const EvalRow& y) {
    if (x.criterion != y.criterion) return x.criterion < y.criterion;
    return x.failures_enabled < y.failures_enabled;
  });
  return merged;
}

std::string report_to_csv(const EvalReport& report) {
  std::string out = "criterion,failures_enabled,total,correct,precision_percent\n";
  char buf[160];
  for (const auto& row : report.rows) {
    std::snprintf(buf, sizeof(buf), "%s,%s,%llu,%llu,%.6f\n", to_string(row.criterion),
                  row.failures_enabled ? "true" : "false",
                  static_cast<unsigned long long>(row.predictions_total),
                  static_cast<unsigned long long>(row.predictions_correct),
                  row.precision_percent);
    out += buf;
  }
  return out;
}

void report_table(const EvalReport& report, const std::string& path) {
  detail::write_file(path, report_to_csv(report));
}

std::string report_to_json(const EvalReport& report) {
  nlohmann::json doc = nlohmann::json::object();
  doc["config_digest"] = report.config_digest;
  doc["seed"] = report.seed;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    nlohmann::json r = nlohmann::json::object();
    r["criterion"] = to_string(row.criterion);
    r["failures_enabled"] = row.failures_enabled;
    r["predictions_total"] = row.predictions_total;
    r["predictions_correct"] = row.predictions_correct;
    r["precision_percent"] = row.precision_percent;
    rows.push_back(r);
  }
  doc["rows"] = rows;
  return doc.dump(2) + "\n";
}

void export_report_json(const EvalReport& report, const std::string& path) {
  detail::write_file(path, report_to_json(report));
}

}  // namespace statepredict
