#include "statepredict/predictor.hpp"

#include <algorithm>
#include <cmath>

#include "json_util.hpp"
#include "statepredict/error.hpp"

namespace statepredict {

namespace {

// Compensated sum; keeps the stochasticity check sharp even for large n.
double kahan_sum(std::span<const double> values) {
  double sum = 0.0;
  double carry = 0.0;
  for (double v : values) {
    double y = v - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum;
}

WorldStateId argmax_lowest_index(std::span<const double> dist) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < dist.size(); ++i) {
    if (dist[i] > dist[best]) best = i;
  }
  return WorldStateId{static_cast<std::uint32_t>(best)};
}

}  // namespace

bool is_probability_vector(std::span<const double> v, double tolerance) {
  for (double p : v) {
    if (!(p >= 0.0)) return false;
  }
  return std::abs(kahan_sum(v) - 1.0) <= tolerance;
}

TransitionMatrix build_matrix(const StoreSnapshot& snapshot) {
  const std::size_t n = snapshot.size();
  if (n == 0) throw Error(ErrorCode::empty_store, "snapshot has no world states");

  TransitionMatrix m(n, snapshot.revision);
  const double uniform = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = m.row(i);
    const auto& outgoing = snapshot.outgoing[i];
    if (outgoing.empty()) {
      std::fill(row.begin(), row.end(), uniform);
      continue;
    }
    std::uint64_t total = 0;
    for (const auto& [to, count] : outgoing) total += count;
    for (const auto& [to, count] : outgoing) {
      row[to] = static_cast<double>(count) / static_cast<double>(total);
    }
  }
  return m;
}

ProbabilityVector one_hot(WorldStateId id, std::size_t n) {
  if (id.index >= n) {
    throw Error(ErrorCode::index_out_of_range,
                std::to_string(id.index) + " >= " + std::to_string(n));
  }
  ProbabilityVector x(n, 0.0);
  x[id.index] = 1.0;
  return x;
}

ProbabilityVector propagate(const ProbabilityVector& x, const TransitionMatrix& m) {
  if (x.size() != m.n()) {
    throw Error(ErrorCode::dimension_mismatch,
                "vector length " + std::to_string(x.size()) + " vs matrix dimension " +
                    std::to_string(m.n()));
  }
  ProbabilityVector y(m.n(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    auto row = m.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) y[j] += xi * row[j];
  }
  const double sum = kahan_sum(y);
  if (sum <= 0.0) {
    throw Error(ErrorCode::invalid_argument, "probability mass vanished during propagation");
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    for (double& p : y) p /= sum;
  }
  return y;
}

namespace {

std::vector<PredictionStep> propagate_steps(ProbabilityVector first, int horizon,
                                            const TransitionMatrix& m) {
  std::vector<PredictionStep> steps;
  steps.reserve(static_cast<std::size_t>(horizon));
  ProbabilityVector x = std::move(first);
  for (int k = 1; k <= horizon; ++k) {
    PredictionStep step;
    step.step = k;
    step.top = argmax_lowest_index(x);
    step.distribution = x;
    steps.push_back(std::move(step));
    if (k < horizon) x = propagate(steps.back().distribution, m);
  }
  return steps;
}

}  // namespace

std::vector<PredictionStep> predict(WorldStateId id, int horizon, const TransitionMatrix& m) {
  if (horizon < 1) throw Error(ErrorCode::invalid_argument, "horizon must be >= 1");
  return propagate_steps(propagate(one_hot(id, m.n()), m), horizon, m);
}

std::vector<PredictionStep> predict_unobserved(int horizon, const TransitionMatrix& m) {
  if (horizon < 1) throw Error(ErrorCode::invalid_argument, "horizon must be >= 1");
  if (m.n() == 0) throw Error(ErrorCode::empty_store, "matrix has no states");
  ProbabilityVector uniform(m.n(), 1.0 / static_cast<double>(m.n()));
  return propagate_steps(std::move(uniform), horizon, m);
}

StateId top_state(const PredictionStep& step, const StoreSnapshot& snapshot) {
  if (step.top.index >= snapshot.size()) {
    throw Error(ErrorCode::index_out_of_range, std::to_string(step.top.index));
  }
  return snapshot.states[step.top.index].state;
}

std::string prediction_to_json(const std::vector<PredictionStep>& steps) {
  nlohmann::json doc = nlohmann::json::object();
  doc["horizon"] = steps.size();
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& step : steps) {
    std::vector<std::size_t> order(step.distribution.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (step.distribution[a] != step.distribution[b]) {
        return step.distribution[a] > step.distribution[b];
      }
      return a < b;
    });
    nlohmann::json entries = nlohmann::json::array();
    for (std::size_t id : order) {
      nlohmann::json e = nlohmann::json::object();
      e["id"] = id;
      e["p"] = step.distribution[id];
      entries.push_back(e);
    }
    nlohmann::json s = nlohmann::json::object();
    s["entries"] = entries;
    s["step"] = step.step;
    s["top"] = step.top.index;
    arr.push_back(s);
  }
  doc["steps"] = arr;
  return doc.dump() + "\n";
}

void export_prediction(const std::vector<PredictionStep>& steps, const std::string& path) {
  detail::write_file(path, prediction_to_json(steps));
}

}  // namespace statepredict
