#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "statepredict/worldstore.hpp"

namespace statepredict {

/// Dense probability vector over the interned world states. Entries are
/// non-negative and sum to 1 within 1e-9.
using ProbabilityVector = std::vector<double>;

bool is_probability_vector(std::span<const double> v, double tolerance = 1e-9);

/// Row-stochastic transition matrix built from a store snapshot. Row i holds
/// the normalized outgoing counts of world state i; rows without any
/// observation fall back to the uniform distribution, so a never-observed
/// state predicts every world state with probability 1/n. Dense row-major
/// storage, intended for up to ~10k world states.
class TransitionMatrix {
 public:
  TransitionMatrix(std::size_t n, std::uint64_t snapshot_revision)
      : n_(n), snapshot_revision_(snapshot_revision), data_(n * n, 0.0) {}

  std::size_t n() const { return n_; }
  std::uint64_t snapshot_revision() const { return snapshot_revision_; }

  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(data_.data() + i * n_, n_);
  }
  std::span<double> row(std::size_t i) {
    return std::span<double>(data_.data() + i * n_, n_);
  }
  double at(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

 private:
  std::size_t n_;
  std::uint64_t snapshot_revision_;
  std::vector<double> data_;
};

/// Throws empty_store when the snapshot has no world states.
TransitionMatrix build_matrix(const StoreSnapshot& snapshot);

/// Vector with entry `id` set to 1. Throws index_out_of_range.
ProbabilityVector one_hot(WorldStateId id, std::size_t n);

/// One propagation step x' = x^T * M, renormalized when floating point
/// drift moved the sum away from 1. Throws dimension_mismatch.
ProbabilityVector propagate(const ProbabilityVector& x, const TransitionMatrix& m);

struct PredictionStep {
  int step = 0;  // 1-based
  ProbabilityVector distribution;
  WorldStateId top;  // argmax, lowest index among ties
};

/// Distributions for steps 1..h starting from the given world state. The
/// chain is homogeneous, so step k equals one_hot(id) * M^k.
std::vector<PredictionStep> predict(WorldStateId id, int horizon, const TransitionMatrix& m);

/// Prediction for a world state that is not interned: step 1 is the uniform
/// distribution over the n known states, later steps propagate it.
std::vector<PredictionStep> predict_unobserved(int horizon, const TransitionMatrix& m);

/// Statechart state of the step's most probable world state.
StateId top_state(const PredictionStep& step, const StoreSnapshot& snapshot);

/// JSON export: per step, (world state id, probability) entries sorted by
/// probability descending, then id ascending.
std::string prediction_to_json(const std::vector<PredictionStep>& steps);
void export_prediction(const std::vector<PredictionStep>& steps, const std::string& path);

}  // namespace statepredict
