#pragma once

#include <cstdint>
#include <random>
#include <span>

#include "statepredict/error.hpp"

namespace statepredict {

/// Seeded random source for the simulation. All variates are derived from
/// raw mt19937_64 output so that a given seed produces the same sequence on
/// every platform (the std::*_distribution adaptors are not pinned by the
/// standard and are avoided here).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Index sampled proportionally to the given non-negative weights.
  std::size_t weighted(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (weights.empty() || total <= 0.0) {
      throw Error(ErrorCode::invalid_argument, "weighted draw needs positive mass");
    }
    double u = uniform() * total;
    double cum = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      cum += weights[i];
      if (u < cum) return i;
    }
    return weights.size() - 1;
  }

  std::uint64_t next_u64() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace statepredict
