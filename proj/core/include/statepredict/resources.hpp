#pragma once

#include <map>
#include <string>
#include <vector>

#include "statepredict/predictor.hpp"
#include "statepredict/statechart.hpp"
#include "statepredict/worldstore.hpp"

namespace statepredict {

/// Reduced per-state resource model: CPU in [0, 100] percent, memory in
/// [0, 1000] MB.
struct ResourceProfile {
  double cpu_percent = 0.0;
  double memory_mb = 0.0;

  friend bool operator==(const ResourceProfile&, const ResourceProfile&) = default;
};

/// Throws invalid_config when a value is outside its range.
void validate_profile(const ResourceProfile& profile);

/// Maps statechart states to resource profiles. Multiple world states that
/// share a statechart state share a profile; unmapped states get the
/// default.
class ProfileTable {
 public:
  ProfileTable() = default;
  ProfileTable(std::map<StateId, ResourceProfile> profiles, ResourceProfile fallback);

  const ResourceProfile& lookup(const StateId& state) const;
  const ResourceProfile& fallback() const { return default_; }
  const std::map<StateId, ResourceProfile>& profiles() const { return profiles_; }

 private:
  std::map<StateId, ResourceProfile> profiles_;
  ResourceProfile default_;
};

/// JSON file: flat object mapping state path -> {cpu_percent, memory_mb},
/// plus the reserved key "default".
std::string profile_table_to_json(const ProfileTable& table);
ProfileTable profile_table_from_json(const std::string& text);
ProfileTable load_profile_table(const std::string& path);
void save_profile_table(const ProfileTable& table, const std::string& path);

/// Resource bounds for one future step, taken over the smallest
/// high-probability prefix of the predicted distribution.
struct EnvelopeStep {
  int step = 0;
  double cpu_min = 0.0, cpu_most = 0.0, cpu_max = 0.0;
  double mem_min = 0.0, mem_most = 0.0, mem_max = 0.0;
  double covered_probability = 0.0;
};

/// Per step: entries sorted by probability descending (ties by ascending
/// id), the shortest prefix with cumulative probability >= threshold is
/// kept, min/max span the prefix profiles and `most` is the profile of the
/// top entry (always inside the prefix). Throws invalid_threshold unless
/// 0 < threshold <= 1.
std::vector<EnvelopeStep> envelope(const std::vector<PredictionStep>& steps,
                                   const StoreSnapshot& snapshot, const ProfileTable& table,
                                   double threshold = 0.75);

/// CSV with header step,cpu_min,cpu_most,cpu_max,mem_min,mem_most,mem_max,
/// covered_probability; six fractional digits, LF line endings.
std::string envelope_to_csv(const std::vector<EnvelopeStep>& envelope);
void export_envelope(const std::vector<EnvelopeStep>& envelope, const std::string& path);

}  // namespace statepredict
