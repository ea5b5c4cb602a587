#pragma once

#include <stdexcept>
#include <string>

namespace statepredict {

/// Failure codes surfaced by the library. Every code belongs to one of two
/// categories: "validation" (bad input, contract violation) or "io" (file
/// level problems). The CLI maps categories to exit codes 1 and 2.
enum class ErrorCode {
  duplicate_state_id,
  unknown_state_in_transition,
  ambiguous_transition,
  missing_initial_child,
  invalid_statechart,
  missing_environment_key,
  unknown_world_state_id,
  empty_store,
  index_out_of_range,
  dimension_mismatch,
  invalid_threshold,
  invalid_config,
  invalid_argument,
  corrupt_database,
  io_failure,
};

const char* to_string(ErrorCode code);

/// Returns "validation" or "io".
const char* category_of(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }
  const char* category() const { return category_of(code_); }

 private:
  ErrorCode code_;
};

}  // namespace statepredict
