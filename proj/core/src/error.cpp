#include "statepredict/error.hpp"

namespace statepredict {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::duplicate_state_id: return "duplicate state id";
    case ErrorCode::unknown_state_in_transition: return "unknown state in transition";
    case ErrorCode::ambiguous_transition: return "ambiguous transition";
    case ErrorCode::missing_initial_child: return "missing initial child";
    case ErrorCode::invalid_statechart: return "invalid statechart";
    case ErrorCode::missing_environment_key: return "missing environment key";
    case ErrorCode::unknown_world_state_id: return "unknown world state id";
    case ErrorCode::empty_store: return "empty store";
    case ErrorCode::index_out_of_range: return "index out of range";
    case ErrorCode::dimension_mismatch: return "dimension mismatch";
    case ErrorCode::invalid_threshold: return "invalid threshold";
    case ErrorCode::invalid_config: return "invalid config";
    case ErrorCode::invalid_argument: return "invalid argument";
    case ErrorCode::corrupt_database: return "corrupt database";
    case ErrorCode::io_failure: return "io failure";
  }
  return "unknown error";
}

const char* category_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::corrupt_database:
    case ErrorCode::io_failure:
      return "io";
    default:
      return "validation";
  }
}

}  // namespace statepredict
