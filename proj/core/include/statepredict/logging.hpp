#pragma once

#include <string>

namespace statepredict::logging {

enum class Level { off = 0, info = 1, debug = 2 };

/// Current level, parsed once from the STATEPREDICT_LOG environment
/// variable ("off", "info", "debug"). Unset or unrecognized means off.
Level level();

void info(const std::string& message);
void debug(const std::string& message);

}  // namespace statepredict::logging
