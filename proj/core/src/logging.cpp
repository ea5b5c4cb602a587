#include "statepredict/logging.hpp"

#include <cstdlib>
#include <iostream>

namespace statepredict::logging {

namespace {

Level parse_env() {
  const char* raw = std::getenv("STATEPREDICT_LOG");
  if (raw == nullptr) return Level::off;
  std::string value(raw);
  if (value == "info") return Level::info;
  if (value == "debug") return Level::debug;
  return Level::off;
}

}  // namespace

Level level() {
  static const Level lvl = parse_env();
  return lvl;
}

void info(const std::string& message) {
  if (level() >= Level::info) std::cerr << "[statepredict] " << message << '\n';
}

void debug(const std::string& message) {
  if (level() >= Level::debug) std::cerr << "[statepredict] " << message << '\n';
}

}  // namespace statepredict::logging
