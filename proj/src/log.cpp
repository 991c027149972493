#include "les/log.hpp"

#include <cstring>

namespace les::log {

namespace {

Level parse_env() {
  const char* e = std::getenv("LES_LOG_LEVEL");
  if (!e) return Level::warn;
  if (std::strcmp(e, "error") == 0) return Level::error;
  if (std::strcmp(e, "warn") == 0) return Level::warn;
  if (std::strcmp(e, "info") == 0) return Level::info;
  if (std::strcmp(e, "debug") == 0) return Level::debug;
  return Level::warn;
}

Level g_threshold = parse_env();

const char* tag(Level lv) {
  switch (lv) {
    case Level::error: return "error";
    case Level::warn: return "warn";
    case Level::info: return "info";
    case Level::debug: return "debug";
  }
  return "?";
}

}  // namespace

Level threshold() { return g_threshold; }
void set_threshold(Level lv) { g_threshold = lv; }

void write(Level lv, const std::string& msg) {
  if (static_cast<int>(lv) > static_cast<int>(g_threshold)) return;
  std::fprintf(stderr, "[les:%s] %s\n", tag(lv), msg.c_str());
}

}  // namespace les::log
