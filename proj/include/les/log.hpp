#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

namespace les::log {

enum class Level { error = 0, warn = 1, info = 2, debug = 3 };

// Level comes from LES_LOG_LEVEL (error|warn|info|debug), default warn.
Level threshold();
void set_threshold(Level lv);

void write(Level lv, const std::string& msg);

inline void error(const std::string& m) { write(Level::error, m); }
inline void warn(const std::string& m) { write(Level::warn, m); }
inline void info(const std::string& m) { write(Level::info, m); }
inline void debug(const std::string& m) { write(Level::debug, m); }

}  // namespace les::log
