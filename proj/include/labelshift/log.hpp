#pragma once

#include <string_view>

namespace labelshift::log {

enum class Level { Debug, Info, Warning, Error, Off };

// Process-wide threshold; messages below it are dropped. Default: Warning.
void set_level(Level level);
Level level();

void write(Level level, std::string_view message);

inline void info(std::string_view message) { write(Level::Info, message); }
inline void warn(std::string_view message) { write(Level::Warning, message); }

}  // namespace labelshift::log
