#pragma once

#include <cstdlib>
#include <iostream>
#include <string>
#include <string_view>

namespace qjsd::log {

enum class Level { quiet = 0, info = 1, debug = 2 };

/// Verbosity from the QJSD_LOG environment variable (0/quiet, 1/info, 2/debug).
inline Level level()
{
    static const Level cached = [] {
        const char* env = std::getenv("QJSD_LOG");
        if (!env) return Level::quiet;
        const std::string_view v(env);
        if (v == "2" || v == "debug") return Level::debug;
        if (v == "1" || v == "info") return Level::info;
        return Level::quiet;
    }();
    return cached;
}

inline void info(const std::string& msg)
{
    if (level() >= Level::info) std::clog << "[qjsd] " << msg << '\n';
}

inline void debug(const std::string& msg)
{
    if (level() >= Level::debug) std::clog << "[qjsd:debug] " << msg << '\n';
}

} // namespace qjsd::log
