#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace dacoop {

// Simulation-contract violations (penetrating queries, invalid commands, ...).
class SimError : public std::runtime_error {
public:
    explicit SimError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad configuration or input files. CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Non-finite values escaping a numeric routine. CLI maps this to exit code 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Incompatible or corrupt run artifacts (checkpoints). CLI maps this to exit code 4.
class ArtifactError : public std::runtime_error {
public:
    explicit ArtifactError(const std::string& msg) : std::runtime_error(msg) {}
};

constexpr double kPi = 3.141592653589793238462643383279502884;

// Normalizes an angle into (-pi, pi].
inline double wrap_angle(double a) {
    double r = std::remainder(a, 2.0 * kPi);
    if (r <= -kPi) r += 2.0 * kPi;
    return r;
}

inline double deg_to_rad(double d) { return d * kPi / 180.0; }

// Shortest round-trip decimal form; keeps text artifacts byte-stable.
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

enum class LogLevel { kError = 0, kWarn = 1, kInfo = 2, kDebug = 3 };

inline LogLevel log_level() {
    static LogLevel level = [] {
        const char* env = std::getenv("DACOOP_LOG");
        if (env == nullptr) return LogLevel::kWarn;
        std::string s(env);
        if (s == "error") return LogLevel::kError;
        if (s == "warn") return LogLevel::kWarn;
        if (s == "info") return LogLevel::kInfo;
        if (s == "debug") return LogLevel::kDebug;
        return LogLevel::kWarn;
    }();
    return level;
}

inline void log_msg(LogLevel lvl, const std::string& msg) {
    if (lvl > log_level()) return;
    static const char* names[] = {"error", "warn", "info", "debug"};
    std::fprintf(stderr, "[dacoop:%s] %s\n", names[static_cast<int>(lvl)], msg.c_str());
}

}  // namespace dacoop
