#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace vib2ecg {

// Acquisition clock: 50 MHz, one tick = 20 ns.
inline constexpr std::uint64_t kTicksPerSecond = 50'000'000;

using Tick = std::uint64_t;

inline constexpr double kPi = 3.14159265358979323846;

inline Tick seconds_to_ticks(double s) {
    return static_cast<Tick>(std::llround(s * static_cast<double>(kTicksPerSecond)));
}

inline double ticks_to_seconds(Tick t) {
    return static_cast<double>(t) / static_cast<double>(kTicksPerSecond);
}

// Error hierarchy. Each condition named in an operation contract gets its
// own type so callers (and tests) can catch precisely.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidSpecError : public Error {
public:
    using Error::Error;
};

class SignalTooShortError : public Error {
public:
    using Error::Error;
};

class DataCorruptionError : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

class InvariantError : public Error {
public:
    using Error::Error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw InvariantError(msg);
}

template <typename T>
bool all_finite(const std::vector<T>& v) {
    for (T x : v) {
        if (!std::isfinite(static_cast<double>(x))) return false;
    }
    return true;
}

}  // namespace vib2ecg
