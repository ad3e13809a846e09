#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vib2ecg/common.hpp"

namespace vib2ecg {

// Raw sensor stream: one value per hardware timestamp tick.
// ECG samples are in millivolt, vibration samples in m/s^2.
struct TimestampedSignal {
    std::vector<float> samples;
    std::vector<Tick> timestamps;
    double nominal_rate = 0.0;  // Hz
};

// Regularly sampled stream, produced by interpolation/alignment.
struct UniformSignal {
    std::vector<float> samples;
    double rate = 0.0;  // Hz
    Tick start_tick = 0;
};

inline void validate(const TimestampedSignal& s) {
    require(s.samples.size() == s.timestamps.size(),
            "timestamped signal: samples/timestamps length mismatch");
    require(s.nominal_rate > 0.0, "timestamped signal: nominal rate must be positive");
    for (std::size_t i = 1; i < s.timestamps.size(); ++i) {
        if (s.timestamps[i] <= s.timestamps[i - 1]) {
            throw DataCorruptionError("timestamped signal: timestamps not strictly increasing at index " +
                                      std::to_string(i));
        }
    }
    if (s.timestamps.size() >= 2) {
        const double span = ticks_to_seconds(s.timestamps.back() - s.timestamps.front());
        const double mean_dt = span / static_cast<double>(s.timestamps.size() - 1);
        const double nominal_dt = 1.0 / s.nominal_rate;
        require(std::abs(mean_dt - nominal_dt) <= 0.01 * nominal_dt,
                "timestamped signal: mean interval deviates >1% from nominal rate");
    }
}

inline void validate(const UniformSignal& s) {
    require(s.rate > 0.0, "uniform signal: rate must be positive");
    require(!s.samples.empty(), "uniform signal: empty");
}

inline double duration_seconds(const UniformSignal& s) {
    return static_cast<double>(s.samples.size()) / s.rate;
}

// Tick of the i-th sample of a uniform stream.
inline Tick sample_tick(const UniformSignal& s, std::size_t i) {
    const double dt_ticks = static_cast<double>(kTicksPerSecond) / s.rate;
    return s.start_tick + static_cast<Tick>(std::llround(dt_ticks * static_cast<double>(i)));
}

inline std::vector<Tick> sample_ticks(const UniformSignal& s) {
    std::vector<Tick> out(s.samples.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = sample_tick(s, i);
    return out;
}

}  // namespace vib2ecg
