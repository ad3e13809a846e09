#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "vib2ecg/common.hpp"
#include "vib2ecg/fft.hpp"
#include "vib2ecg/filter.hpp"
#include "vib2ecg/signal.hpp"

namespace vib2ecg {

inline constexpr double kScgLowHz = 2.0;
inline constexpr double kBandSplitHz = 20.0;
inline constexpr double kEcgHighpassHz = 0.5;
inline constexpr double kEcgLowpassHz = 40.0;
inline constexpr int kFilterOrder = 4;

// Low band: myocardial-motion component. High band: heart-sound-like component.
struct BandDecomposition {
    UniformSignal scg;
    UniformSignal pcgl;
    double split_hz = kBandSplitHz;
};

// ECG cleanup: baseline drift removed by a 0.5 Hz high-pass, power-line
// interference and harmonics by a 40 Hz low-pass, both zero-phase.
inline UniformSignal preprocess_ecg(const UniformSignal& x) {
    validate(x);
    require(x.rate == 1000.0, "preprocess_ecg: expects a 1000 Hz stream");
    const auto hp = design_filter({FilterKind::HighPass, kFilterOrder, {kEcgHighpassHz}, x.rate});
    const auto lp = design_filter({FilterKind::LowPass, kFilterOrder, {kEcgLowpassHz}, x.rate});
    return filter_zero_phase(filter_zero_phase(x, hp), lp);
}

inline BandDecomposition decompose_vibration(const UniformSignal& x) {
    validate(x);
    require(x.rate >= 100.0, "decompose_vibration: rate must be >= 100 Hz");
    const auto bp =
        design_filter({FilterKind::BandPass, kFilterOrder, {kScgLowHz, kBandSplitHz}, x.rate});
    const auto hp = design_filter({FilterKind::HighPass, kFilterOrder, {kBandSplitHz}, x.rate});
    BandDecomposition out;
    out.scg = filter_zero_phase(x, bp);
    out.pcgl = filter_zero_phase(x, hp);
    out.split_hz = kBandSplitHz;
    return out;
}

// Per-segment z-score. Constant input maps to all zeros via the epsilon guard.
inline UniformSignal normalize(const UniformSignal& x, double eps = 1e-8) {
    validate(x);
    const std::size_t n = x.samples.size();
    double mean = 0.0;
    for (float v : x.samples) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (float v : x.samples) {
        const double d = v - mean;
        var += d * d;
    }
    var /= static_cast<double>(n);
    const double denom = std::sqrt(var) + eps;

    UniformSignal out = x;
    for (float& v : out.samples) v = static_cast<float>((v - mean) / denom);
    return out;
}

struct BandEnergy {
    double low = 0.0;   // energy strictly below the split frequency
    double high = 0.0;  // energy at and above the split frequency
};

// Spectral energy split of the mean-removed signal (zero-padded DFT).
inline BandEnergy band_energy_split(const UniformSignal& x, double split_hz) {
    validate(x);
    require(split_hz > 0.0 && split_hz < x.rate / 2.0, "band split must lie in (0, Nyquist)");

    std::vector<float> centered = x.samples;
    double mean = 0.0;
    for (float v : centered) mean += v;
    mean /= static_cast<double>(centered.size());
    for (float& v : centered) v = static_cast<float>(v - mean);

    const auto spectrum = real_fft_padded(centered);
    const std::size_t m = spectrum.size();
    BandEnergy e;
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t kf = std::min(k, m - k);
        const double freq = static_cast<double>(kf) * x.rate / static_cast<double>(m);
        const double p = std::norm(spectrum[k]);
        if (freq < split_hz) {
            e.low += p;
        } else {
            e.high += p;
        }
    }
    // Parseval: sum |X_k|^2 / m equals time-domain energy
    e.low /= static_cast<double>(m);
    e.high /= static_cast<double>(m);
    return e;
}

inline double band_energy_fraction(const UniformSignal& x, double split_hz) {
    const BandEnergy e = band_energy_split(x, split_hz);
    const double total = e.low + e.high;
    require(total > 0.0, "band_energy_fraction: zero-energy signal");
    return e.low / total;
}

// Linear interpolation of a timestamped stream onto the ECG tick grid.
// Target ticks outside the stream span clamp to the nearest sample.
inline UniformSignal align_to_ecg(const TimestampedSignal& vib, const std::vector<Tick>& ecg_ticks) {
    validate(vib);
    require(!ecg_ticks.empty(), "align_to_ecg: empty target grid");
    for (std::size_t i = 1; i < ecg_ticks.size(); ++i) {
        if (ecg_ticks[i] <= ecg_ticks[i - 1])
            throw DataCorruptionError("align_to_ecg: target ticks not strictly increasing");
    }

    UniformSignal out;
    out.start_tick = ecg_ticks.front();
    out.rate = ecg_ticks.size() > 1
                   ? static_cast<double>(ecg_ticks.size() - 1) /
                         ticks_to_seconds(ecg_ticks.back() - ecg_ticks.front())
                   : vib.nominal_rate;
    out.samples.resize(ecg_ticks.size());

    std::size_t j = 0;  // both grids are sorted: single sweep
    const std::size_t n = vib.timestamps.size();
    for (std::size_t i = 0; i < ecg_ticks.size(); ++i) {
        const Tick t = ecg_ticks[i];
        if (t <= vib.timestamps.front()) {
            out.samples[i] = vib.samples.front();
            continue;
        }
        if (t >= vib.timestamps.back()) {
            out.samples[i] = vib.samples.back();
            continue;
        }
        while (j + 1 < n && vib.timestamps[j + 1] < t) ++j;
        const Tick t0 = vib.timestamps[j];
        const Tick t1 = vib.timestamps[j + 1];
        const double u = static_cast<double>(t - t0) / static_cast<double>(t1 - t0);
        out.samples[i] =
            static_cast<float>((1.0 - u) * vib.samples[j] + u * vib.samples[j + 1]);
    }
    return out;
}

}  // namespace vib2ecg
