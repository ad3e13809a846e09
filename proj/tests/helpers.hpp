#pragma once

// Shared test utilities and independent oracles. Everything here is
// deliberately naive (direct summation, O(n^2) transforms) so it cannot
// share a failure mode with the library code it checks.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <vib2ecg/signal.hpp>

namespace testutil {

inline constexpr double kPi = 3.14159265358979323846;

inline vib2ecg::UniformSignal make_sine(double freq_hz, double rate, double seconds,
                                        double amplitude = 1.0, double phase = 0.0) {
    vib2ecg::UniformSignal s;
    s.rate = rate;
    const std::size_t n = static_cast<std::size_t>(seconds * rate);
    s.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / rate;
        s.samples[i] = static_cast<float>(amplitude * std::sin(2.0 * kPi * freq_hz * t + phase));
    }
    return s;
}

inline vib2ecg::UniformSignal make_constant(double value, double rate, std::size_t n) {
    vib2ecg::UniformSignal s;
    s.rate = rate;
    s.samples.assign(n, static_cast<float>(value));
    return s;
}

// Steady-state amplitude estimate: RMS of the central half times sqrt(2).
inline double sine_amplitude(const std::vector<float>& x) {
    const std::size_t n = x.size();
    const std::size_t a = n / 4, b = n - n / 4;
    double acc = 0.0;
    for (std::size_t i = a; i < b; ++i) acc += static_cast<double>(x[i]) * x[i];
    return std::sqrt(2.0 * acc / static_cast<double>(b - a));
}

inline double max_abs(const std::vector<float>& x) {
    double m = 0.0;
    for (float v : x) m = std::max(m, std::abs(static_cast<double>(v)));
    return m;
}

inline double mean_of(const std::vector<float>& x) {
    double acc = 0.0;
    for (float v : x) acc += v;
    return acc / static_cast<double>(x.size());
}

inline double stddev_of(const std::vector<float>& x) {
    const double m = mean_of(x);
    double acc = 0.0;
    for (float v : x) acc += (v - m) * (v - m);
    return std::sqrt(acc / static_cast<double>(x.size()));
}

// Direct O(n^2) DFT, the oracle for the library FFT.
inline std::vector<std::complex<double>> naive_dft(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t t = 0; t < n; ++t) {
            const double ang = -2.0 * kPi * static_cast<double>(k) * static_cast<double>(t) /
                               static_cast<double>(n);
            acc += x[t] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        out[k] = acc;
    }
    return out;
}

// Band energy below split_hz via the naive DFT (two-sided bins, mean removed).
inline double naive_low_band_fraction(const std::vector<float>& x, double rate, double split_hz) {
    std::vector<double> centered(x.begin(), x.end());
    double m = 0.0;
    for (double v : centered) m += v;
    m /= static_cast<double>(centered.size());
    for (double& v : centered) v -= m;
    const auto spec = naive_dft(centered);
    const std::size_t n = spec.size();
    double low = 0.0, total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t kf = std::min(k, n - k);
        const double freq = static_cast<double>(kf) * rate / static_cast<double>(n);
        const double p = std::norm(spec[k]);
        total += p;
        if (freq < split_hz) low += p;
    }
    return low / total;
}

// Single-sided spectral energy of x in [f_lo, f_hi) via repeated projection
// (Goertzel-style direct sums on the padded grid is overkill; the naive DFT
// is fine for the sizes used in tests).
inline double naive_band_energy(const std::vector<float>& x, double rate, double f_lo,
                                double f_hi) {
    std::vector<double> xd(x.begin(), x.end());
    const auto spec = naive_dft(xd);
    const std::size_t n = spec.size();
    double e = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t kf = std::min(k, n - k);
        const double freq = static_cast<double>(kf) * rate / static_cast<double>(n);
        if (freq >= f_lo && freq < f_hi) e += std::norm(spec[k]);
    }
    return e / static_cast<double>(n);
}

// Lag (in samples) of the peak of the cross-correlation between a and b,
// searched over [-max_lag, max_lag]. Correlates over a fixed central window
// of `a` so the estimate is not biased by window overlap or edge transients.
inline long xcorr_peak_lag(const std::vector<float>& a, const std::vector<float>& b,
                           long max_lag) {
    long best_lag = 0;
    double best = -1e300;
    const long n = static_cast<long>(std::min(a.size(), b.size()));
    const long lo = std::max(n / 4, max_lag);
    const long hi = std::min(3 * n / 4, n - max_lag);
    for (long lag = -max_lag; lag <= max_lag; ++lag) {
        double acc = 0.0;
        for (long i = lo; i < hi; ++i) {
            acc += static_cast<double>(a[i]) * b[i + lag];
        }
        if (acc > best) {
            best = acc;
            best_lag = lag;
        }
    }
    return best_lag;
}

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

}  // namespace testutil
