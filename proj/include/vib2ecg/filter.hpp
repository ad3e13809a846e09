#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "vib2ecg/common.hpp"
#include "vib2ecg/signal.hpp"

namespace vib2ecg {

enum class FilterKind { LowPass, HighPass, BandPass };

struct FilterSpec {
    FilterKind kind = FilterKind::LowPass;
    int order = 4;                  // analog prototype order
    std::vector<double> cutoffs_hz; // one cutoff, or two (ordered) for band-pass
    double sample_rate = 0.0;       // Hz
};

// One second-order section, a0 normalized to 1.
struct Biquad {
    double b0 = 0, b1 = 0, b2 = 0;
    double a1 = 0, a2 = 0;
};

struct BiquadCascade {
    std::vector<Biquad> sections;
};

namespace detail {

inline std::vector<std::complex<double>> butterworth_prototype_poles(int order) {
    std::vector<std::complex<double>> poles(order);
    for (int k = 0; k < order; ++k) {
        const double phi = kPi * (2.0 * k + order + 1.0) / (2.0 * order);
        poles[k] = {std::cos(phi), std::sin(phi)};
    }
    return poles;
}

// Conjugate pairs adjacent: sort by |imag| descending, positive half first.
inline void sort_conjugate_pairs(std::vector<std::complex<double>>& v) {
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
        if (std::abs(a.imag()) != std::abs(b.imag()))
            return std::abs(a.imag()) > std::abs(b.imag());
        return a.imag() > b.imag();
    });
}

inline std::complex<double> bilinear_map(std::complex<double> s, double k) {
    return (1.0 + s / k) / (1.0 - s / k);
}

}  // namespace detail

inline void validate(const FilterSpec& spec) {
    if (spec.order < 1) throw InvalidSpecError("filter: order must be >= 1");
    if (spec.sample_rate <= 0.0) throw InvalidSpecError("filter: sample rate must be positive");
    const double nyquist = spec.sample_rate / 2.0;
    const std::size_t want = spec.kind == FilterKind::BandPass ? 2u : 1u;
    if (spec.cutoffs_hz.size() != want)
        throw InvalidSpecError("filter: wrong number of cutoffs for kind");
    for (double c : spec.cutoffs_hz) {
        if (!(c > 0.0) || c >= nyquist)
            throw InvalidSpecError("filter: cutoff must lie in (0, Nyquist)");
    }
    if (want == 2 && !(spec.cutoffs_hz[0] < spec.cutoffs_hz[1]))
        throw InvalidSpecError("filter: band-pass cutoffs must be ordered");
}

// Complex response of the cascade at frequency f (Hz).
inline std::complex<double> frequency_response(const BiquadCascade& f, double freq_hz,
                                               double sample_rate) {
    const double w = 2.0 * kPi * freq_hz / sample_rate;
    const std::complex<double> z1 = std::polar(1.0, -w);   // z^-1
    const std::complex<double> z2 = std::polar(1.0, -2 * w);
    std::complex<double> h(1.0, 0.0);
    for (const auto& s : f.sections) {
        h *= (s.b0 + s.b1 * z1 + s.b2 * z2) / (1.0 + s.a1 * z1 + s.a2 * z2);
    }
    return h;
}

// Largest pole magnitude of a section (roots of z^2 + a1 z + a2).
inline double max_pole_magnitude(const Biquad& s) {
    const std::complex<double> disc = std::sqrt(std::complex<double>(s.a1 * s.a1 - 4.0 * s.a2, 0.0));
    const std::complex<double> p1 = (-s.a1 + disc) / 2.0;
    const std::complex<double> p2 = (-s.a1 - disc) / 2.0;
    return std::max(std::abs(p1), std::abs(p2));
}

inline bool is_stable(const BiquadCascade& f) {
    for (const auto& s : f.sections) {
        if (max_pole_magnitude(s) >= 1.0) return false;
    }
    return true;
}

// Samples until the impulse response envelope decays below 1%.
inline std::size_t impulse_settling_samples(const BiquadCascade& f) {
    double rmax = 0.0;
    for (const auto& s : f.sections) rmax = std::max(rmax, max_pole_magnitude(s));
    if (rmax <= 0.1) return 8 * std::max<std::size_t>(1, f.sections.size());
    const double n = std::log(0.01) / std::log(rmax);
    return static_cast<std::size_t>(std::ceil(n));
}

// Butterworth realization: analog prototype -> band transform -> bilinear
// transform with prewarping -> second-order sections.
inline BiquadCascade design_filter(const FilterSpec& spec) {
    validate(spec);
    const double fs = spec.sample_rate;
    const int n = spec.order;

    auto prewarp = [&](double f_hz) { return 2.0 * fs * std::tan(kPi * f_hz / fs); };

    const auto proto = detail::butterworth_prototype_poles(n);

    std::vector<std::complex<double>> apoles, azeros;
    switch (spec.kind) {
        case FilterKind::LowPass: {
            const double wc = prewarp(spec.cutoffs_hz[0]);
            for (const auto& p : proto) apoles.push_back(p * wc);
            break;  // n zeros at infinity
        }
        case FilterKind::HighPass: {
            const double wc = prewarp(spec.cutoffs_hz[0]);
            for (const auto& p : proto) apoles.push_back(wc / p);
            azeros.assign(n, {0.0, 0.0});
            break;
        }
        case FilterKind::BandPass: {
            const double w1 = prewarp(spec.cutoffs_hz[0]);
            const double w2 = prewarp(spec.cutoffs_hz[1]);
            const double bw = w2 - w1;
            const double w0sq = w1 * w2;
            for (const auto& p : proto) {
                const std::complex<double> pb = p * bw;
                const std::complex<double> disc = std::sqrt(pb * pb - 4.0 * w0sq);
                apoles.push_back((pb + disc) / 2.0);
                apoles.push_back((pb - disc) / 2.0);
            }
            azeros.assign(n, {0.0, 0.0});
            break;
        }
    }

    // bilinear transform; zeros short of poles map to z = -1
    const double k = 2.0 * fs;
    std::vector<std::complex<double>> zpoles, zzeros;
    for (const auto& p : apoles) zpoles.push_back(detail::bilinear_map(p, k));
    for (const auto& z : azeros) zzeros.push_back(detail::bilinear_map(z, k));
    while (zzeros.size() < zpoles.size()) zzeros.emplace_back(-1.0, 0.0);

    detail::sort_conjugate_pairs(zpoles);
    if (spec.kind == FilterKind::BandPass) {
        // zeros are all real (+1 / -1); give each section one of each
        std::sort(zzeros.begin(), zzeros.end(),
                  [](const auto& a, const auto& b) { return a.real() > b.real(); });
        std::vector<std::complex<double>> interleaved;
        const std::size_t half = zzeros.size() / 2;
        for (std::size_t i = 0; i < half; ++i) {
            interleaved.push_back(zzeros[i]);
            interleaved.push_back(zzeros[half + i]);
        }
        zzeros = interleaved;
    } else {
        detail::sort_conjugate_pairs(zzeros);
    }

    BiquadCascade cascade;
    for (std::size_t i = 0; i + 1 < zpoles.size(); i += 2) {
        Biquad s;
        s.a1 = (-(zpoles[i] + zpoles[i + 1])).real();
        s.a2 = (zpoles[i] * zpoles[i + 1]).real();
        s.b0 = 1.0;
        s.b1 = (-(zzeros[i] + zzeros[i + 1])).real();
        s.b2 = (zzeros[i] * zzeros[i + 1]).real();
        cascade.sections.push_back(s);
    }
    if (zpoles.size() % 2 != 0) {  // odd order: one first-order tail section
        Biquad s;
        s.a1 = -zpoles.back().real();
        s.b0 = 1.0;
        s.b1 = -zzeros.back().real();
        cascade.sections.push_back(s);
    }

    // normalize passband gain to one at a reference frequency
    double f_ref = 0.0;
    switch (spec.kind) {
        case FilterKind::LowPass: f_ref = 0.0; break;
        case FilterKind::HighPass: f_ref = fs / 2.0; break;
        case FilterKind::BandPass:
            f_ref = std::sqrt(spec.cutoffs_hz[0] * spec.cutoffs_hz[1]);
            break;
    }
    const std::complex<double> h_ref = frequency_response(cascade, f_ref, fs);
    const double scale = std::abs(h_ref.imag()) < 1e-9 * std::abs(h_ref.real())
                             ? h_ref.real()
                             : std::abs(h_ref);
    require(std::abs(scale) > 0.0, "filter: degenerate reference gain");
    cascade.sections.front().b0 /= scale;
    cascade.sections.front().b1 /= scale;
    cascade.sections.front().b2 /= scale;

    require(is_stable(cascade), "filter: designed cascade is unstable");
    return cascade;
}

namespace detail {

// Single pass through the cascade, transposed direct form II.
inline void filter_forward_inplace(std::vector<double>& x, const BiquadCascade& f) {
    for (const auto& s : f.sections) {
        double s1 = 0.0, s2 = 0.0;
        for (double& v : x) {
            const double y = s.b0 * v + s1;
            s1 = s.b1 * v - s.a1 * y + s2;
            s2 = s.b2 * v - s.a2 * y;
            v = y;
        }
    }
}

}  // namespace detail

// Forward-backward application: no phase shift, squared magnitude response.
// Edges are extended by odd reflection over three settling lengths so the
// filter state is charged before the true samples arrive.
inline UniformSignal filter_zero_phase(const UniformSignal& x, const BiquadCascade& f) {
    validate(x);
    const std::size_t n = x.samples.size();
    const std::size_t order2 = 2 * f.sections.size();  // poles in cascade
    if (n <= 3 * order2) {
        throw SignalTooShortError("filter_zero_phase: signal too short for edge padding");
    }

    std::size_t pad = 3 * impulse_settling_samples(f);
    pad = std::min(pad, n - 1);
    pad = std::max<std::size_t>(pad, 3 * order2);

    std::vector<double> ext;
    ext.reserve(n + 2 * pad);
    const double first = x.samples.front();
    const double last = x.samples.back();
    for (std::size_t i = pad; i >= 1; --i) ext.push_back(2.0 * first - x.samples[i]);
    for (float v : x.samples) ext.push_back(v);
    for (std::size_t i = 2; i <= pad + 1; ++i) ext.push_back(2.0 * last - x.samples[n - i]);

    detail::filter_forward_inplace(ext, f);
    std::reverse(ext.begin(), ext.end());
    detail::filter_forward_inplace(ext, f);
    std::reverse(ext.begin(), ext.end());

    UniformSignal out;
    out.rate = x.rate;
    out.start_tick = x.start_tick;
    out.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.samples[i] = static_cast<float>(ext[pad + i]);
    return out;
}

}  // namespace vib2ecg
