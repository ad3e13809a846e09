#include <catch_amalgamated.hpp>

#include <complex>
#include <random>
#include <vector>

#include <vib2ecg/fft.hpp>
#include <vib2ecg/filter.hpp>

#include "helpers.hpp"

using namespace vib2ecg;
using Catch::Approx;

namespace {

// Independent transfer-function evaluation on the unit circle (the oracle;
// does not reuse the library's frequency_response).
std::complex<double> eval_response(const BiquadCascade& c, double f_hz, double fs) {
    const double w = 2.0 * testutil::kPi * f_hz / fs;
    const std::complex<double> z = std::polar(1.0, w);
    std::complex<double> h(1.0, 0.0);
    for (const auto& s : c.sections) {
        const std::complex<double> num = s.b0 * z * z + s.b1 * z + s.b2;
        const std::complex<double> den = z * z + s.a1 * z + s.a2;
        h *= num / den;
    }
    return h;
}

double to_db(double mag) { return 20.0 * std::log10(mag); }

}  // namespace

TEST_CASE("high-pass order 4 has two sections and -3 dB at cutoff") {
    const auto c = design_filter({FilterKind::HighPass, 4, {2.0}, 500.0});
    REQUIRE(c.sections.size() == 2);
    const double db = to_db(std::abs(eval_response(c, 2.0, 500.0)));
    REQUIRE(db == Approx(-3.0103).margin(0.5));
}

TEST_CASE("low-pass has unit DC gain") {
    const auto c = design_filter({FilterKind::LowPass, 4, {40.0}, 1000.0});
    REQUIRE(std::abs(eval_response(c, 0.0, 1000.0)) == Approx(1.0).margin(1e-12));
}

TEST_CASE("band-pass is -3 dB at both edges") {
    const auto c = design_filter({FilterKind::BandPass, 4, {2.0, 20.0}, 500.0});
    REQUIRE(c.sections.size() == 4);
    REQUIRE(to_db(std::abs(eval_response(c, 2.0, 500.0))) == Approx(-3.0103).margin(0.5));
    REQUIRE(to_db(std::abs(eval_response(c, 20.0, 500.0))) == Approx(-3.0103).margin(0.5));
}

TEST_CASE("cutoff at or above Nyquist is rejected") {
    REQUIRE_THROWS_AS(design_filter({FilterKind::HighPass, 4, {600.0}, 1000.0}),
                      InvalidSpecError);
    REQUIRE_THROWS_AS(design_filter({FilterKind::LowPass, 4, {500.0}, 1000.0}),
                      InvalidSpecError);
    REQUIRE_THROWS_AS(design_filter({FilterKind::BandPass, 4, {20.0, 2.0}, 500.0}),
                      InvalidSpecError);
}

TEST_CASE("designed cascades are stable: all poles strictly inside unit circle") {
    const std::vector<FilterSpec> specs = {
        {FilterKind::HighPass, 4, {0.5}, 1000.0},  {FilterKind::LowPass, 4, {40.0}, 1000.0},
        {FilterKind::BandPass, 4, {2.0, 20.0}, 500.0}, {FilterKind::HighPass, 4, {20.0}, 500.0},
        {FilterKind::BandPass, 4, {5.0, 15.0}, 1000.0}, {FilterKind::HighPass, 2, {1.0}, 250.0},
        {FilterKind::LowPass, 5, {30.0}, 500.0},
    };
    for (const auto& spec : specs) {
        const auto c = design_filter(spec);
        for (const auto& s : c.sections) {
            // direct quadratic roots, independent of the library helper
            const std::complex<double> disc =
                std::sqrt(std::complex<double>(s.a1 * s.a1 - 4.0 * s.a2, 0.0));
            REQUIRE(std::abs((-s.a1 + disc) / 2.0) < 1.0);
            REQUIRE(std::abs((-s.a1 - disc) / 2.0) < 1.0);
        }
    }
}

TEST_CASE("zero-phase filtering rejects DC through a high-pass") {
    const auto c = design_filter({FilterKind::HighPass, 4, {2.0}, 500.0});
    const auto x = testutil::make_constant(3.5, 500.0, 4000);
    const auto y = filter_zero_phase(x, c);
    REQUIRE(y.samples.size() == x.samples.size());
    REQUIRE(testutil::max_abs(y.samples) < 1e-6 * 3.5);
}

TEST_CASE("zero-phase low-pass attenuation matches the doubled analytic response") {
    const auto c = design_filter({FilterKind::LowPass, 4, {40.0}, 1000.0});
    const auto x = testutil::make_sine(50.0, 1000.0, 20.0);
    const auto y = filter_zero_phase(x, c);

    const double attenuation_db = -to_db(testutil::sine_amplitude(y.samples));
    // analytic single-pass Butterworth magnitude at 50/40, doubled for the
    // forward-backward pass
    const double expected_db = 2.0 * 10.0 * std::log10(1.0 + std::pow(50.0 / 40.0, 8.0));
    REQUIRE(attenuation_db >= 7.0);
    REQUIRE(attenuation_db == Approx(expected_db).margin(1.0));
}

TEST_CASE("zero-phase filtering adds no lag") {
    const auto c = design_filter({FilterKind::BandPass, 4, {2.0, 20.0}, 500.0});
    const auto x = testutil::make_sine(1.0, 500.0, 10.0);
    const auto y = filter_zero_phase(x, c);
    REQUIRE(testutil::xcorr_peak_lag(x.samples, y.samples, 100) == 0);
}

TEST_CASE("zero-phase property holds for random band-limited signals") {
    auto gen = testutil::rng(7);
    std::uniform_real_distribution<double> freq(0.5, 30.0);
    std::uniform_real_distribution<double> amp(0.2, 2.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * testutil::kPi);

    const std::vector<FilterSpec> specs = {
        {FilterKind::LowPass, 4, {40.0}, 500.0},
        {FilterKind::HighPass, 4, {2.0}, 500.0},
        {FilterKind::BandPass, 4, {2.0, 20.0}, 500.0},
    };
    for (int trial = 0; trial < 6; ++trial) {
        UniformSignal x;
        x.rate = 500.0;
        x.samples.assign(5000, 0.0f);
        for (int k = 0; k < 5; ++k) {
            const double f = freq(gen), a = amp(gen), p = phase(gen);
            for (std::size_t i = 0; i < x.samples.size(); ++i) {
                const double t = static_cast<double>(i) / x.rate;
                x.samples[i] += static_cast<float>(a * std::sin(2 * testutil::kPi * f * t + p));
            }
        }
        for (const auto& spec : specs) {
            const auto y = filter_zero_phase(x, design_filter(spec));
            REQUIRE(y.samples.size() == x.samples.size());
            REQUIRE(testutil::xcorr_peak_lag(x.samples, y.samples, 50) == 0);
        }
    }
}

TEST_CASE("too-short input is rejected") {
    const auto c = design_filter({FilterKind::HighPass, 4, {2.0}, 500.0});
    UniformSignal x;
    x.rate = 500.0;
    x.samples.assign(10, 1.0f);
    REQUIRE_THROWS_AS(filter_zero_phase(x, c), SignalTooShortError);
}

TEST_CASE("library FFT matches the direct DFT") {
    auto gen = testutil::rng(11);
    std::normal_distribution<double> dist(0.0, 1.0);
    for (std::size_t n : {8u, 64u, 256u}) {
        std::vector<double> xd(n);
        std::vector<std::complex<double>> a(n);
        for (std::size_t i = 0; i < n; ++i) {
            xd[i] = dist(gen);
            a[i] = xd[i];
        }
        fft_inplace(a);
        const auto ref = testutil::naive_dft(xd);
        for (std::size_t k = 0; k < n; ++k) {
            REQUIRE(std::abs(a[k] - ref[k]) < 1e-9 * static_cast<double>(n));
        }
    }
}
