#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "vib2ecg/common.hpp"

namespace vib2ecg {

// In-place iterative radix-2 FFT. Length must be a power of two.
inline void fft_inplace(std::vector<std::complex<double>>& a, bool inverse = false) {
    const std::size_t n = a.size();
    require((n & (n - 1)) == 0 && n > 0, "fft: length must be a power of two");

    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * kPi / static_cast<double>(len);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse) {
        for (auto& x : a) x /= static_cast<double>(n);
    }
}

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// DFT of a real signal zero-padded to the next power of two.
// Zero padding refines the frequency sampling of the same finite-length
// spectrum; total energy is unchanged.
inline std::vector<std::complex<double>> real_fft_padded(const std::vector<float>& x) {
    require(!x.empty(), "fft: empty signal");
    std::vector<std::complex<double>> a(next_pow2(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i) a[i] = std::complex<double>(x[i], 0.0);
    fft_inplace(a);
    return a;
}

}  // namespace vib2ecg
