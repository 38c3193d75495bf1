// Complex DFT of arbitrary length via radix-2 Cooley-Tukey plus Bluestein's
// chirp transform for non-power-of-two sizes (character tables live on odd
// prime-power lengths).  Convention here: out[k] = sum_n in[n] e^{+2 pi i nk/N}.
#pragma once

#include <cmath>
#include <vector>

#include "elltwist/common.hpp"

namespace elltwist {
namespace detail {

inline void fft_pow2(std::vector<cx>& a, bool inverse) {
    const size_t n = a.size();
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? -1.0 : 1.0) * two_pi / double(len);
        const cx wl(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            cx w(1.0);
            for (size_t j = 0; j < len / 2; ++j) {
                const cx u = a[i + j];
                const cx v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse)
        for (auto& z : a) z /= double(n);
}

}  // namespace detail

// out[k] = sum_n in[n] e^{+2 pi i n k / N}
inline std::vector<cx> dft_plus(const std::vector<cx>& in) {
    const size_t n = in.size();
    if (n == 0) return {};
    if ((n & (n - 1)) == 0) {
        std::vector<cx> a = in;
        detail::fft_pow2(a, false);  // forward pass carries the + sign, unnormalized
        return a;
    }
    // Bluestein: nk = (n^2 + k^2 - (k-n)^2)/2.
    // Phases e^{i pi m^2 / N} are reduced with m^2 mod 2N computed in integers
    // so the chirp stays exact for large m.
    size_t m = 1;
    while (m < 2 * n + 1) m <<= 1;
    std::vector<cx> aa(m, cx(0.0)), bb(m, cx(0.0));
    auto chirp = [&](size_t idx) {
        const unsigned long long q = (static_cast<unsigned long long>(idx) * idx) % (2 * n);
        const double ang = pi * double(q) / double(n);
        return cx(std::cos(ang), std::sin(ang));
    };
    for (size_t k = 0; k < n; ++k) aa[k] = in[k] * chirp(k);
    bb[0] = cx(1.0);
    for (size_t k = 1; k < n; ++k) bb[k] = bb[m - k] = std::conj(chirp(k));
    detail::fft_pow2(aa, false);
    detail::fft_pow2(bb, false);
    for (size_t k = 0; k < m; ++k) aa[k] *= bb[k];
    detail::fft_pow2(aa, true);
    std::vector<cx> out(n);
    for (size_t k = 0; k < n; ++k) out[k] = aa[k] * chirp(k);
    return out;
}

}  // namespace elltwist
