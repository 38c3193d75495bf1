// Ramification filtration of cyclotomic towers K_n / K_m over Q_p,
// K_n = Q_p(mu_{p^n}), in the lower numbering, together with the eta
// function that converts to upper numbering:
//
//   eta(i) = (1/g_0) (g_1 + ... + g_i),   g_i = |G_i(K_n/K_m)|.
//
// For m >= 1 the filtration is the closed form
//   g_i = p^{n-m}          for 0 <= i <= p^m - 1
//   g_i = p^{n-s}          for p^{s-1} <= i <= p^s - 1,  m < s <= n
//   g_i = 1                for i >= p^n (already reached at s = n)
// and for the absolute tower m = 0 (K_0 = Q_p) the tame part contributes
// g_0 = phi(p^n) with the same p-part above it.  Everything here is exact
// integer/rational arithmetic: the Lemma-1-style bound
//   eta(p^s - 1) >= p^{m-1} (1 + (s-m)(p-1)) - 1
// is an exact comparison.
#pragma once

#include <vector>

#include "elltwist/arith.hpp"
#include "elltwist/common.hpp"

namespace elltwist {

struct CyclotomicTower {
    long long p = 3;
    int m = 1;  // base level, K_m (m = 0 means Q_p)
    int n = 1;  // top level

    void validate() const {
        if (p == 2) throw unsupported_modulus_error("p = 2 cyclotomic towers unsupported");
        if (!is_prime(p)) throw validation_error("tower: p must be an odd prime");
        if (m < 0 || n < m) throw validation_error("tower: need 0 <= m <= n");
    }

    long long group_order() const {
        return m == 0 ? phi_prime_power(p, n) : ipow(p, n - m);
    }
};

// piecewise-constant group orders, stored as break segments
// [start_i, end_i] -> g; i beyond the last segment has g = 1
struct RamificationFiltration {
    struct Segment {
        long long first;  // first index i of the segment
        long long last;   // last index i
        long long order;  // g_i on the segment
    };
    std::vector<Segment> segments;

    long long g(long long i) const {
        for (const auto& s : segments)
            if (i >= s.first && i <= s.last) return s.order;
        return 1;
    }

    long long g0() const { return segments.empty() ? 1 : segments.front().order; }

    // exact sum g_1 + ... + g_i (i >= 0)
    long long partial_sum(long long i) const {
        long long total = 0;
        for (const auto& s : segments) {
            const long long lo = std::max(s.first, 1LL);
            const long long hi = std::min(s.last, i);
            if (hi >= lo) total += (hi - lo + 1) * s.order;
        }
        if (i > 0) {
            const long long tail_lo = std::max(segments.empty() ? 1 : segments.back().last + 1, 1LL);
            if (i >= tail_lo) total += i - tail_lo + 1;  // g = 1 beyond the breaks
        }
        return total;
    }
};

inline RamificationFiltration filtration(const CyclotomicTower& t) {
    t.validate();
    RamificationFiltration f;
    if (t.n == t.m || (t.m == 0 && t.n == 0)) {
        f.segments.push_back({0, 0, 1});
        return f;
    }
    if (t.m >= 1) {
        // g_i = p^{n-m} up to i = p^m - 1, then steps down at p-power breaks
        f.segments.push_back({0, ipow(t.p, t.m) - 1, ipow(t.p, t.n - t.m)});
        for (int s = t.m + 1; s <= t.n; ++s)
            f.segments.push_back({ipow(t.p, s - 1), ipow(t.p, s) - 1, ipow(t.p, t.n - s)});
    } else {
        // absolute tower: tame quotient of order p-1 sits in G_0 only
        f.segments.push_back({0, 0, phi_prime_power(t.p, t.n)});
        for (int s = 1; s <= t.n; ++s)
            f.segments.push_back({s == 1 ? 1 : ipow(t.p, s - 1), ipow(t.p, s) - 1, ipow(t.p, t.n - s)});
    }
    return f;
}

// eta_{K_n/K_m}(i) = (1/g_0)(g_1 + ... + g_i), exact
inline Rational eta(const CyclotomicTower& t, long long i) {
    if (i < 0) throw validation_error("eta: i >= 0 required");
    const RamificationFiltration f = filtration(t);
    return Rational(f.partial_sum(i), f.g0());
}

// the proof's lower bound eta(p^s - 1) >= p^{m-1}(1 + (s-m)(p-1)) - 1
inline long long eta_lower_bound(long long p, int m, int s) {
    if (m < 1 || s < m) throw validation_error("eta_lower_bound: need s >= m >= 1");
    return ipow(p, m - 1) * (1 + (long long)(s - m) * (p - 1)) - 1;
}

// valuation of the different: sum_{i >= 0} (g_i - 1); for K_n/Q_p this equals
// the classical discriminant exponent n phi(p^n) - p^{n-1}
inline long long different_valuation(const CyclotomicTower& t) {
    const RamificationFiltration f = filtration(t);
    long long total = 0;
    for (const auto& s : f.segments) total += (s.last - s.first + 1) * (s.order - 1);
    return total;
}

inline long long cyclotomic_discriminant_exponent(long long p, int n) {
    if (n == 0) return 0;
    return (long long)n * phi_prime_power(p, n) - ipow(p, n - 1);
}

}  // namespace elltwist
