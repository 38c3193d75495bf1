// Integral Weierstrass models, point counts over F_q, traces of Frobenius
// and reduction types.  The conductor is user-asserted (the model is trusted
// to be minimal); the artifact only validates good/bad against the
// discriminant.
//
// Point counting is the direct character sum: for odd q the substitution
// Y = 2y + a1 x + a3 turns the model into Y^2 = g(x) with
//   g(x) = 4x^3 + b2 x^2 + 2 b4 x + b6,
// so #E(F_q) = q + 1 + sum_x chi_2(g(x)) with chi_2 the quadratic character.
#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "elltwist/arith.hpp"
#include "elltwist/common.hpp"

namespace elltwist {

enum class ReductionType { good, split_mult, nonsplit_mult, additive };

inline const char* to_string(ReductionType t) {
    switch (t) {
        case ReductionType::good: return "good";
        case ReductionType::split_mult: return "split_mult";
        case ReductionType::nonsplit_mult: return "nonsplit_mult";
        case ReductionType::additive: return "additive";
    }
    return "?";
}

struct EllipticCurve {
    long long a1 = 0, a2 = 0, a3 = 0, a4 = 0, a6 = 0;
    long long conductor = 0;  // user supplied
    long long b2 = 0, b4 = 0, b6 = 0, b8 = 0, c4 = 0, discriminant = 0;

    EllipticCurve(long long a1_, long long a2_, long long a3_, long long a4_, long long a6_,
                  long long conductor_)
        : a1(a1_), a2(a2_), a3(a3_), a4(a4_), a6(a6_), conductor(conductor_) {
        b2 = a1 * a1 + 4 * a2;
        b4 = 2 * a4 + a1 * a3;
        b6 = a3 * a3 + 4 * a6;
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        const __int128 disc = -(__int128)b2 * b2 * b8 - 8 * (__int128)b4 * b4 * b4 -
                              27 * (__int128)b6 * b6 + 9 * (__int128)b2 * b4 * b6;
        if (disc == 0) throw validation_error("singular Weierstrass model (discriminant 0)");
        if (disc > (__int128)9e18 || disc < -(__int128)9e18)
            throw validation_error("discriminant overflows int64; model too large for desk scale");
        discriminant = static_cast<long long>(disc);
        c4 = b2 * b2 - 24 * b4;
        if (conductor <= 0) throw validation_error("conductor must be a positive integer");
    }

    bool good_reduction_at(long long q) const { return discriminant % q != 0; }
};

namespace detail {

// chi_2 table over F_q (odd q): sq[v] = +1 if v a nonzero square, -1 non-square, 0 at 0
inline std::vector<int8_t> quadratic_character_table(long long q) {
    std::vector<int8_t> chi(static_cast<size_t>(q), -1);
    chi[0] = 0;
    for (long long x = 1; x <= (q - 1) / 2; ++x) chi[static_cast<size_t>(mul_mod(x, x, q))] = 1;
    return chi;
}

inline long long count_points_f2(const EllipticCurve& E) {
    long long count = 1;  // point at infinity
    for (long long x = 0; x < 2; ++x)
        for (long long y = 0; y < 2; ++y) {
            const long long v = y * y + E.a1 * x * y + E.a3 * y - x * x * x - E.a2 * x * x -
                                E.a4 * x - E.a6;
            if (((v % 2) + 2) % 2 == 0) ++count;
        }
    return count;
}

}  // namespace detail

inline long long trace_of_frobenius(const EllipticCurve& E, long long q) {
    if (!is_prime(q)) throw validation_error("trace_of_frobenius: q must be prime");
    if (!E.good_reduction_at(q))
        throw bad_reduction_error("bad reduction at q = " + std::to_string(q) +
                                  "; use reduction_type for the local factor");
    long long aq;
    if (q == 2) {
        aq = 2 + 1 - detail::count_points_f2(E);
    } else {
        const auto chi = detail::quadratic_character_table(q);
        const long long B2 = ((E.b2 % q) + q) % q;
        const long long B4 = ((2 * E.b4 % q) + q) % q;
        const long long B6 = ((E.b6 % q) + q) % q;
        long long s = 0;
        for (long long x = 0; x < q; ++x) {
            // g(x) = 4x^3 + b2 x^2 + 2 b4 x + b6 via Horner mod q
            long long g = mul_mod(mul_mod(mul_mod(4 * x % q + B2, x, q) + B4, x, q) + B6, 1, q);
            s += chi[static_cast<size_t>(g % q)];
        }
        aq = -s;
    }
    if ((double)aq * aq > 4.0 * (double)q + 1e-9)
        throw computation_error("Hasse bound violated at q = " + std::to_string(q) +
                                " (corrupted arithmetic)");
    return aq;
}

namespace detail {

// double root of g(x) = 4x^3 + b2 x^2 + 2 b4 x + b6 over F_q, odd q, via
// gcd(g, g'); multiplicative reduction guarantees a unique node
inline long long node_x_odd(const EllipticCurve& E, long long q) {
    auto norm = [&](long long v) { return ((v % q) + q) % q; };
    // polynomial arithmetic mod q on low-degree vectors (index = degree)
    std::vector<long long> g = {norm(E.b6), norm(2 * E.b4), norm(E.b2), 4 % q};
    std::vector<long long> dg = {norm(2 * E.b4), norm(2 * E.b2), 12 % q};
    auto deg = [](const std::vector<long long>& f) {
        int d = static_cast<int>(f.size()) - 1;
        while (d > 0 && f[static_cast<size_t>(d)] == 0) --d;
        return d;
    };
    auto rem = [&](std::vector<long long> a, const std::vector<long long>& b) {
        const int db = deg(b);
        const long long inv = inv_mod(b[static_cast<size_t>(db)], q);
        for (int da = deg(a); da >= db && !(da == 0 && a[0] == 0); da = deg(a)) {
            const long long f = mul_mod(a[static_cast<size_t>(da)], inv, q);
            if (f == 0) break;
            for (int i = 0; i <= db; ++i) {
                auto& ai = a[static_cast<size_t>(da - db + i)];
                ai = norm(ai - mul_mod(f, b[static_cast<size_t>(i)], q));
            }
        }
        a.resize(static_cast<size_t>(std::max(deg(a), 0)) + 1);
        return a;
    };
    std::vector<long long> A = g, B = dg;
    while (!(deg(B) == 0 && B[0] == 0)) {
        auto R = rem(A, B);
        A = B;
        B = R;
        if (deg(B) == 0 && B[0] != 0) {
            // gcd is a unit: no double root; cannot happen for a node
            throw computation_error("node test: no double root found (inconsistent reduction data)");
        }
    }
    if (deg(A) != 1) throw computation_error("node test: gcd degree != 1");
    return mul_mod(norm(-A[0]), inv_mod(A[1], q), q);
}

}  // namespace detail

inline ReductionType reduction_type(const EllipticCurve& E, long long q) {
    if (!is_prime(q)) throw validation_error("reduction_type: q must be prime");
    if (E.good_reduction_at(q)) return ReductionType::good;
    if (E.c4 % q == 0) return ReductionType::additive;
    // node: split iff the tangent quadratic factors over F_q
    if (q == 2) {
        // find the singular point; split iff x0 + a2 is even (tangents v(v+u))
        for (long long x = 0; x < 2; ++x)
            for (long long y = 0; y < 2; ++y) {
                const auto n = [&](long long v) { return ((v % 2) + 2) % 2; };
                const long long F = n(y * y + E.a1 * x * y + E.a3 * y - x * x * x - E.a2 * x * x -
                                      E.a4 * x - E.a6);
                const long long Fx = n(E.a1 * y - 3 * x * x - 2 * E.a2 * x - E.a4);
                const long long Fy = n(2 * y + E.a1 * x + E.a3);
                if (F == 0 && Fx == 0 && Fy == 0)
                    return (x + E.a2) % 2 == 0 ? ReductionType::split_mult
                                               : ReductionType::nonsplit_mult;
            }
        throw computation_error("node test: no singular point over F_2");
    }
    const long long r = detail::node_x_odd(E, q);
    const long long c = ((12 * r + E.b2) % q + q) % q;
    if (c == 0) throw computation_error("node test: degenerate tangent (expected a node)");
    const bool square = pow_mod(c, (q - 1) / 2, q) == 1;
    return square ? ReductionType::split_mult : ReductionType::nonsplit_mult;
}

// a_q for any reduction type: good -> trace, split -> +1, nonsplit -> -1, additive -> 0
inline long long local_trace(const EllipticCurve& E, long long q) {
    switch (reduction_type(E, q)) {
        case ReductionType::good: return trace_of_frobenius(E, q);
        case ReductionType::split_mult: return 1;
        case ReductionType::nonsplit_mult: return -1;
        case ReductionType::additive: return 0;
    }
    return 0;
}

}  // namespace elltwist
