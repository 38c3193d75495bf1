// Elementary integer arithmetic: primality, factorization, phi, mu, modular
// powers and discrete helpers shared by the character and L-series modules.
#pragma once

#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include "elltwist/common.hpp"

namespace elltwist {

inline long long mul_mod(long long a, long long b, long long m) {
    return static_cast<long long>((__int128)a * b % m);
}

inline long long pow_mod(long long base, long long exp, long long m) {
    long long r = 1 % m;
    base %= m;
    if (base < 0) base += m;
    while (exp > 0) {
        if (exp & 1) r = mul_mod(r, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return r;
}

// x with a x == 1 mod m, gcd(a, m) = 1
inline long long inv_mod(long long a, long long m) {
    long long t = 0, new_t = 1, r = m, new_r = ((a % m) + m) % m;
    while (new_r != 0) {
        const long long q = r / new_r;
        t -= q * new_t;
        std::swap(t, new_t);
        r -= q * new_r;
        std::swap(r, new_r);
    }
    if (r != 1) throw validation_error("inv_mod: arguments not coprime");
    return t < 0 ? t + m : t;
}

inline bool is_prime(long long n) {
    if (n < 2) return false;
    for (long long d : {2LL, 3LL, 5LL, 7LL, 11LL, 13LL}) {
        if (n == d) return true;
        if (n % d == 0) return false;
    }
    for (long long d = 17; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

inline std::map<long long, int> factorize(long long n) {
    std::map<long long, int> f;
    for (long long d = 2; d * d <= n; d += (d == 2 ? 1 : 2)) {
        while (n % d == 0) {
            ++f[d];
            n /= d;
        }
    }
    if (n > 1) ++f[n];
    return f;
}

inline long long euler_phi(long long n) {
    long long r = n;
    for (auto [p, e] : factorize(n)) r = r / p * (p - 1);
    return r;
}

inline int mobius(long long n) {
    int m = 1;
    for (auto [p, e] : factorize(n)) {
        if (e > 1) return 0;
        m = -m;
    }
    return m;
}

// phi(p^a) without factorization
inline long long phi_prime_power(long long p, int a) {
    if (a == 0) return 1;
    long long r = p - 1;
    for (int i = 1; i < a; ++i) r *= p;
    return r;
}

inline long long ipow(long long b, int e) {
    long long r = 1;
    while (e-- > 0) {
        if (r > (long long)4e18 / (b > 0 ? b : 1)) throw validation_error("ipow overflow");
        r *= b;
    }
    return r;
}

inline std::vector<long long> primes_up_to(long long n) {
    std::vector<bool> comp(static_cast<size_t>(n + 1), false);
    std::vector<long long> ps;
    for (long long i = 2; i <= n; ++i) {
        if (!comp[static_cast<size_t>(i)]) {
            ps.push_back(i);
            for (long long j = i * i; j <= n; j += i) comp[static_cast<size_t>(j)] = true;
        }
    }
    return ps;
}

// k-fold divisor function values d_k(1..n); d_1 = 1, d_k = d_{k-1} * 1
inline std::vector<long long> divisor_function_table(int k, long long n) {
    std::vector<long long> d(static_cast<size_t>(n + 1), 1);
    d[0] = 0;
    for (int round = 2; round <= k; ++round) {
        std::vector<long long> next(static_cast<size_t>(n + 1), 0);
        for (long long a = 1; a <= n; ++a)
            for (long long m = a; m <= n; m += a) next[static_cast<size_t>(m)] += d[static_cast<size_t>(m / a)];
        d = std::move(next);
    }
    return d;
}

}  // namespace elltwist
