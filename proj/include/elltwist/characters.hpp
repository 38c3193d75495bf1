// Dirichlet characters modulo odd prime powers and their CRT products.
//
// A local character mod p^a is indexed against a fixed generator g of the
// cyclic group (Z/p^a)*: chi_j(g^k) = e^{2 pi i jk / phi(p^a)}.  Values are
// kept as exact fractions of a turn (num/den of e^{2 pi i num/den}) and only
// materialized to complex at summation boundaries, so orthogonality tests
// stay exact.  p = 2 is rejected throughout: (Z/2^a Z)* is not cyclic.
//
// gauss_sum / all_gauss_sums realize the discrete Fourier transform
//   tau_h(chi) = sum_{r mod p^a} chi(r) e^{2 pi i h r / p^a},
// the batch form running through an O(M log M) FFT.
#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "elltwist/arith.hpp"
#include "elltwist/common.hpp"
#include "elltwist/fft.hpp"

namespace elltwist {

// e^{2 pi i num/den}, or zero.  num is kept reduced mod den with den > 0.
struct UnitValue {
    long long num = 0;
    long long den = 1;
    bool is_zero = false;

    static UnitValue zero() { return {0, 1, true}; }
    static UnitValue one() { return {0, 1, false}; }
    static UnitValue turn(long long num, long long den) {
        UnitValue u{num % den, den, false};
        if (u.num < 0) u.num += den;
        const long long g = std::gcd(u.num, u.den);
        u.num /= g;
        u.den /= g;
        return u;
    }

    UnitValue conj() const { return is_zero ? zero() : turn(-num, den); }
    UnitValue operator*(const UnitValue& o) const {
        if (is_zero || o.is_zero) return zero();
        const long long l = std::lcm(den, o.den);
        return turn(num * (l / den) + o.num * (l / o.den), l);
    }
    bool operator==(const UnitValue& o) const {
        return is_zero == o.is_zero && (is_zero || (num == o.num && den == o.den));
    }

    cx to_complex() const {
        if (is_zero) return {0.0, 0.0};
        if (num == 0) return {1.0, 0.0};
        const double ang = two_pi * double(num) / double(den);
        return {std::cos(ang), std::sin(ang)};
    }
};

// smallest g >= 2 generating (Z/p^a)*, p an odd prime
inline long long find_generator(long long p, int a) {
    if (p == 2) throw unsupported_modulus_error("p = 2 unsupported: (Z/2^a)* is not cyclic");
    if (!is_prime(p)) throw validation_error("find_generator: p must be prime");
    if (a < 1) throw validation_error("find_generator: a >= 1 required");
    const long long m = ipow(p, a);
    const long long phi = phi_prime_power(p, a);
    auto fac = factorize(phi);
    for (long long g = 2; g < m; ++g) {
        if (g % p == 0) continue;
        bool ok = true;
        for (auto [q, e] : fac) {
            if (pow_mod(g, phi / q, m) == 1) {
                ok = false;
                break;
            }
        }
        if (ok) return g;
    }
    throw computation_error("no generator found (unreachable for odd prime powers)");
}

// ---------------------------------------------------------------------------
// LocalCharacter: chi mod p^a with a discrete-log table for O(1) evaluation.
// ---------------------------------------------------------------------------

class LocalCharacter {
  public:
    LocalCharacter(long long p, int a, long long index) : p_(p), a_(a) {
        if (p == 2) throw unsupported_modulus_error("p = 2 unsupported");
        if (!is_prime(p)) throw validation_error("LocalCharacter: p must be prime");
        if (a < 0) throw validation_error("LocalCharacter: a >= 0 required");
        modulus_ = ipow(p, a);
        phi_ = phi_prime_power(p, a);
        index_ = ((index % phi_) + phi_) % phi_;
        if (a >= 1) {
            generator_ = find_generator(p, a);
            dlog_.assign(static_cast<size_t>(modulus_), -1);
            long long x = 1;
            for (long long k = 0; k < phi_; ++k) {
                dlog_[static_cast<size_t>(x)] = k;
                x = mul_mod(x, generator_, modulus_);
            }
        }
    }

    long long p() const { return p_; }
    int level() const { return a_; }
    long long modulus() const { return modulus_; }
    long long group_order() const { return phi_; }
    long long index() const { return index_; }
    long long generator() const { return generator_; }

    // exact root-of-unity value at n (0 off the units)
    UnitValue unit(long long n) const {
        if (a_ == 0) return UnitValue::one();
        long long r = n % modulus_;
        if (r < 0) r += modulus_;
        const long long k = dlog_[static_cast<size_t>(r)];
        if (k < 0) return UnitValue::zero();
        return UnitValue::turn(index_ * k % phi_, phi_);
    }

    cx value(long long n) const { return unit(n).to_complex(); }

    // least b with chi trivial on units == 1 mod p^b; for index j != 0 this is
    // a - v_p(j), and 0 for the principal character
    int conductor_exponent() const {
        if (index_ == 0) return 0;
        long long j = index_;
        int v = 0;
        while (j % p_ == 0) {
            ++v;
            j /= p_;
        }
        return a_ - v;
    }

    long long conductor() const { return ipow(p_, conductor_exponent()); }
    bool is_principal() const { return index_ == 0; }
    bool is_primitive() const { return conductor_exponent() == a_; }

    LocalCharacter conj() const { return LocalCharacter(p_, a_, (phi_ - index_) % phi_); }

    // induce to level b >= a (same character through the reduction map)
    LocalCharacter lifted_to(int b) const {
        if (b < a_) throw validation_error("lifted_to: target level below current");
        if (b == a_) return *this;
        LocalCharacter up(p_, b, 0);
        if (a_ == 0) return up;
        // chi'(g_b) = chi(g_b mod p^a) = e^{2 pi i j e / phi_a}, e = dlog_a(g_b)
        const long long e = dlog_[static_cast<size_t>(up.generator_ % modulus_)];
        const long long ratio = up.phi_ / phi_;
        up.index_ = mul_mod(mul_mod(index_, e, up.phi_), ratio, up.phi_);
        return up;
    }

  private:
    long long p_;
    int a_;
    long long modulus_ = 1;
    long long phi_ = 1;
    long long index_ = 0;
    long long generator_ = 1;
    std::vector<long long> dlog_;
};

// all characters mod p^a of conductor exactly p^a, ascending index
inline std::vector<LocalCharacter> enumerate_primitive(long long p, int a) {
    if (p == 2) throw unsupported_modulus_error("p = 2 unsupported");
    if (a < 1) throw validation_error("enumerate_primitive: a >= 1 required");
    const long long phi = phi_prime_power(p, a);
    std::vector<LocalCharacter> out;
    for (long long j = 1; j < phi; ++j) {
        if (a >= 2 && j % p == 0) continue;
        out.emplace_back(p, a, j);
    }
    return out;
}

// ---------------------------------------------------------------------------
// DirichletCharacter: CRT family over pairwise distinct odd primes.
// ---------------------------------------------------------------------------

class DirichletCharacter {
  public:
    DirichletCharacter() = default;  // the trivial character mod 1

    explicit DirichletCharacter(std::vector<LocalCharacter> locals) : locals_(std::move(locals)) {
        std::sort(locals_.begin(), locals_.end(),
                  [](const LocalCharacter& a, const LocalCharacter& b) { return a.p() < b.p(); });
        for (size_t i = 0; i + 1 < locals_.size(); ++i)
            if (locals_[i].p() == locals_[i + 1].p())
                throw validation_error("DirichletCharacter: duplicate prime in CRT family");
    }

    static DirichletCharacter trivial() { return DirichletCharacter(); }

    const std::vector<LocalCharacter>& locals() const { return locals_; }

    long long modulus() const {
        long long m = 1;
        for (const auto& l : locals_) m *= l.modulus();
        return m;
    }

    UnitValue unit(long long n) const {
        UnitValue v = UnitValue::one();
        for (const auto& l : locals_) {
            v = v * l.unit(n);
            if (v.is_zero) break;
        }
        return v;
    }

    cx value(long long n) const { return unit(n).to_complex(); }

    long long conductor() const {
        long long c = 1;
        for (const auto& l : locals_) c *= l.conductor();
        return c;
    }

    int conductor_exponent_at(long long p) const {
        for (const auto& l : locals_)
            if (l.p() == p) return l.conductor_exponent();
        return 0;
    }

    bool is_principal() const {
        for (const auto& l : locals_)
            if (!l.is_principal()) return false;
        return true;
    }

    DirichletCharacter conj() const {
        std::vector<LocalCharacter> ls;
        ls.reserve(locals_.size());
        for (const auto& l : locals_) ls.push_back(l.conj());
        return DirichletCharacter(std::move(ls));
    }

  private:
    std::vector<LocalCharacter> locals_;
};

inline DirichletCharacter make_character(long long p, int a, long long index) {
    return DirichletCharacter({LocalCharacter(p, a, index)});
}

// pointwise product on units of the lcm modulus; indices add at shared primes
inline LocalCharacter product(const LocalCharacter& x, const LocalCharacter& y) {
    if (x.p() != y.p()) throw validation_error("local product: mismatched primes");
    const int b = std::max(x.level(), y.level());
    const LocalCharacter xl = x.lifted_to(b);
    const LocalCharacter yl = y.lifted_to(b);
    return LocalCharacter(x.p(), b, xl.index() + yl.index());
}

inline DirichletCharacter product(const DirichletCharacter& x, const DirichletCharacter& y) {
    std::vector<LocalCharacter> out;
    size_t i = 0, j = 0;
    const auto& a = x.locals();
    const auto& b = y.locals();
    while (i < a.size() && j < b.size()) {
        if (a[i].p() < b[j].p())
            out.push_back(a[i++]);
        else if (a[i].p() > b[j].p())
            out.push_back(b[j++]);
        else {
            out.push_back(product(a[i++], b[j++]));
        }
    }
    while (i < a.size()) out.push_back(a[i++]);
    while (j < b.size()) out.push_back(b[j++]);
    return DirichletCharacter(std::move(out));
}

// ---------------------------------------------------------------------------
// sum over primitive characters mod p^a of chi(n), by the divisor identity
//   sum*_{chi mod m} chi(n) = sum_{b | (n-1, m)} phi(b) mu(m/b),  (n, m) = 1
// ---------------------------------------------------------------------------

inline long long primitive_char_sum(long long n, long long p, int a) {
    if (p == 2) throw unsupported_modulus_error("p = 2 unsupported");
    if (!is_prime(p) || a < 1) throw validation_error("primitive_char_sum: need odd prime p, a >= 1");
    const long long m = ipow(p, a);
    long long nr = n % m;
    if (nr < 0) nr += m;
    if (std::gcd(nr, p) != 1) throw validation_error("primitive_char_sum requires gcd(n, p) = 1");
    const long long nm1 = ((n - 1) % m + m) % m;  // p^e | n-1 iff p^e | nm1, e <= a
    long long total = 0;
    long long b = 1;
    for (int e = 0; e <= a; ++e) {
        if (nm1 % b == 0) total += euler_phi(b) * mobius(m / b);
        b *= p;
    }
    return total;
}

// tau_h(chi) by direct summation; chi must live on a single prime power
inline cx gauss_sum(const DirichletCharacter& chi, long long h) {
    const auto& ls = chi.locals();
    if (ls.size() != 1) throw validation_error("gauss_sum: modulus must be a single prime power");
    const LocalCharacter& l = ls[0];
    const long long m = l.modulus();
    CompensatedComplex acc;
    for (long long r = 0; r < m; ++r) {
        const UnitValue u = l.unit(r);
        if (u.is_zero) continue;
        const double ang = two_pi * double((__int128)h * r % m) / double(m);
        acc.add(u.to_complex() * cx(std::cos(ang), std::sin(ang)));
    }
    return acc.value();
}

// all tau_h at once: FFT of the character value vector
inline std::vector<cx> all_gauss_sums(const DirichletCharacter& chi) {
    const auto& ls = chi.locals();
    if (ls.size() != 1) throw validation_error("all_gauss_sums: modulus must be a single prime power");
    const LocalCharacter& l = ls[0];
    const long long m = l.modulus();
    std::vector<cx> vals(static_cast<size_t>(m));
    for (long long r = 0; r < m; ++r) vals[static_cast<size_t>(r)] = l.value(r);
    return dft_plus(vals);
}

}  // namespace elltwist
