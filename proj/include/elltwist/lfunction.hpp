// Local polynomials P_q(E, rho, T) = det(1 - Frob_q^{-1} T | H^1 tensor V),
// Dirichlet coefficients of L(E, rho, s) by sieving, and the conductor of
// the pair N(E, rho) = N_E^{dim rho} N_rho^2 (coprime ramification only).
//
// For internal rho = (+) chi_i the factors are explicit:
//   good q:            prod_i [1 - a_q chi_i(q) T + chi_i(q)^2 q T^2]
//   multiplicative q:  prod_i [1 - a_q chi_i(q) T]   (chi_i unramified at q)
//   additive q:        1
// Ramified chi_i at good q contribute the factor 1 through chi_i(q) = 0.
// Primes where both E and rho ramify are rejected: the paper's conductor
// formula does not cover that configuration.
#pragma once

#include <algorithm>
#include <vector>

#include "elltwist/artin.hpp"
#include "elltwist/characters.hpp"
#include "elltwist/common.hpp"
#include "elltwist/elliptic.hpp"

namespace elltwist {

namespace detail {

inline std::vector<cx> poly_mul(const std::vector<cx>& a, const std::vector<cx>& b) {
    std::vector<cx> out(a.size() + b.size() - 1, cx(0.0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

// inverse roots lambda_i of P(T) = prod (1 - lambda_i T), i.e. roots of the
// reversed monic polynomial, by Durand-Kerner; degrees here are tiny
inline std::vector<cx> inverse_roots(const std::vector<cx>& poly) {
    const int deg = static_cast<int>(poly.size()) - 1;
    if (deg <= 0) return {};
    // reversed polynomial: prod (z - lambda_i) = sum_k c_k z^{deg-k}, made monic
    std::vector<cx> monic(static_cast<size_t>(deg) + 1);
    for (int k = 0; k <= deg; ++k) monic[static_cast<size_t>(k)] = poly[static_cast<size_t>(deg - k)];
    const cx lead = monic.back();
    if (std::abs(lead) < 1e-300) throw computation_error("local polynomial with vanishing top coefficient");
    for (auto& c : monic) c /= lead;
    auto eval = [&](cx z) {
        cx v = 0.0;
        for (int k = deg; k >= 0; --k) v = v * z + monic[static_cast<size_t>(k)];
        return v;
    };
    std::vector<cx> r(static_cast<size_t>(deg));
    for (int i = 0; i < deg; ++i)
        r[static_cast<size_t>(i)] = std::pow(cx(0.4, 0.9), double(i + 1));  // non-symmetric seeds
    for (int iter = 0; iter < 500; ++iter) {
        double moved = 0.0;
        for (int i = 0; i < deg; ++i) {
            cx denom = 1.0;
            for (int j = 0; j < deg; ++j)
                if (j != i) denom *= r[static_cast<size_t>(i)] - r[static_cast<size_t>(j)];
            const cx delta = eval(r[static_cast<size_t>(i)]) / denom;
            r[static_cast<size_t>(i)] -= delta;
            moved = std::max(moved, std::abs(delta));
        }
        if (moved < 1e-14) break;
    }
    return r;
}

}  // namespace detail

inline std::vector<cx> local_polynomial(const EllipticCurve& E, const ArtinRep& rho, long long q) {
    const ReductionType rt = reduction_type(E, q);
    if (rho.is_internal()) {
        std::vector<cx> P{cx(1.0)};
        for (const auto& chi : rho.components()) {
            const bool chi_ramified = chi.conductor_exponent_at(q) > 0;
            if (rt != ReductionType::good && chi_ramified)
                throw ramification_collision_error(
                    "prime " + std::to_string(q) + " ramifies in both the curve and the twist data");
            switch (rt) {
                case ReductionType::good: {
                    const cx cq = chi.value(q);
                    if (cq == cx(0.0)) break;  // ramified component: factor 1
                    const double aq = double(trace_of_frobenius(E, q));
                    P = detail::poly_mul(P, {cx(1.0), -aq * cq, cq * cq * double(q)});
                    break;
                }
                case ReductionType::split_mult:
                case ReductionType::nonsplit_mult: {
                    const double aq = rt == ReductionType::split_mult ? 1.0 : -1.0;
                    P = detail::poly_mul(P, {cx(1.0), -aq * chi.value(q)});
                    break;
                }
                case ReductionType::additive:
                    break;  // factor 1
            }
        }
        return P;
    }
    // external variant: eigenvalues on V^{I_q} from the stored local polynomial
    const ExternalTable& t = rho.external();
    const bool rho_ramified = local_conductor_exponent(rho, q) > 0;
    if (rt != ReductionType::good && rho_ramified)
        throw ramification_collision_error("prime " + std::to_string(q) +
                                           " ramifies in both the curve and the external data");
    std::vector<cx> base;
    const auto it = t.local_polys.find(q);
    if (it != t.local_polys.end()) {
        base = it->second;
    } else {
        // unlisted primes default to trivial Frobenius: (1 - T)^dim
        base = {cx(1.0)};
        for (int i = 0; i < t.dim; ++i) base = detail::poly_mul(base, {cx(1.0), cx(-1.0)});
    }
    const std::vector<cx> lambdas = detail::inverse_roots(base);
    std::vector<cx> P{cx(1.0)};
    switch (rt) {
        case ReductionType::good: {
            const double aq = double(trace_of_frobenius(E, q));
            for (cx l : lambdas) P = detail::poly_mul(P, {cx(1.0), -aq * l, l * l * double(q)});
            break;
        }
        case ReductionType::split_mult:
        case ReductionType::nonsplit_mult: {
            const double aq = rt == ReductionType::split_mult ? 1.0 : -1.0;
            for (cx l : lambdas) P = detail::poly_mul(P, {cx(1.0), -aq * l});
            break;
        }
        case ReductionType::additive:
            break;
    }
    return P;
}

// ---------------------------------------------------------------------------
// Dirichlet coefficients c_1..c_X of prod_q P_q(q^{-s})^{-1}
// ---------------------------------------------------------------------------

struct CoefficientTable {
    std::vector<cx> values;  // index n, values[0] unused
    long long cutoff = 0;
    int rep_dim = 1;

    cx at(long long n) const { return values[static_cast<size_t>(n)]; }
};

inline CoefficientTable dirichlet_coefficients(const EllipticCurve& E, const ArtinRep& rho,
                                               long long X) {
    if (X < 1) throw validation_error("dirichlet_coefficients: X >= 1 required");
    if (!rho.is_internal() && rho.external().coefficient_cutoff > 0 &&
        X > rho.external().coefficient_cutoff)
        throw insufficient_cutoff_error("external table cutoff below requested X", X);
    CoefficientTable table;
    table.cutoff = X;
    table.rep_dim = rho.dim();
    auto& c = table.values;
    c.assign(static_cast<size_t>(X) + 1, cx(0.0));
    c[1] = cx(1.0);
    for (long long q : primes_up_to(X)) {
        const std::vector<cx> P = local_polynomial(E, rho, q);
        const int deg = static_cast<int>(P.size()) - 1;
        if (deg == 0) continue;
        int kmax = 0;
        for (long long qq = q; qq <= X; qq *= q) {
            ++kmax;
            if (qq > X / q) break;
        }
        // power-series inversion of P_q by the linear recurrence
        std::vector<cx> u(static_cast<size_t>(kmax) + 1, cx(0.0));
        u[0] = cx(1.0);
        for (int k = 1; k <= kmax; ++k) {
            cx acc = 0.0;
            for (int j = 1; j <= std::min(deg, k); ++j) acc -= P[static_cast<size_t>(j)] * u[static_cast<size_t>(k - j)];
            u[static_cast<size_t>(k)] = acc;
        }
        // multiplicative merge; sources m are never divisible by q
        for (long long m = 1; m <= X; ++m) {
            if (m % q == 0) continue;
            const cx cm = c[static_cast<size_t>(m)];
            if (cm == cx(0.0)) continue;
            long long mq = m;
            for (int k = 1; k <= kmax; ++k) {
                if (mq > X / q) break;
                mq *= q;
                c[static_cast<size_t>(mq)] += cm * u[static_cast<size_t>(k)];
            }
        }
    }
    return table;
}

// ---------------------------------------------------------------------------
// Conductor of the pair.  With chi ramified only at p and n_p(chi) in the
// Lemma-2 regime, N(E, rho tensor chi) = N p^{2 a dim rho} where
// N = N_E^{dim rho} (prime-to-p part of N_rho)^2 stays fixed over the sweep.
// ---------------------------------------------------------------------------

inline long long conductor_of_pair(const EllipticCurve& E, const ArtinRep& rho) {
    const int d = rho.dim();
    const long long n_rho = global_conductor(rho);
    if (std::gcd(E.conductor, n_rho) != 1)
        throw ramification_collision_error(
            "curve and representation share a ramified prime; pair conductor undefined here");
    __int128 n = 1;
    for (int i = 0; i < d; ++i) n *= E.conductor;
    n *= (__int128)n_rho * n_rho;
    if (n > (__int128)9e18) throw validation_error("pair conductor overflows int64");
    return static_cast<long long>(n);
}

inline long long pair_conductor(const EllipticCurve& E, const ArtinRep& twisted, long long p, int a) {
    if (!E.good_reduction_at(p))
        throw validation_error("pair_conductor: curve must have good reduction at p = " + std::to_string(p));
    const int d = twisted.dim();
    const int np = local_conductor_exponent(twisted, p);
    if (np != a * d)
        throw validation_error("pair_conductor: twisted exponent at p is " + std::to_string(np) +
                               ", not a*dim = " + std::to_string(a * d) +
                               " (twist outside the Lemma-2 regime?)");
    return conductor_of_pair(E, twisted);
}

}  // namespace elltwist
