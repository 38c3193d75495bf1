// The character-averaging experiment: for each exponent a, average the
// completed twisted values over the primitive characters mod p^a and split
// the result as
//
//   sum*_chi Lhat(E, rho tensor chi, beta) = A(1) + Sigma_1 + Sigma_2,
//
//   A(n) = sum*_chi chi(n) F_beta(n y / (N p^{2ad})),
//   Sigma_1 = sum_{n >= 2} A(n) c_n n^{-beta},
//   Sigma_2 = N^{1-beta} sum_n B(n) c*_n n^{beta-2} F_{2-beta}(n / y),
//   B(n) = sum*_chi w_chi conj(chi)(n) p^{2ad(1-beta)},
//
// with y = P^{2 d gamma}, x = P^{2 d (1-gamma)}, P = p^a.  The aggregate
// route reuses the character-sum identity (A(n) vanishes off n == 1 mod
// p^{a-1}), and is cross-checked against the independent per-character sum.
// Root numbers w_chi are solved per character from two y values.
//
// Also here: the parameter algebra of the admissible (sigma, gamma) region,
// the Poisson checks behind the Sigma_2 diagonal/off-diagonal diagnostics,
// and the diagnostics themselves.
#pragma once

#include <chrono>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

#include "elltwist/afe.hpp"
#include "elltwist/characters.hpp"
#include "elltwist/common.hpp"
#include "elltwist/lfunction.hpp"

namespace elltwist {

// ---------------------------------------------------------------------------
// Parameter algebra (the sigma/gamma inequalities)
// ---------------------------------------------------------------------------

inline double sigma_threshold(int d) {
    if (d < 1) throw validation_error("sigma_threshold: d >= 1");
    return double(6 * d - 1) / double(4 * d + 2);
}

struct GammaWindow {
    double lo = 0.0;
    double hi = 0.0;
    bool empty() const { return !(lo < hi); }
};

// 1 - 1/(2d(3/2-sigma)) < gamma < (1+4d(sigma-1))/(4d(sigma-1/2)), with
// gamma > 1/(2d) so that y/p^a grows
inline GammaWindow gamma_window(int d, double sigma) {
    if (d < 1) throw validation_error("gamma_window: d >= 1");
    if (!(sigma > 1.0 && sigma < 1.5))
        throw validation_error("gamma_window: sigma must lie in (1, 3/2)");
    GammaWindow w;
    w.lo = std::max(1.0 - 1.0 / (2.0 * d * (1.5 - sigma)), 1.0 / (2.0 * d));
    w.hi = (1.0 + 4.0 * d * (sigma - 1.0)) / (4.0 * d * (sigma - 0.5));
    return w;
}

// ---------------------------------------------------------------------------
// Poisson identities: H(u) = 1/(pi (1+u^2)) and T(u) = e^{-2 pi |u|} are a
// Fourier pair, so  sum_n g(n) H(n/y) = (y/M) sum_h tau_h(g) T(y h / M)
// for g periodic mod M (g = 1, M = 1 in the untwisted case).
// ---------------------------------------------------------------------------

inline double poisson_H(double u) { return 1.0 / (pi * (1.0 + u * u)); }
inline double poisson_T(double u) { return std::exp(-two_pi * std::abs(u)); }

// both sides truncated at certified points; lhs tail restored by the midpoint
// integral (y/pi)(pi/2 - atan((T+1/2)/y)), whose error is O(f'(T)/24)
inline double poisson_check(double y, long long n_terms = 200000) {
    if (!(y > 0.0)) throw validation_error("poisson_check: y > 0");
    const long long T = std::max<long long>(n_terms, 200000);
    CompensatedReal lhs;
    lhs.add(poisson_H(0.0));
    for (long long n = 1; n <= T; ++n) lhs.add(2.0 * poisson_H(double(n) / y));
    lhs.add(2.0 * (y / pi) * (pi / 2.0 - std::atan((double(T) + 0.5) / y)));
    CompensatedReal rhs;
    rhs.add(1.0);
    for (long long h = 1;; ++h) {
        const double t = poisson_T(y * double(h));
        rhs.add(2.0 * t);
        if (t < 1e-19) break;
    }
    return std::abs(lhs.value() - y * rhs.value());
}

// the closed form both sides equal: y coth(pi y)
inline double poisson_closed_form(double y) { return y / std::tanh(pi * y); }

struct TwistedPoissonResult {
    double residual = 0.0;
    double lhs_tail_bound = 0.0;
    double tau0_abs = 0.0;
};

inline TwistedPoissonResult twisted_poisson_check(const DirichletCharacter& xi, double y) {
    if (xi.is_principal())
        throw validation_error("twisted_poisson_check requires a non-principal character");
    if (xi.locals().size() != 1)
        throw validation_error("twisted_poisson_check: single prime-power modulus required");
    if (!(y > 0.0)) throw validation_error("twisted_poisson_check: y > 0");
    const LocalCharacter& l = xi.locals()[0];
    const long long M = l.modulus();

    // exact sup of |partial sums| over one period, for the Abel tail bound
    double B = 0.0;
    {
        CompensatedComplex ps;
        for (long long r = 1; r <= M; ++r) {
            ps.add(l.value(r));
            B = std::max(B, std::abs(ps.value()));
        }
        B = std::max(B, 1.0);
    }
    // |sum_{n>T} xi(n) H(n/y)| <= 2 B H(T/y); choose T for a 5e-10 tail
    const double target = 5e-10;
    long long T = static_cast<long long>(y * std::sqrt(2.0 * B / (pi * target))) + M;
    T = std::max<long long>(T, 4 * M);

    const cx parity = l.value(M - 1);  // xi(-1)
    std::vector<cx> vals(static_cast<size_t>(M));
    for (long long r = 0; r < M; ++r) vals[static_cast<size_t>(r)] = l.value(r);
    CompensatedComplex lhs;
    for (long long n = 1; n <= T; ++n) {
        const cx v = vals[static_cast<size_t>(n % M)];
        if (v == cx(0.0)) continue;
        lhs.add((v + parity * v) * poisson_H(double(n) / y));
    }
    const double tail_bound = 4.0 * B * poisson_H(double(T) / y);

    const std::vector<cx> tau = all_gauss_sums(xi);
    CompensatedComplex rhs;
    for (long long h = 1;; ++h) {
        const double t = poisson_T(y * double(h) / double(M));
        if (t < 1e-19) break;
        rhs.add((tau[static_cast<size_t>(h % M)] +
                 tau[static_cast<size_t>(((M - h % M) % M))]) *
                t);
        if (h > 64 * M && t < 1e-19) break;
    }
    // h = 0 contributes tau_0 = 0 for non-principal xi
    const cx rhs_val = (tau[0] + rhs.value()) * (y / double(M));

    TwistedPoissonResult out;
    out.residual = std::abs(lhs.value() - rhs_val);
    out.lhs_tail_bound = tail_bound;
    out.tau0_abs = std::abs(tau[0]);
    return out;
}

// ---------------------------------------------------------------------------
// The experiment
// ---------------------------------------------------------------------------

struct ExperimentConfig {
    EllipticCurve curve{0, 0, 0, 0, -1, 1};  // placeholder; callers overwrite
    ArtinRep rep = ArtinRep::trivial();
    long long p = 3;
    int a_min = 2;
    int a_max = 4;
    cx beta{1.4, 0.0};
    double gamma = 0.65;
    double epsilon = 0.05;
    double tol = 1e-6;
    double nonvanishing_threshold = 1e-3;
    double kernel_tol = 1e-8;
    unsigned long long seed = 20240901ULL;
    int threads = 0;  // 0: hardware concurrency

    void validate() const {
        if (p == 2) throw unsupported_modulus_error("p = 2 twists are out of scope");
        if (!is_prime(p)) throw validation_error("experiment: p must be an odd prime");
        if (!curve.good_reduction_at(p))
            throw validation_error("experiment requires good reduction at p (Theorem 1 hypothesis)");
        const int d = rep.dim();
        const double sigma = beta.real();
        if (d == 1) {
            if (!(sigma > 1.0 && sigma <= 1.5))
                throw validation_error("experiment: for d = 1 need 1 < Re beta <= 3/2");
        } else {
            if (!(sigma > sigma_threshold(d) && sigma <= 1.5))
                throw validation_error("experiment: Re beta must exceed sigma_threshold(d) = " +
                                       std::to_string(sigma_threshold(d)));
        }
        const GammaWindow w = gamma_window(d, std::min(sigma, 1.4999));
        if (w.empty() || gamma <= w.lo || gamma >= w.hi)
            throw validation_error("experiment: gamma outside the admissible window (" +
                                   std::to_string(w.lo) + ", " + std::to_string(w.hi) + ")");
        const int thr = lemma2_threshold(rep, p).threshold;
        if (a_min < thr)
            throw validation_error("experiment: a_min below the Lemma-2 threshold " +
                                   std::to_string(thr) + "; start at threshold + 1");
        if (a_max < a_min) throw validation_error("experiment: a_max >= a_min required");
        if (!(epsilon > 0.0) || !(tol > 0.0)) throw validation_error("experiment: epsilon, tol > 0");
    }
};

struct ExperimentRow {
    int a = 0;
    long long primitive_count = 0;
    cx A1{0.0, 0.0};
    cx Sigma1{0.0, 0.0};
    cx Sigma2{0.0, 0.0};
    cx total{0.0, 0.0};           // A1 + Sigma1 + Sigma2
    cx total_per_char{0.0, 0.0};  // independent per-character sum of Lhat
    double ratio1 = 0.0;          // |Sigma1| / |A1|
    double ratio2 = 0.0;          // |Sigma2| / |A1|
    long long nonvanishing_count = 0;
    double max_error_estimate = 0.0;
    double max_unit_defect = 0.0;  // max | |w_chi| - 1 |
    double wall_time_s = 0.0;
};

struct ExperimentReport {
    std::vector<ExperimentRow> rows;
    long long fixed_conductor_part = 0;  // N = N_E^d (prime-to-p part of N_rho)^2
    int dim = 1;
};

namespace detail {

template <typename Fn>
inline void parallel_for(long long count, int threads, Fn&& fn) {
    int t = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    if (t < 1) t = 1;
    t = static_cast<int>(std::min<long long>(t, std::max<long long>(count, 1)));
    if (t == 1) {
        for (long long i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(t));
    std::exception_ptr first_error = nullptr;
    std::mutex error_mutex;
    for (int k = 0; k < t; ++k) {
        pool.emplace_back([&, k] {
            try {
                for (long long i = k; i < count; i += t) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace detail

inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const int d = cfg.rep.dim();
    const cx beta = cfg.beta;
    const long long p = cfg.p;

    // kernels are (d, beta)-level objects shared across the whole sweep
    const double y_top = std::pow(std::pow(double(p), cfg.a_max), 2.0 * d * cfg.gamma);
    const ArtinRep rep_dual = dual(cfg.rep);
    // fixed conductor part from a sample twist at a_min
    const std::vector<LocalCharacter> sample = enumerate_primitive(p, cfg.a_min);
    const ArtinRep sample_twist = twist(cfg.rep, DirichletCharacter({sample.front()}));
    const long long N_amin = pair_conductor(cfg.curve, sample_twist, p, cfg.a_min);
    const long long N_fixed = N_amin / ipow(p, 2 * cfg.a_min * d);

    const double x_top = std::pow(std::pow(double(p), cfg.a_max), 2.0 * d * (1.0 - cfg.gamma));
    const double u_lo_f = 1.0 / (double(N_fixed) * x_top * 2.0);
    AFEKernel kf(d, beta, std::min(u_lo_f, 1e-3), 2.0, cfg.kernel_tol);
    AFEKernel kb(d, 2.0 - beta, std::min(0.5 / (2.0 * y_top), 1e-3), 2.0, cfg.kernel_tol);

    // shared coefficient tables; X sized by the larger kernel range over the sweep
    const long long X1 = static_cast<long long>(kf.u_max() * double(N_fixed) * x_top) + 8;
    const long long X2 = static_cast<long long>(kb.u_max() * 2.0 * y_top) + 8;
    const long long X = std::max(X1, X2);
    const CoefficientTable coeffs = dirichlet_coefficients(cfg.curve, cfg.rep, X);
    const CoefficientTable dual_coeffs = dirichlet_coefficients(cfg.curve, rep_dual, X);
    const cx linf = gamma_factor(beta, d);

    ExperimentReport report;
    report.fixed_conductor_part = N_fixed;
    report.dim = d;

    for (int a = cfg.a_min; a <= cfg.a_max; ++a) {
        const auto t0 = std::chrono::steady_clock::now();
        const double P = std::pow(double(p), a);
        const double y = std::pow(P, 2.0 * d * cfg.gamma);
        const double Npair = double(N_fixed) * std::pow(P, 2.0 * d);
        const double y_afe = y / Npair;  // paper-normalized: args n/(N x) and n/y
        const std::vector<LocalCharacter> prim = enumerate_primitive(p, a);
        const long long count = static_cast<long long>(prim.size());
        const long long M = ipow(p, a);

        // per-character solves and values, parallel over characters with a
        // deterministic (index-ordered) reduction afterwards
        std::vector<cx> wchi(static_cast<size_t>(count));
        std::vector<cx> lhat(static_cast<size_t>(count));
        std::vector<double> errs(static_cast<size_t>(count));
        const cx nfac_base = std::exp((1.0 - beta) * std::log(Npair));
        detail::parallel_for(count, cfg.threads, [&](long long i) {
            const LocalCharacter& chi = prim[static_cast<size_t>(i)];
            // twisted coefficients are chi(n) c_n and conj(chi)(n) c*_n
            const long long n1 = static_cast<long long>(kf.u_max() / y_afe) + 1;
            const long long n2 = static_cast<long long>(kb.u_max() * y) + 1;
            if (std::max(n1, n2) > X)
                throw insufficient_cutoff_error("experiment coefficient table too short",
                                                std::max(n1, n2));
            auto S1 = [&](double yy) {
                CompensatedComplex s;
                double abs_mass = 0.0;
                const long long stop = static_cast<long long>(kf.u_max() / yy) + 1;
                for (long long n = 1; n <= stop; ++n) {
                    const cx cv = chi.value(n);
                    if (cv == cx(0.0)) continue;
                    const cx c = coeffs.at(n);
                    if (c == cx(0.0)) continue;
                    const cx kv = kf.eval(double(n) * yy);
                    if (kv == cx(0.0)) continue;
                    s.add(cv * c * std::exp(-beta * std::log(double(n))) * kv);
                }
                abs_mass = s.abs_sum();
                errs[static_cast<size_t>(i)] += abs_mass * (kf.tol() + kf.quadrature_error());
                return s.value();
            };
            auto S2 = [&](double yy) {
                CompensatedComplex s;
                const long long stop = static_cast<long long>(kb.u_max() * yy) + 1;
                for (long long n = 1; n <= stop; ++n) {
                    const cx cv = chi.unit(n).conj().to_complex();
                    if (cv == cx(0.0)) continue;
                    const cx c = dual_coeffs.at(n);
                    if (c == cx(0.0)) continue;
                    const cx kv = kb.eval(double(n) / yy);
                    if (kv == cx(0.0)) continue;
                    s.add(cv * c * std::exp((beta - 2.0) * std::log(double(n))) * kv);
                }
                errs[static_cast<size_t>(i)] += s.abs_sum() * (kb.tol() + kb.quadrature_error());
                return s.value();
            };
            const cx s11 = S1(y_afe), s12 = S1(2.0 * y_afe);
            const cx s21 = S2(y), s22 = S2(2.0 * y);
            const cx den = s22 - s21;
            if (std::abs(den) < 1e-250)
                throw ill_conditioned_error("experiment root-number solve degenerate");
            const cx w = (s11 - s12) / (nfac_base * den);
            wchi[static_cast<size_t>(i)] = w;
            lhat[static_cast<size_t>(i)] = s11 + w * nfac_base * s21;
        });

        ExperimentRow row;
        row.a = a;
        row.primitive_count = count;
        for (long long i = 0; i < count; ++i) {
            row.max_unit_defect =
                std::max(row.max_unit_defect, std::abs(std::abs(wchi[static_cast<size_t>(i)]) - 1.0));
            if (row.max_unit_defect > 1e-3)
                throw unit_modulus_error("experiment: solved w far from the unit circle at a = " +
                                         std::to_string(a));
            row.max_error_estimate = std::max(row.max_error_estimate, errs[static_cast<size_t>(i)]);
        }

        // independent per-character total (fixed order)
        {
            CompensatedComplex tot;
            for (long long i = 0; i < count; ++i) tot.add(lhat[static_cast<size_t>(i)]);
            row.total_per_char = tot.value();
        }

        // aggregate route
        row.A1 = double(count) * kf.eval(y_afe);
        {
            // Sigma_1 through the character-sum identity: only n == 1 mod p^{a-1}
            // contribute (the dagger-sum support), with weights
            // +-: count on p^a | n-1, -phi(p^{a-1}) on exactly p^{a-1} || n-1
            CompensatedComplex s1;
            const long long pam1 = ipow(p, a - 1);
            const long long stop1 = static_cast<long long>(kf.u_max() / y_afe) + 1;
            const long long phi_low = phi_prime_power(p, a - 1);
            for (long long n = 1 + pam1; n <= stop1; n += pam1) {
                const long long star = (n - 1) % M == 0 ? count : -phi_low;
                const cx c = coeffs.at(n);
                if (c == cx(0.0)) continue;
                const cx kv = kf.eval(double(n) * y_afe);
                if (kv == cx(0.0)) continue;
                s1.add(double(star) * c * std::exp(-beta * std::log(double(n))) * kv);
            }
            row.Sigma1 = s1.value();
            row.max_error_estimate =
                std::max(row.max_error_estimate,
                         s1.abs_sum() * (kf.tol() + kf.quadrature_error()));
        }
        {
            // Sigma_2 via W(r) = sum_chi w_chi conj(chi)(r), then
            // B(n) = p^{2ad(1-beta)} W(n mod p^a)
            std::vector<cx> W(static_cast<size_t>(M), cx(0.0));
            for (long long r = 0; r < M; ++r) {
                CompensatedComplex acc;
                for (long long i = 0; i < count; ++i) {
                    const cx v = prim[static_cast<size_t>(i)].unit(r).conj().to_complex();
                    if (v != cx(0.0)) acc.add(wchi[static_cast<size_t>(i)] * v);
                }
                W[static_cast<size_t>(r)] = acc.value();
            }
            const cx ppow = std::exp((1.0 - beta) * (2.0 * a * d) * std::log(double(p)));
            const cx nfac = std::exp((1.0 - beta) * std::log(double(N_fixed)));
            CompensatedComplex s2;
            const long long stop2 = static_cast<long long>(kb.u_max() * y) + 1;
            for (long long n = 1; n <= stop2; ++n) {
                const cx Wv = W[static_cast<size_t>(n % M)];
                if (Wv == cx(0.0)) continue;
                const cx c = dual_coeffs.at(n);
                if (c == cx(0.0)) continue;
                const cx kv = kb.eval(double(n) / y);
                if (kv == cx(0.0)) continue;
                s2.add(Wv * c * std::exp((beta - 2.0) * std::log(double(n))) * kv);
            }
            row.Sigma2 = nfac * ppow * s2.value();
            row.max_error_estimate =
                std::max(row.max_error_estimate, std::abs(nfac * ppow) * s2.abs_sum() *
                                                     (kb.tol() + kb.quadrature_error()));
        }
        row.total = row.A1 + row.Sigma1 + row.Sigma2;
        row.ratio1 = std::abs(row.Sigma1) / std::abs(row.A1);
        row.ratio2 = std::abs(row.Sigma2) / std::abs(row.A1);
        for (long long i = 0; i < count; ++i)
            if (std::abs(lhat[static_cast<size_t>(i)] / linf) > cfg.nonvanishing_threshold)
                ++row.nonvanishing_count;
        row.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        report.rows.push_back(row);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Diagonal / off-diagonal split of the Sigma_2 character double sum
// ---------------------------------------------------------------------------

struct SplitResult {
    double diag = 0.0;
    double offdiag = 0.0;
    bool sampled = false;
    long long pairs_total = 0;
    long long pairs_used = 0;
    double max_tau_abs = 0.0;  // largest |tau_h| encountered (trivial bound: p^a)
};

inline SplitResult diagonal_offdiagonal_split(const ExperimentConfig& cfg, int a) {
    cfg.validate();
    const int d = cfg.rep.dim();
    const double sigma = cfg.beta.real();
    const long long p = cfg.p;
    const long long M = ipow(p, a);
    const double P = double(M);
    const double y = std::pow(P, 2.0 * d * cfg.gamma);
    const double pref = std::pow(double(p), 4.0 * a * d * (1.0 - sigma));

    const std::vector<LocalCharacter> prim = enumerate_primitive(p, a);
    const long long count = static_cast<long long>(prim.size());
    SplitResult out;
    out.pairs_total = count * (count - 1);
    out.diag = double(count) * pref * poisson_closed_form(y);

    // |sum_n conj(chi)psi(n) H(n/y)| via the dual side; products group by
    // index difference delta mod phi(p^a)
    const long long phi = phi_prime_power(p, a);
    std::vector<double> value_of_delta(static_cast<size_t>(phi), -1.0);
    auto pair_value = [&](long long delta) {
        double& slot = value_of_delta[static_cast<size_t>(delta)];
        if (slot >= 0.0) return slot;
        const DirichletCharacter xi = make_character(p, a, delta);
        const std::vector<cx> tau = all_gauss_sums(xi);
        for (const cx& t : tau) out.max_tau_abs = std::max(out.max_tau_abs, std::abs(t));
        CompensatedComplex acc;
        acc.add(tau[0]);
        for (long long h = 1;; ++h) {
            const double t = poisson_T(y * double(h) / double(M));
            if (t < 1e-19) break;
            acc.add((tau[static_cast<size_t>(h % M)] + tau[static_cast<size_t>((M - h % M) % M)]) * t);
        }
        slot = std::abs(acc.value()) * y / double(M);
        return slot;
    };

    CompensatedReal off;
    if (count <= 200) {
        for (long long i = 0; i < count; ++i)
            for (long long j = 0; j < count; ++j) {
                if (i == j) continue;
                const long long delta =
                    ((prim[static_cast<size_t>(j)].index() - prim[static_cast<size_t>(i)].index()) % phi + phi) % phi;
                off.add(pref * pair_value(delta));
            }
        out.pairs_used = out.pairs_total;
    } else {
        out.sampled = true;
        std::mt19937_64 rng(cfg.seed);
        std::uniform_int_distribution<long long> pick(0, count - 1);
        const long long samples = 20000;
        for (long long s = 0; s < samples; ++s) {
            long long i = pick(rng), j = pick(rng);
            if (i == j) {
                --s;
                continue;
            }
            const long long delta =
                ((prim[static_cast<size_t>(j)].index() - prim[static_cast<size_t>(i)].index()) % phi + phi) % phi;
            off.add(pref * pair_value(delta));
        }
        out.pairs_used = samples;
        out.offdiag = off.value() * double(out.pairs_total) / double(samples);
        return out;
    }
    out.offdiag = off.value();
    return out;
}

// predicted growth of the diagonal between consecutive exponents:
// diag(a+1)/diag(a) -> p^{1 + 4d(1-sigma) + 2d gamma} as the coth saturates
inline double diagonal_step_ratio(const ExperimentConfig& cfg) {
    const int d = cfg.rep.dim();
    return std::pow(double(cfg.p), 1.0 + 4.0 * d * (1.0 - cfg.beta.real()) + 2.0 * d * cfg.gamma);
}

}  // namespace elltwist
