// Desk-scale property suite behind the `selftest` subcommand: every module's
// invariants at reduced size (the acceptance binary runs the full-size
// criteria).  Each check returns an empty string on pass, or a message.
#pragma once

#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "elltwist/afe.hpp"
#include "elltwist/arith.hpp"
#include "elltwist/artin.hpp"
#include "elltwist/characters.hpp"
#include "elltwist/common.hpp"
#include "elltwist/experiment.hpp"
#include "elltwist/lfunction.hpp"
#include "elltwist/numerics.hpp"
#include "elltwist/ramification.hpp"

namespace elltwist::selftest {

struct Check {
    std::string module;
    std::string name;
    std::function<std::string()> run;
};

inline EllipticCurve curve11a() { return EllipticCurve(0, -1, 1, 0, 0, 11); }

// max relative recursion defect |Gamma(z+1) - z Gamma(z)| / |Gamma(z+1)| over
// a fixed grid; exposed with an injectable coefficient table so corrupted
// coefficients are detectable
inline double gamma_recursion_max_error(const std::array<double, 15>& coeffs =
                                            detail::lanczos_coeffs) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> re(0.1, 9.0), im(-49.0, 49.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const cx z(re(rng), im(rng));
        const cx lhs = complex_gamma(z + 1.0, coeffs);
        const cx rhs = z * complex_gamma(z, coeffs);
        worst = std::max(worst, std::abs(lhs - rhs) / std::abs(lhs));
    }
    return worst;
}

namespace detail_st {

inline std::string expect(bool ok, const std::string& msg) { return ok ? "" : msg; }

inline std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(3) << std::scientific << v;
    return os.str();
}

}  // namespace detail_st

inline std::vector<Check> all_checks() {
    using detail_st::expect;
    using detail_st::fmt;
    std::vector<Check> cs;

    // ----- numerics -----
    cs.push_back({"numerics", "gamma_recursion", [] {
        const double e = gamma_recursion_max_error();
        return expect(e < 1e-11, "recursion defect " + fmt(e));
    }});
    cs.push_back({"numerics", "incomplete_gamma_split", [] {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> br(0.5, 2.0), xr(-3.0, std::log10(50.0));
        for (int i = 0; i < 200; ++i) {
            const cx b(br(rng), br(rng) - 1.25);
            const double x = std::pow(10.0, xr(rng));
            const cx whole = upper_incomplete_gamma(b, x) + lower_incomplete_gamma(b, x);
            const cx g = complex_gamma(b);
            if (std::abs(whole - g) > 1e-10 * std::abs(g))
                return "splitting identity fails at x = " + std::to_string(x);
        }
        return std::string();
    }});
    cs.push_back({"numerics", "incomplete_gamma_monotone", [] {
        double prev = std::numeric_limits<double>::infinity();
        for (double x = 0.05; x < 40.0; x *= 1.3) {
            const cx g = upper_incomplete_gamma(cx(1.3, 0.0), x);
            if (std::abs(g.imag()) > 1e-14 || g.real() <= 0.0 || g.real() >= prev)
                return std::string("Gamma(1.3, x) not positive decreasing at x = ") + std::to_string(x);
            prev = g.real();
        }
        return std::string();
    }});
    cs.push_back({"numerics", "quadrature_linearity", [] {
        QuadratureSpec spec;
        auto f = [](cx s) { return std::exp(log_gamma_right(s + 1.0)) / s; };
        auto g = [](cx s) { return std::exp(log_gamma_right(s + 1.4) - s * std::log(2.0)) / s; };
        const cx a = vertical_line_integral(f, spec).value;
        const cx b = vertical_line_integral(g, spec).value;
        const cx both = vertical_line_integral(
            [&](cx s) { return 2.0 * f(s) + 0.5 * g(s); }, spec).value;
        const double err = std::abs(both - (2.0 * a + 0.5 * b));
        return expect(err < 1e-10, "linearity defect " + fmt(err));
    }});
    cs.push_back({"numerics", "quadrature_mellin_oracle", [] {
        // (1/2pi i) int Gamma(s+1) x^{-s} ds/s = Gamma(1, x) = e^{-x}
        QuadratureSpec spec;
        const cx v = vertical_line_integral(
            [](cx s) { return std::exp(log_gamma_right(s + 1.0)) / s; }, spec).value;
        const double err = std::abs(v - std::exp(-1.0));
        return expect(err < 1e-11, "Gamma(1,1) Mellin value off by " + fmt(err));
    }});

    // ----- characters -----
    cs.push_back({"characters", "divisor_formula_vs_bruteforce", [] {
        for (long long p : {3LL, 5LL, 7LL}) {
            for (int a = 1; ipow(p, a) <= 243; ++a) {
                const long long m = ipow(p, a);
                const auto prim = enumerate_primitive(p, a);
                for (long long n = 1; n < m; ++n) {
                    if (std::gcd(n, p) != 1) continue;
                    CompensatedComplex brute;
                    for (const auto& chi : prim) brute.add(chi.value(n));
                    const cx b = brute.value();
                    const long long f = primitive_char_sum(n, p, a);
                    if (std::abs(b - cx(double(f))) > 1e-9)
                        return "mismatch at m = " + std::to_string(m) + ", n = " + std::to_string(n);
                }
            }
        }
        return std::string();
    }});
    cs.push_back({"characters", "full_orthogonality", [] {
        for (long long p : {3LL, 5LL}) {
            const int a = 2;
            const long long m = ipow(p, a);
            const long long phi = phi_prime_power(p, a);
            for (long long n = 1; n < m; ++n) {
                if (std::gcd(n, m) != 1) continue;
                CompensatedComplex acc;
                for (long long j = 0; j < phi; ++j) acc.add(LocalCharacter(p, a, j).value(n));
                const cx expected(n % m == 1 ? double(phi) : 0.0);
                if (std::abs(acc.value() - expected) > 1e-9)
                    return "orthogonality fails at m = " + std::to_string(m) + ", n = " + std::to_string(n);
            }
        }
        return std::string();
    }});
    cs.push_back({"characters", "dagger_support", [] {
        // sum over primitive chi of chi(n) vanishes unless n == 1 mod p^{a-1}
        const long long p = 3;
        const int a = 3;
        const auto prim = enumerate_primitive(p, a);
        for (long long n = 1; n < ipow(p, a); ++n) {
            if (n % p == 0) continue;
            CompensatedComplex acc;
            for (const auto& chi : prim) acc.add(chi.value(n));
            if (n % ipow(p, a - 1) != 1 && std::abs(acc.value()) > 1e-9)
                return "nonzero off the dagger support at n = " + std::to_string(n);
        }
        return std::string();
    }});
    cs.push_back({"characters", "gauss_sum_modulus", [] {
        for (const auto& chi : enumerate_primitive(3, 2)) {
            const double m = std::abs(gauss_sum(DirichletCharacter({chi}), 1));
            if (std::abs(m - 3.0) > 1e-9) return "|tau_1| != 3 for primitive chi mod 9";
        }
        return std::string();
    }});
    cs.push_back({"characters", "fft_vs_naive_and_parseval", [] {
        for (long long j : {1LL, 2LL, 5LL, 9LL}) {
            const DirichletCharacter chi = make_character(3, 3, j);
            const auto fast = all_gauss_sums(chi);
            CompensatedReal power;
            for (long long h = 0; h < 27; ++h) {
                const cx naive = gauss_sum(chi, h);
                if (std::abs(naive - fast[static_cast<size_t>(h)]) > 1e-8)
                    return "FFT mismatch at h = " + std::to_string(h);
                power.add(std::norm(fast[static_cast<size_t>(h)]));
            }
            const double expected = 27.0 * double(phi_prime_power(3, 3));
            if (std::abs(power.value() - expected) > 1e-6) return std::string("Parseval fails");
        }
        return std::string();
    }});

    // ----- ramification -----
    cs.push_back({"ramification", "lemma1_bound_exact", [] {
        for (long long p : {3LL, 5LL})
            for (int m = 1; m <= 2; ++m)
                for (int n = m; n <= 5; ++n)
                    for (int s = m; s <= n; ++s) {
                        const Rational e = eta({p, m, n}, ipow(p, s) - 1);
                        if (!(Rational(eta_lower_bound(p, m, s)) <= e))
                            return "bound fails at p=" + std::to_string(p) + " m=" + std::to_string(m) +
                                   " s=" + std::to_string(s) + " n=" + std::to_string(n);
                    }
        return std::string();
    }});
    cs.push_back({"ramification", "eta_n_independence", [] {
        for (long long p : {3LL, 5LL})
            for (int m = 1; m <= 2; ++m)
                for (int s = m; s <= 4; ++s) {
                    const Rational first = eta({p, m, s}, ipow(p, s) - 1);
                    for (int n = s; n <= 5; ++n)
                        if (!(eta({p, m, n}, ipow(p, s) - 1) == first))
                            return "eta depends on n at p=" + std::to_string(p);
                }
        return std::string();
    }});
    cs.push_back({"ramification", "conductor_discriminant", [] {
        for (long long p : {3LL, 5LL, 7LL})
            for (int n = 1; n <= 4; ++n)
                if (different_valuation({p, 0, n}) != cyclotomic_discriminant_exponent(p, n))
                    return "discriminant oracle fails at p = " + std::to_string(p) +
                           ", n = " + std::to_string(n);
        return std::string();
    }});

    // ----- artin -----
    cs.push_back({"artin", "lemma2_regime", [] {
        // reps assembled from conductors {1, 3, 5, 9, 27}
        const std::vector<DirichletCharacter> pool = {
            DirichletCharacter::trivial(), make_character(3, 1, 1), make_character(5, 1, 1),
            make_character(3, 2, 1), make_character(3, 3, 2)};
        std::vector<ArtinRep> reps;
        for (size_t i = 0; i < pool.size(); ++i) {
            reps.push_back(ArtinRep({pool[i]}));
            for (size_t j = i; j < pool.size(); ++j) {
                reps.push_back(ArtinRep({pool[i], pool[j]}));
                reps.push_back(ArtinRep({pool[i], pool[j], pool[(i + j) % pool.size()]}));
            }
        }
        for (const auto& rho : reps) {
            const auto thr = lemma2_threshold(rho, 3);
            for (int b = thr.threshold; b <= thr.threshold + 1; ++b) {
                const DirichletCharacter chi = make_character(3, b, 1);
                const ArtinRep tw = twist(rho, chi);
                if (local_conductor_exponent(tw, 3) != b * rho.dim())
                    return "Lemma 2 equality fails at threshold " + std::to_string(thr.threshold);
            }
        }
        return std::string();
    }});
    cs.push_back({"artin", "dual_twist_commutes", [] {
        const ArtinRep rho({make_character(3, 2, 1), make_character(5, 1, 1)});
        const DirichletCharacter chi = make_character(3, 3, 2);
        const ArtinRep lhs = dual(twist(rho, chi));
        const ArtinRep rhs = twist(dual(rho), chi.conj());
        for (long long n = 1; n < 200; ++n) {
            CompensatedComplex a, b;
            for (const auto& c : lhs.components()) a.add(c.value(n));
            for (const auto& c : rhs.components()) b.add(c.value(n));
            if (std::abs(a.value() - b.value()) > 1e-10) return std::string("dual/twist do not commute");
        }
        return std::string();
    }});
    cs.push_back({"artin", "external_roundtrip", [] {
        ExternalTable t;
        t.dim = 2;
        t.coefficient_cutoff = 50;
        t.twist_thresholds[3] = 2;
        t.conductor_exponents[3] = 2;
        for (long long q : primes_up_to(50)) {
            if (q == 3) {
                t.local_polys[q] = {cx(1.0), cx(-1.0)};
                continue;
            }
            const double trc = 2.0 * ((q % 3 == 1) ? 1.0 : -0.5);
            t.local_polys[q] = {cx(1.0), cx(-trc), cx(1.0)};
        }
        std::stringstream ss;
        write_external(ss, t);
        const ArtinRep back = ingest_external(ss);
        const auto& bt = back.external();
        if (bt.local_polys != t.local_polys || bt.conductor_exponents != t.conductor_exponents)
            return std::string("external table round-trip not bit-exact");
        return std::string();
    }});

    // ----- lfunction -----
    cs.push_back({"lfunction", "curve11a_local_data", [] {
        const EllipticCurve E = curve11a();
        if (trace_of_frobenius(E, 2) != -2 || trace_of_frobenius(E, 3) != -1 ||
            trace_of_frobenius(E, 5) != 1)
            return std::string("11a traces wrong");
        if (reduction_type(E, 11) != ReductionType::split_mult)
            return std::string("11a should be split multiplicative at 11");
        return std::string();
    }});
    cs.push_back({"lfunction", "multiplicativity", [] {
        const EllipticCurve E = curve11a();
        const auto table = dirichlet_coefficients(E, ArtinRep::trivial(), 10000);
        for (long long m = 2; m <= 100; ++m)
            for (long long n = m + 1; m * n <= 10000; ++n) {
                if (std::gcd(m, n) != 1) continue;
                if (std::abs(table.at(m * n) - table.at(m) * table.at(n)) > 1e-9)
                    return "c_{mn} != c_m c_n at (" + std::to_string(m) + "," + std::to_string(n) + ")";
            }
        return std::string();
    }});
    cs.push_back({"lfunction", "hasse_and_divisor_bound", [] {
        const EllipticCurve E = curve11a();
        for (long long q : primes_up_to(3000)) {
            if (q == 11) continue;
            const long long aq = trace_of_frobenius(E, q);
            if (double(aq) * double(aq) > 4.0 * double(q)) return std::string("Hasse violated");
        }
        const auto table = dirichlet_coefficients(E, ArtinRep::trivial(), 4000);
        const auto dk = divisor_function_table(2, 4000);
        for (long long n = 1; n <= 4000; ++n)
            if (std::abs(table.at(n)) >
                double(dk[static_cast<size_t>(n)]) * std::sqrt(double(n)) + 1e-9)
                return "divisor bound violated at n = " + std::to_string(n);
        return std::string();
    }});
    cs.push_back({"lfunction", "convolution_independence", [] {
        // coefficients of rho = chi (+) conj(chi) equal the Dirichlet
        // convolution of the two twisted coefficient tables
        const EllipticCurve E = curve11a();
        const DirichletCharacter chi = make_character(5, 1, 1);
        const long long X = 2000;
        const ArtinRep rho({chi, chi.conj()});
        const auto joint = dirichlet_coefficients(E, rho, X);
        const auto one = dirichlet_coefficients(E, ArtinRep({chi}), X);
        const auto two = dirichlet_coefficients(E, ArtinRep({chi.conj()}), X);
        for (long long n = 1; n <= X; ++n) {
            cx conv = 0.0;
            for (long long a = 1; a * a <= n; ++a) {
                if (n % a != 0) continue;
                conv += one.at(a) * two.at(n / a);
                if (a != n / a) conv += one.at(n / a) * two.at(a);
            }
            if (std::abs(conv - joint.at(n)) > 1e-10 * (1.0 + std::abs(conv)))
                return "convolution identity fails at n = " + std::to_string(n);
        }
        return std::string();
    }});

    // ----- afe -----
    cs.push_back({"afe", "kernel_oracle_d1", [] {
        const cx beta(1.25, 0.0);
        const AFEKernel K(1, beta, 1e-3, 10.0, 1e-10);
        for (int i = 0; i < 40; ++i) {
            const double u = std::pow(10.0, -3.0 + 4.0 * i / 39.0);
            const cx oracle =
                2.0 * std::exp(-beta * std::log(two_pi)) * upper_incomplete_gamma(beta, two_pi * u);
            if (std::abs(K.eval(u) - oracle) > 1e-9 * std::abs(oracle))
                return "kernel misses the incomplete-gamma oracle at u = " + std::to_string(u);
        }
        return std::string();
    }});
    cs.push_back({"afe", "kernel_limits_and_tail", [] {
        const AFEKernel K(1, cx(1.0, 0.0), 1e-4, 10.0, 1e-9);
        const cx linf = K.linf();
        if (std::abs(K.eval(1e-4) - linf) > 0.01 * std::abs(linf))
            return std::string("u -> 0 limit violated");
        for (int k : {1, 5, 10})
            if (!K.check_tail_decay(k, 1.0, 1e-8)) return "tail decay fails at k = " + std::to_string(k);
        const double dev = K.max_offgrid_deviation(12);
        return detail_st::expect(dev < 1e-8, "off-grid deviation " + fmt(dev));
    }});
    cs.push_back({"afe", "afe_consistency_11a", [] {
        const EllipticCurve E = curve11a();
        const cx beta(1.25, 0.0);
        const AFEKernel kf(1, beta, 1e-3, 8.0, 1e-9);
        const AFEKernel kb(1, 2.0 - beta, 1e-3, 8.0, 1e-9);
        const auto table = dirichlet_coefficients(E, ArtinRep::trivial(), 4000);
        const double y0 = 1.0 / std::sqrt(11.0);
        const cx w = solve_root_number(E, ArtinRep::trivial(), beta, y0, 2.0 * y0, table, table, kf, kb);
        if (std::abs(w - cx(1.0)) > 1e-5) return std::string("w(11a) != +1");
        const auto v1 = afe_value(E, ArtinRep::trivial(), beta, y0, w, table, table, kf, kb);
        const auto v2 = afe_value(E, ArtinRep::trivial(), beta, 2.0 * y0, w, table, table, kf, kb);
        const double rel = std::abs(v1.value - v2.value) / std::abs(v1.value);
        if (rel > 1e-6) return "y-invariance defect " + fmt(rel);
        const double res = functional_equation_residual(E, ArtinRep::trivial(), beta, w, y0,
                                                        table, table, kf, kb);
        return detail_st::expect(res < 1e-6, "FE residual " + fmt(res));
    }});

    // ----- average -----
    cs.push_back({"average", "window_algebra", [] {
        std::mt19937_64 rng(5);
        std::uniform_int_distribution<int> dd(1, 6);
        std::uniform_real_distribution<double> ss(1.0001, 1.4999);
        for (int i = 0; i < 1000; ++i) {
            const int d = dd(rng);
            const double sigma = ss(rng);
            const bool nonempty = !gamma_window(d, sigma).empty();
            const bool above = sigma > sigma_threshold(d);
            if (d == 1) {
                if (!nonempty) return std::string("d=1 window empty above sigma = 1");
            } else if (nonempty != above) {
                return "window/threshold mismatch at d = " + std::to_string(d) +
                       ", sigma = " + std::to_string(sigma);
            }
        }
        if (std::abs(sigma_threshold(2) - 1.1) > 1e-15) return std::string("d=2 threshold != 1.1");
        return std::string();
    }});
    cs.push_back({"average", "poisson_untwisted", [] {
        const double r1 = poisson_check(1.0);
        const double closed = poisson_closed_form(1.0);
        if (std::abs(closed - 1.0037418731973213) > 1e-12) return std::string("coth(pi) wrong");
        for (double y : {0.5, 3.0, 100.0})
            if (poisson_check(y) > 1e-10) return "residual too large at y = " + std::to_string(y);
        return detail_st::expect(r1 < 1e-10, "y=1 residual " + fmt(r1));
    }});
    cs.push_back({"average", "poisson_twisted", [] {
        for (long long j : {1LL, 2LL, 3LL, 4LL}) {
            const auto r = twisted_poisson_check(make_character(3, 2, j), 50.0);
            if (r.tau0_abs > 1e-10) return std::string("tau_0 != 0");
            if (r.residual > 1e-8) return "twisted residual " + fmt(r.residual);
        }
        return std::string();
    }});
    cs.push_back({"average", "mini_experiment", [] {
        ExperimentConfig cfg;
        cfg.curve = curve11a();
        cfg.rep = ArtinRep::trivial();
        cfg.p = 3;
        cfg.a_min = 2;
        cfg.a_max = 3;
        cfg.beta = cx(1.4, 0.0);
        cfg.gamma = 0.65;
        cfg.kernel_tol = 1e-7;
        const ExperimentReport rep = run_experiment(cfg);
        for (const auto& row : rep.rows) {
            const double rel = std::abs(row.total - row.total_per_char) / std::abs(row.total_per_char);
            if (rel > 1e-6) return "decomposition defect " + fmt(rel) + " at a = " + std::to_string(row.a);
            if (row.nonvanishing_count < 1) return std::string("no nonvanishing twist found");
            if (row.max_unit_defect > 1e-4) return std::string("|w| drifts off 1");
        }
        return std::string();
    }});

    return cs;
}

// runs all (or filtered) checks; prints a pass/fail table; true iff all pass
inline bool run(const std::string& filter = "", std::ostream& os = std::cout) {
    bool all_ok = true;
    int ran = 0;
    for (const auto& c : all_checks()) {
        if (!filter.empty() && c.module != filter) continue;
        ++ran;
        std::string msg;
        try {
            msg = c.run();
        } catch (const std::exception& e) {
            msg = std::string("exception: ") + e.what();
        }
        const bool ok = msg.empty();
        all_ok = all_ok && ok;
        os << (ok ? "[PASS] " : "[FAIL] ") << c.module << "/" << c.name;
        if (!ok) os << "  -- " << msg;
        os << "\n";
    }
    if (ran == 0) {
        os << "no checks match filter '" << filter << "'\n";
        return false;
    }
    return all_ok;
}

}  // namespace elltwist::selftest
