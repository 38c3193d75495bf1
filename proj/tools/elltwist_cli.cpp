// elltwist command-line front end.
//
// Subcommands:
//   charsum       sum over primitive characters mod p^a of chi(n)
//   ramification  filtration breaks, eta(i) and the lower-bound comparison
//   conductor     character / representation / twisted-pair conductors
//   lvalue        completed L-value via the approximate functional equation
//   experiment    the averaging experiment, CSV report
//   selftest      desk-scale property suite
//
// Exit codes: 0 success, 2 usage, 3 validation (bad inputs), 4 computation.
#include <CLI11.hpp>

#include <complex>
#include <iostream>
#include <sstream>

#include "elltwist/afe.hpp"
#include "elltwist/arith.hpp"
#include "elltwist/artin.hpp"
#include "elltwist/characters.hpp"
#include "elltwist/common.hpp"
#include "elltwist/config.hpp"
#include "elltwist/elliptic.hpp"
#include "elltwist/experiment.hpp"
#include "elltwist/lfunction.hpp"
#include "elltwist/ramification.hpp"
#include "elltwist/selftest.hpp"

namespace et = elltwist;

namespace {

et::cx parse_beta(const std::string& s) {
    const auto comma = s.find(',');
    try {
        if (comma == std::string::npos) return et::cx(std::stod(s), 0.0);
        return et::cx(std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1)));
    } catch (const std::exception&) {
        throw et::validation_error("bad beta '" + s + "'; use re or re,im");
    }
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty())
        std::cout << content;
    else
        et::atomic_write(out_path, content);
}

struct LValueArgs {
    std::string curve_spec;
    long long conductor = 0;
    std::string rep_spec = "trivial";
    std::string beta_str = "1.25";
    double y = 0.0;
    bool solve_w = false;
    double w_re = 1.0, w_im = 0.0;
    long long cutoff = 0;
    double kernel_tol = 1e-9;
    std::string out;
};

int cmd_lvalue(const LValueArgs& a) {
    const auto ai = et::parse_curve_spec(a.curve_spec);
    const et::EllipticCurve E(ai[0], ai[1], ai[2], ai[3], ai[4], a.conductor);
    const et::ArtinRep rho = et::parse_rep_spec(a.rep_spec);
    const et::ArtinRep rho_dual = et::dual(rho);
    const et::cx beta = parse_beta(a.beta_str);
    const int d = rho.dim();
    const double N = double(et::conductor_of_pair(E, rho));
    const double y = a.y > 0.0 ? a.y : 1.0 / std::sqrt(N);

    const double u_lo = std::min({y, 1.0 / (N * y), 1e-2});
    const et::AFEKernel kf(d, beta, u_lo, 4.0, a.kernel_tol);
    const et::AFEKernel kb(d, 2.0 - beta, u_lo, 4.0, a.kernel_tol);
    // size the table from the kernel ranges at this y
    long long X = static_cast<long long>(
                      std::max(kf.u_max() / y, kb.u_max() * N * y * 2.0)) + 8;
    if (a.cutoff > 0) X = a.cutoff;
    const et::CoefficientTable coeffs = et::dirichlet_coefficients(E, rho, X);
    const bool self_dual = rho.is_internal() ? false : rho.external().all_real();
    const et::CoefficientTable dual_coeffs =
        self_dual ? coeffs : et::dirichlet_coefficients(E, rho_dual, X);

    et::cx w(a.w_re, a.w_im);
    if (a.solve_w)
        w = et::solve_root_number(E, rho, beta, y, 2.0 * y, coeffs, dual_coeffs, kf, kb);
    const et::CompletedValue v = et::afe_value(E, rho, beta, y, w, coeffs, dual_coeffs, kf, kb);

    std::ostringstream os;
    os.precision(15);
    os << "beta_re,beta_im,value_re,value_im,w_re,w_im,error_estimate\n";
    os << beta.real() << "," << beta.imag() << "," << v.value.real() << "," << v.value.imag()
       << "," << w.real() << "," << w.imag() << "," << v.error_estimate << "\n";
    emit(a.out, os.str());
    return 0;
}

struct ExperimentArgs {
    std::string config_path;
    std::string out;
    int threads = -1;
    long long seed = -1;
};

int cmd_experiment(const ExperimentArgs& args) {
    const et::KeyValues kv = et::parse_key_values_file(args.config_path);
    static const std::set<std::string> known = {
        "curve", "conductor", "rep", "p", "a_min", "a_max", "beta", "gamma",
        "epsilon", "tol", "nonvanishing_threshold", "kernel_tol", "seed", "threads"};
    for (const auto& [k, v] : kv)
        if (!known.count(k)) throw et::validation_error("unknown config key '" + k + "'");
    auto need = [&](const std::string& k) -> std::string {
        const auto it = kv.find(k);
        if (it == kv.end()) throw et::validation_error("config missing key '" + k + "'");
        return it->second;
    };
    auto opt = [&](const std::string& k, const std::string& dflt) {
        const auto it = kv.find(k);
        return it == kv.end() ? dflt : it->second;
    };

    et::ExperimentConfig cfg;
    const auto ai = et::parse_curve_spec(need("curve"));
    cfg.curve = et::EllipticCurve(ai[0], ai[1], ai[2], ai[3], ai[4], std::stoll(need("conductor")));
    cfg.rep = et::parse_rep_spec(opt("rep", "trivial"));
    cfg.p = std::stoll(need("p"));
    cfg.a_min = std::stoi(need("a_min"));
    cfg.a_max = std::stoi(need("a_max"));
    cfg.beta = parse_beta(need("beta"));
    cfg.gamma = std::stod(need("gamma"));
    cfg.epsilon = std::stod(opt("epsilon", "0.05"));
    cfg.tol = std::stod(opt("tol", "1e-6"));
    cfg.nonvanishing_threshold = std::stod(opt("nonvanishing_threshold", "1e-3"));
    cfg.kernel_tol = std::stod(opt("kernel_tol", "1e-8"));
    cfg.seed = std::stoull(opt("seed", "20240901"));
    cfg.threads = std::stoi(opt("threads", "0"));
    if (args.threads >= 0) cfg.threads = args.threads;       // CLI overrides config
    if (args.seed >= 0) cfg.seed = static_cast<unsigned long long>(args.seed);

    const et::ExperimentReport rep = et::run_experiment(cfg);

    std::ostringstream os;
    os.precision(15);
    os << "a,primitive_count,A1_re,A1_im,S1_re,S1_im,S2_re,S2_im,ratio1,ratio2,"
          "nonvanishing_count,max_error_estimate,wall_time_s\n";
    for (const auto& r : rep.rows) {
        os << r.a << "," << r.primitive_count << "," << r.A1.real() << "," << r.A1.imag() << ","
           << r.Sigma1.real() << "," << r.Sigma1.imag() << "," << r.Sigma2.real() << ","
           << r.Sigma2.imag() << "," << r.ratio1 << "," << r.ratio2 << ","
           << r.nonvanishing_count << "," << r.max_error_estimate << "," << r.wall_time_s << "\n";
    }
    emit(args.out, os.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical explorations of Artin-twisted elliptic-curve L-values"};
    app.require_subcommand(1);

    // charsum
    long long cs_n = 1, cs_p = 3;
    int cs_a = 1;
    auto* charsum = app.add_subcommand("charsum", "sum of chi(n) over primitive chi mod p^a");
    charsum->add_option("--n", cs_n, "argument n")->required();
    charsum->add_option("--p", cs_p, "odd prime p")->required();
    charsum->add_option("--a", cs_a, "exponent a >= 1")->required();

    // ramification
    long long rm_p = 3, rm_i = 0;
    int rm_m = 1, rm_n = 1;
    auto* ram = app.add_subcommand("ramification", "cyclotomic ramification filtration and eta");
    ram->add_option("--p", rm_p)->required();
    ram->add_option("--m", rm_m)->required();
    ram->add_option("--n", rm_n)->required();
    ram->add_option("--i", rm_i)->required();

    // conductor
    std::string cd_rep;
    long long cd_p = 0, cd_index = -1;
    int cd_a = 0;
    std::string cd_curve;
    long long cd_ncurve = 0;
    auto* cond = app.add_subcommand("conductor", "conductors of characters, reps and twisted pairs");
    cond->add_option("--rep", cd_rep, "rep spec (see lvalue)");
    cond->add_option("--p", cd_p, "prime for character / twist");
    cond->add_option("--a", cd_a, "exponent for character / twist");
    cond->add_option("--index", cd_index, "character index (with --p/--a: a single character)");
    cond->add_option("--curve", cd_curve, "curve [a1,a2,a3,a4,a6] for the pair conductor");
    cond->add_option("--conductor", cd_ncurve, "curve conductor N_E");

    // lvalue
    LValueArgs lv;
    auto* lvalue = app.add_subcommand("lvalue", "completed L-value via the AFE");
    lvalue->add_option("--curve", lv.curve_spec, "[a1,a2,a3,a4,a6]")->required();
    lvalue->add_option("--conductor", lv.conductor, "curve conductor N_E")->required();
    lvalue->add_option("--rep", lv.rep_spec, "trivial | p,a,index;... | extern:PATH");
    lvalue->add_option("--beta", lv.beta_str, "evaluation point re[,im]")->required();
    lvalue->add_option("--y", lv.y, "AFE parameter (default 1/sqrt(N))");
    lvalue->add_flag("--solve-w", lv.solve_w, "solve the root number from y-invariance");
    lvalue->add_option("--w-re", lv.w_re, "root number (if not solving)");
    lvalue->add_option("--w-im", lv.w_im);
    lvalue->add_option("--cutoff", lv.cutoff, "coefficient cutoff override");
    lvalue->add_option("--kernel-tol", lv.kernel_tol, "kernel tolerance");
    lvalue->add_option("--out", lv.out, "output CSV path (atomic)");

    // experiment
    ExperimentArgs ex;
    auto* exper = app.add_subcommand("experiment", "character-averaging experiment");
    exper->add_option("--config", ex.config_path, "key = value config file")->required();
    exper->add_option("--out", ex.out, "output CSV path (atomic)");
    exper->add_option("--threads", ex.threads, "worker cap (overrides config)");
    exper->add_option("--seed", ex.seed, "sampling seed (overrides config)");

    // selftest
    std::string st_filter;
    auto* selftest = app.add_subcommand("selftest", "run the property-check suite");
    selftest->add_option("--filter", st_filter, "restrict to one module");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (charsum->parsed()) {
            std::cout << et::primitive_char_sum(cs_n, cs_p, cs_a) << "\n";
            return 0;
        }
        if (ram->parsed()) {
            const et::CyclotomicTower tower{rm_p, rm_m, rm_n};
            const et::RamificationFiltration f = et::filtration(tower);
            std::cout << "g-breaks (first..last -> order):\n";
            for (const auto& s : f.segments)
                std::cout << "  " << s.first << ".." << s.last << " -> " << s.order << "\n";
            const et::Rational e = et::eta(tower, rm_i);
            std::cout << "eta(" << rm_i << ") = " << e.str() << "\n";
            // compare against the bound at the largest s with p^s - 1 <= i
            if (rm_m >= 1) {
                int s = rm_m;
                while (s < rm_n && et::ipow(rm_p, s + 1) - 1 <= rm_i) ++s;
                const long long bound = et::eta_lower_bound(rm_p, rm_m, s);
                std::cout << "lower bound at s = " << s << ": " << bound << "  ("
                          << (et::Rational(bound) <= e ? "holds" : "VIOLATED") << ")\n";
            }
            return 0;
        }
        if (cond->parsed()) {
            if (!cd_rep.empty()) {
                const et::ArtinRep rho = et::parse_rep_spec(cd_rep);
                std::cout << "dim = " << rho.dim() << "\n";
                std::cout << "conductor(rho) = " << et::global_conductor(rho) << "\n";
                if (cd_p > 0) {
                    const auto thr = et::lemma2_threshold(rho, cd_p);
                    std::cout << "n_" << cd_p << "(rho) = " << et::local_conductor_exponent(rho, cd_p)
                              << ", lemma2 threshold = " << thr.threshold << "\n";
                    if (cd_a >= thr.threshold) {
                        const et::ArtinRep tw =
                            et::twist(rho, et::make_character(cd_p, cd_a, std::max(cd_index, 1LL)));
                        std::cout << "n_" << cd_p << "(rho ox chi) = "
                                  << et::local_conductor_exponent(tw, cd_p) << " = a*dim = "
                                  << cd_a * rho.dim() << "\n";
                        if (!cd_curve.empty()) {
                            const auto ai = et::parse_curve_spec(cd_curve);
                            const et::EllipticCurve E(ai[0], ai[1], ai[2], ai[3], ai[4], cd_ncurve);
                            std::cout << "N(E, rho ox chi) = "
                                      << et::pair_conductor(E, tw, cd_p, cd_a) << "\n";
                        }
                    }
                }
                return 0;
            }
            if (cd_p > 0 && cd_a >= 0 && cd_index >= 0) {
                const auto chi = et::make_character(cd_p, cd_a, cd_index);
                std::cout << chi.conductor() << "\n";
                return 0;
            }
            throw et::validation_error("conductor: give --rep or the --p/--a/--index triple");
        }
        if (lvalue->parsed()) return cmd_lvalue(lv);
        if (exper->parsed()) return cmd_experiment(ex);
        if (selftest->parsed()) return elltwist::selftest::run(st_filter) ? 0 : 4;
    } catch (const et::computation_error& e) {
        std::cerr << "computation error: " << e.what() << "\n";
        return 4;
    } catch (const et::validation_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
