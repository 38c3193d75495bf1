// Artin representations in two concrete forms: an internal direct sum of
// Dirichlet characters (where conductor arithmetic is exact) and an external
// local-data table for representations the artifact cannot construct itself.
//
// The Lemma-2 regime: once n_p(chi) exceeds every component's local exponent,
// conductors of products stop cancelling and
//   n_p(rho tensor chi) = n_p(chi) dim rho.
// lemma2_threshold returns the first exponent where this is guaranteed.
#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "elltwist/characters.hpp"
#include "elltwist/common.hpp"

namespace elltwist {

struct TwistThreshold {
    long long p = 0;
    int threshold = 1;
};

// External local-data table.  Unlisted primes default to the trivial local
// factor (1 - T)^dim with conductor exponent 0; listed primes carry the local
// polynomial det(1 - Frob^{-1} T | V^{I_q}) as a coefficient list c0..ck,
// c0 = 1.  Tables are assumed to describe genuine (unitarizable) Artin data.
struct ExternalTable {
    int dim = 1;
    std::map<long long, int> conductor_exponents;        // q -> n_q(rho), only ramified q
    std::map<long long, std::vector<cx>> local_polys;    // q -> coefficients
    std::map<long long, int> twist_thresholds;           // p -> Lemma-2 threshold
    long long coefficient_cutoff = 0;

    bool all_real() const {
        for (const auto& [q, poly] : local_polys)
            for (cx c : poly)
                if (c.imag() != 0.0) return false;
        return true;
    }
};

class ArtinRep {
  public:
    // internal: direct sum of Dirichlet characters
    explicit ArtinRep(std::vector<DirichletCharacter> chars) : data_(std::move(chars)) {
        if (components().empty()) throw validation_error("ArtinRep: dim >= 1 required");
    }
    explicit ArtinRep(ExternalTable table) : data_(std::move(table)) {
        validate_external(external());
    }

    static ArtinRep trivial() { return ArtinRep(std::vector<DirichletCharacter>{DirichletCharacter::trivial()}); }

    bool is_internal() const { return std::holds_alternative<std::vector<DirichletCharacter>>(data_); }
    const std::vector<DirichletCharacter>& components() const {
        return std::get<std::vector<DirichletCharacter>>(data_);
    }
    const ExternalTable& external() const { return std::get<ExternalTable>(data_); }

    int dim() const {
        return is_internal() ? static_cast<int>(components().size()) : external().dim;
    }

  private:
    static void validate_external(const ExternalTable& t) {
        if (t.dim < 1) throw validation_error("external table: dim >= 1 required");
        for (const auto& [q, poly] : t.local_polys) {
            if (poly.empty() || std::abs(poly[0] - cx(1.0)) > 1e-12)
                throw validation_error("external table: local polynomial must start with c0 = 1 at q = " +
                                       std::to_string(q));
            const int deg = static_cast<int>(poly.size()) - 1;
            const auto it = t.conductor_exponents.find(q);
            const int e = it == t.conductor_exponents.end() ? 0 : it->second;
            if (deg > t.dim)
                throw validation_error("external table: local polynomial degree exceeds dim at q = " +
                                       std::to_string(q));
            if (e == 0 && deg != t.dim)
                throw validation_error("external table: unramified q = " + std::to_string(q) +
                                       " must carry a degree-dim polynomial");
            if (e > 0 && deg >= t.dim)
                throw validation_error("external table: ramified q = " + std::to_string(q) +
                                       " must lose degree");
        }
        for (const auto& [q, e] : t.conductor_exponents)
            if (e < 0) throw validation_error("external table: negative conductor exponent");
    }

    std::variant<std::vector<DirichletCharacter>, ExternalTable> data_;
};

// n_q(rho); for the internal variant the sum of the component exponents
inline int local_conductor_exponent(const ArtinRep& rho, long long q) {
    if (rho.is_internal()) {
        int e = 0;
        for (const auto& chi : rho.components()) e += chi.conductor_exponent_at(q);
        return e;
    }
    const auto& m = rho.external().conductor_exponents;
    const auto it = m.find(q);
    return it == m.end() ? 0 : it->second;
}

inline long long global_conductor(const ArtinRep& rho) {
    if (rho.is_internal()) {
        long long n = 1;
        for (const auto& chi : rho.components()) n *= chi.conductor();
        return n;
    }
    long long n = 1;
    for (const auto& [q, e] : rho.external().conductor_exponents) n *= ipow(q, e);
    return n;
}

inline ArtinRep dual(const ArtinRep& rho) {
    if (rho.is_internal()) {
        std::vector<DirichletCharacter> out;
        out.reserve(rho.components().size());
        for (const auto& chi : rho.components()) out.push_back(chi.conj());
        return ArtinRep(std::move(out));
    }
    // contragredient local data = conjugated local data for unitary input;
    // real tables are therefore self-dual and anything else is not derivable
    if (rho.external().all_real()) return rho;
    throw missing_data_error(
        "external table has complex local data and carries no dual table; "
        "only real-coefficient (self-conjugate) tables have a canonical dual");
}

inline TwistThreshold lemma2_threshold(const ArtinRep& rho, long long p) {
    if (rho.is_internal()) {
        int mx = 0;
        for (const auto& chi : rho.components())
            mx = std::max(mx, chi.conductor_exponent_at(p));
        return {p, mx + 1};
    }
    const auto& th = rho.external().twist_thresholds;
    const auto it = th.find(p);
    if (it == th.end())
        throw missing_data_error("external table declares no twist threshold at p = " + std::to_string(p));
    return {p, it->second};
}

// rho tensor chi.  Internal: component-wise character products.  External:
// chi must be unramified at every listed prime except those with a declared
// threshold satisfied by chi's local exponent; unramified primes scale the
// Frobenius eigenvalues (c_k -> c_k chi(q)^k), deep primes drop to factor 1
// with the Lemma-2 conductor exponent.
inline ArtinRep twist(const ArtinRep& rho, const DirichletCharacter& chi) {
    if (rho.is_internal()) {
        std::vector<DirichletCharacter> out;
        out.reserve(rho.components().size());
        for (const auto& comp : rho.components()) out.push_back(product(comp, chi));
        return ArtinRep(std::move(out));
    }
    ExternalTable t = rho.external();
    for (const auto& lc : chi.locals()) {
        if (lc.conductor_exponent() == 0) continue;
        const long long p = lc.p();
        const auto th = t.twist_thresholds.find(p);
        if (th == t.twist_thresholds.end() || lc.conductor_exponent() < th->second)
            throw validation_error("unsupported twist: external table cannot absorb ramification at p = " +
                                   std::to_string(p));
        t.conductor_exponents[p] = lc.conductor_exponent() * t.dim;
        t.local_polys[p] = {cx(1.0)};
    }
    for (auto& [q, poly] : t.local_polys) {
        if (chi.conductor_exponent_at(q) > 0) continue;  // handled above
        const cx cq = chi.value(q);
        cx pw = 1.0;
        for (size_t k = 1; k < poly.size(); ++k) {
            pw *= cq;
            poly[k] *= pw;
        }
    }
    return ArtinRep(std::move(t));
}

// ---------------------------------------------------------------------------
// External-table file format (line oriented, '#' comments):
//   dim D
//   cutoff X
//   threshold p t
//   cond q e
//   poly q c0 c1 ... ck      (integers, or re,im decimal pairs)
// Integer coefficients round-trip bit-exactly through write_external.
// ---------------------------------------------------------------------------

namespace detail {

inline cx parse_coefficient(const std::string& tok, long line_no) {
    const auto comma = tok.find(',');
    try {
        if (comma == std::string::npos) return cx(std::stod(tok), 0.0);
        return cx(std::stod(tok.substr(0, comma)), std::stod(tok.substr(comma + 1)));
    } catch (const std::exception&) {
        throw parse_error("bad coefficient '" + tok + "'", line_no);
    }
}

inline std::string format_coefficient(cx c) {
    std::ostringstream os;
    os.precision(17);
    const double re = c.real();
    if (c.imag() == 0.0) {
        if (re == std::floor(re) && std::abs(re) < 9e15)
            os << static_cast<long long>(re);
        else
            os << re;
    } else {
        os << re << "," << c.imag();
    }
    return os.str();
}

}  // namespace detail

inline ArtinRep ingest_external(std::istream& in) {
    ExternalTable t;
    bool have_dim = false;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string key;
        if (!(ss >> key)) continue;
        if (key == "dim") {
            if (!(ss >> t.dim)) throw parse_error("dim needs an integer", line_no);
            have_dim = true;
        } else if (key == "cutoff") {
            if (!(ss >> t.coefficient_cutoff)) throw parse_error("cutoff needs an integer", line_no);
        } else if (key == "threshold") {
            long long p;
            int th;
            if (!(ss >> p >> th)) throw parse_error("threshold needs 'p t'", line_no);
            t.twist_thresholds[p] = th;
        } else if (key == "cond") {
            long long q;
            int e;
            if (!(ss >> q >> e)) throw parse_error("cond needs 'q e'", line_no);
            t.conductor_exponents[q] = e;
        } else if (key == "poly") {
            long long q;
            if (!(ss >> q)) throw parse_error("poly needs a prime", line_no);
            std::vector<cx> coeffs;
            std::string tok;
            while (ss >> tok) coeffs.push_back(detail::parse_coefficient(tok, line_no));
            if (coeffs.empty()) throw parse_error("poly needs coefficients", line_no);
            t.local_polys[q] = std::move(coeffs);
        } else {
            throw parse_error("unknown key '" + key + "'", line_no);
        }
    }
    if (!have_dim) throw parse_error("missing 'dim' header", 0);
    try {
        return ArtinRep(std::move(t));
    } catch (const validation_error& e) {
        throw validation_error(std::string("inconsistent external table: ") + e.what());
    }
}

inline ArtinRep ingest_external(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open external table: " + path);
    return ingest_external(in);
}

inline void write_external(std::ostream& out, const ExternalTable& t) {
    out << "dim " << t.dim << "\n";
    out << "cutoff " << t.coefficient_cutoff << "\n";
    for (const auto& [p, th] : t.twist_thresholds) out << "threshold " << p << " " << th << "\n";
    for (const auto& [q, e] : t.conductor_exponents) out << "cond " << q << " " << e << "\n";
    for (const auto& [q, poly] : t.local_polys) {
        out << "poly " << q;
        for (cx c : poly) out << " " << detail::format_coefficient(c);
        out << "\n";
    }
}

}  // namespace elltwist
