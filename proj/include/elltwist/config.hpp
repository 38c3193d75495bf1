// Line-oriented `key = value` configuration, the curve / representation
// spec strings shared by the CLI and config files, and atomic file output.
//
//   curve = [a1,a2,a3,a4,a6]
//   conductor = N
//   rep = trivial | p,a,index[;p,a,index...] | extern:PATH
#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "elltwist/artin.hpp"
#include "elltwist/common.hpp"
#include "elltwist/elliptic.hpp"

namespace elltwist {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

using KeyValues = std::map<std::string, std::string>;

inline KeyValues parse_key_values(std::istream& in) {
    KeyValues kv;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw parse_error("expected 'key = value'", line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw parse_error("empty key", line_no);
        if (kv.count(key)) throw parse_error("duplicate key '" + key + "'", line_no);
        kv[key] = value;
    }
    return kv;
}

inline KeyValues parse_key_values_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open config file: " + path);
    return parse_key_values(in);
}

// [a1,a2,a3,a4,a6]
inline std::array<long long, 5> parse_curve_spec(const std::string& spec) {
    std::string s = trim(spec);
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
        throw validation_error("curve spec must look like [a1,a2,a3,a4,a6]");
    s = s.substr(1, s.size() - 2);
    std::array<long long, 5> a{};
    std::stringstream ss(s);
    std::string tok;
    int i = 0;
    while (std::getline(ss, tok, ',')) {
        if (i >= 5) throw validation_error("curve spec has more than 5 coefficients");
        try {
            a[static_cast<size_t>(i++)] = std::stoll(trim(tok));
        } catch (const std::exception&) {
            throw validation_error("bad curve coefficient '" + tok + "'");
        }
    }
    if (i != 5) throw validation_error("curve spec needs exactly 5 coefficients");
    return a;
}

// trivial | p,a,index[;...] | extern:PATH
inline ArtinRep parse_rep_spec(const std::string& spec) {
    const std::string s = trim(spec);
    if (s == "trivial" || s.empty()) return ArtinRep::trivial();
    if (s.rfind("extern:", 0) == 0) return ingest_external(s.substr(7));
    std::vector<DirichletCharacter> comps;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ';')) {
        std::stringstream ps(part);
        std::string tok;
        std::vector<long long> nums;
        while (std::getline(ps, tok, ',')) {
            try {
                nums.push_back(std::stoll(trim(tok)));
            } catch (const std::exception&) {
                throw validation_error("bad rep component '" + part + "'");
            }
        }
        if (nums.size() != 3) throw validation_error("rep component must be p,a,index");
        if (nums[1] == 0)
            comps.push_back(DirichletCharacter::trivial());
        else
            comps.push_back(make_character(nums[0], static_cast<int>(nums[1]), nums[2]));
    }
    if (comps.empty()) throw validation_error("empty rep spec");
    return ArtinRep(std::move(comps));
}

// write-then-rename so readers never observe partial output
inline void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw validation_error("cannot open output file: " + tmp.string());
        out << content;
        if (!out.good()) throw computation_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, target);
}

}  // namespace elltwist
