// Shared scalar types, compensated accumulation, exact rationals and the
// error taxonomy used across the library.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace elltwist {

using cx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846264338327950288;
inline constexpr double two_pi = 2.0 * pi;

// ---------------------------------------------------------------------------
// Errors.  validation_error -> bad inputs / violated preconditions (CLI exit 3)
//          computation_error -> numerical failure at runtime (CLI exit 4)
// ---------------------------------------------------------------------------

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct validation_error : error {
    using error::error;
};

struct computation_error : error {
    using error::error;
};

struct pole_error : validation_error {
    using validation_error::validation_error;
};

struct unsupported_modulus_error : validation_error {
    using validation_error::validation_error;
};

struct bad_reduction_error : validation_error {
    using validation_error::validation_error;
};

struct ramification_collision_error : validation_error {
    using validation_error::validation_error;
};

struct missing_data_error : validation_error {
    using validation_error::validation_error;
};

struct parse_error : validation_error {
    long line = 0;
    parse_error(const std::string& msg, long line_no)
        : validation_error("line " + std::to_string(line_no) + ": " + msg), line(line_no) {}
};

struct nonconvergence_error : computation_error {
    using computation_error::computation_error;
};

struct ill_conditioned_error : computation_error {
    using computation_error::computation_error;
};

struct unit_modulus_error : computation_error {
    using computation_error::computation_error;
};

struct insufficient_cutoff_error : computation_error {
    long long required_cutoff = 0;
    insufficient_cutoff_error(const std::string& msg, long long required)
        : computation_error(msg + " (required cutoff X >= " + std::to_string(required) + ")"),
          required_cutoff(required) {}
};

// ---------------------------------------------------------------------------
// Neumaier compensated summation.  Sums of more than ~1e3 terms go through
// this; the error carried is O(eps * sum |x|) independent of term count.
// ---------------------------------------------------------------------------

class CompensatedReal {
  public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
        abs_ += std::abs(x);
    }
    double value() const { return sum_ + comp_; }
    double abs_sum() const { return abs_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
    double abs_ = 0.0;
};

class CompensatedComplex {
  public:
    void add(cx z) {
        re_.add(z.real());
        im_.add(z.imag());
    }
    cx value() const { return {re_.value(), im_.value()}; }
    // l1 mass of everything accumulated; used for rounding-error estimates
    double abs_sum() const { return re_.abs_sum() + im_.abs_sum(); }

  private:
    CompensatedReal re_;
    CompensatedReal im_;
};

// ---------------------------------------------------------------------------
// Exact rationals over int64 (the eta function of the ramification module is
// compared as an exact rational against an integer bound).
// ---------------------------------------------------------------------------

struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n) : num(n), den(1) {}
    Rational(long long n, long long d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw validation_error("rational with zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    friend Rational operator+(Rational a, Rational b) {
        return Rational(a.num * b.den + b.num * a.den, a.den * b.den);
    }
    friend bool operator==(Rational a, Rational b) { return a.num == b.num && a.den == b.den; }
    friend bool operator<(Rational a, Rational b) { return a.num * b.den < b.num * a.den; }
    friend bool operator>=(Rational a, Rational b) { return !(a < b); }
    friend bool operator<=(Rational a, Rational b) { return a == b || a < b; }

    double to_double() const { return double(num) / double(den); }
    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }
};

}  // namespace elltwist
