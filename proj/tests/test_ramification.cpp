#include <catch2/catch_amalgamated.hpp>

#include "elltwist/ramification.hpp"

using namespace elltwist;

TEST_CASE("filtration closed form") {
    // (p=3, m=1, n=3): g_0..g_2 = 9, g_3..g_8 = 3, then 1
    const RamificationFiltration f = filtration({3, 1, 3});
    CHECK(f.g(0) == 9);
    CHECK(f.g(1) == 9);
    CHECK(f.g(2) == 9);
    CHECK(f.g(3) == 3);
    CHECK(f.g(8) == 3);
    CHECK(f.g(9) == 1);
    CHECK(f.g(100) == 1);

    // trivial extension
    CHECK(filtration({3, 1, 1}).g(0) == 1);

    // (p=5, m=1, n=2)
    const RamificationFiltration g5 = filtration({5, 1, 2});
    CHECK(g5.g(0) == 5);
    CHECK(g5.g(4) == 5);
    CHECK(g5.g(5) == 1);
}

TEST_CASE("eta exact rationals") {
    CHECK(eta({3, 1, 3}, 8) == Rational(4));
    CHECK(eta({3, 1, 3}, 0) == Rational(0));
    CHECK(eta({5, 1, 2}, 0) == Rational(0));
    CHECK(eta({3, 1, 2}, 2) == Rational(2));
    // non-decreasing in i
    Rational prev(0);
    for (long long i = 0; i <= 30; ++i) {
        const Rational e = eta({3, 1, 3}, i);
        REQUIRE(prev <= e);
        prev = e;
    }
}

TEST_CASE("eta lower bound values") {
    CHECK(eta_lower_bound(3, 1, 2) == 2);
    CHECK(eta_lower_bound(3, 1, 3) == 4);
    CHECK(eta_lower_bound(5, 2, 3) == 24);
    CHECK_THROWS_AS(eta_lower_bound(3, 0, 1), validation_error);
}

TEST_CASE("lemma 1 bound, exact rational comparison") {
    for (long long p : {3LL, 5LL})
        for (int m = 1; m <= 2; ++m)
            for (int n = m; n <= 5; ++n)
                for (int s = m; s <= n; ++s) {
                    const Rational e = eta({p, m, n}, ipow(p, s) - 1);
                    REQUIRE(Rational(eta_lower_bound(p, m, s)) <= e);
                }
}

TEST_CASE("eta at p^s - 1 does not depend on n") {
    for (long long p : {3LL, 5LL})
        for (int m = 1; m <= 2; ++m)
            for (int s = m; s <= 4; ++s) {
                const Rational first = eta({p, m, s}, ipow(p, s) - 1);
                for (int n = s; n <= 5; ++n) REQUIRE(eta({p, m, n}, ipow(p, s) - 1) == first);
            }
}

TEST_CASE("conductor-discriminant consistency for K_n / Q_p") {
    for (long long p : {3LL, 5LL, 7LL})
        for (int n = 0; n <= 5; ++n)
            REQUIRE(different_valuation({p, 0, n}) == cyclotomic_discriminant_exponent(p, n));
}

TEST_CASE("tower validation") {
    CHECK_THROWS_AS(filtration({2, 1, 2}), unsupported_modulus_error);
    CHECK_THROWS_AS(filtration({3, 2, 1}), validation_error);
    CHECK_THROWS_AS(filtration({9, 1, 2}), validation_error);
}
