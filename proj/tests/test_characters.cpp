#include <catch2/catch_amalgamated.hpp>

#include "elltwist/characters.hpp"

using namespace elltwist;

namespace {

// conductor exponent by direct scan: least b with chi = 1 on units == 1 mod p^b
int conductor_exponent_brute(const LocalCharacter& chi) {
    const long long p = chi.p();
    const long long m = chi.modulus();
    for (int b = 0; b <= chi.level(); ++b) {
        bool trivial = true;
        const long long pb = ipow(p, b);
        for (long long u = 1; u < m && trivial; u += pb)
            if (std::gcd(u, p) == 1 && !(chi.unit(u) == UnitValue::one())) trivial = false;
        if (trivial) return b;
    }
    return chi.level();
}

}  // namespace

TEST_CASE("find_generator small cases") {
    CHECK(find_generator(3, 2) == 2);  // order of 2 mod 9 is 6
    CHECK(find_generator(5, 1) == 2);
    CHECK(find_generator(3, 1) == 2);
    CHECK_THROWS_AS(find_generator(2, 3), unsupported_modulus_error);
    // returned generator really has full order
    for (long long p : {3LL, 5LL, 7LL})
        for (int a = 1; a <= 3; ++a) {
            const long long g = find_generator(p, a);
            const long long m = ipow(p, a);
            const long long phi = phi_prime_power(p, a);
            long long x = g;
            long long order = 1;
            while (x != 1) {
                x = mul_mod(x, g, m);
                ++order;
            }
            REQUIRE(order == phi);
        }
}

TEST_CASE("enumerate_primitive counts and conductors") {
    CHECK(enumerate_primitive(3, 2).size() == 4);   // phi(9) - phi(3)
    CHECK(enumerate_primitive(3, 1).size() == 1);
    CHECK(enumerate_primitive(5, 2).size() == 16);  // phi(25) - phi(5)
    for (const auto& chi : enumerate_primitive(3, 2)) {
        CHECK(chi.conductor() == 9);
        CHECK(conductor_exponent_brute(chi) == 2);
    }
    // deterministic ascending order
    const auto prim = enumerate_primitive(5, 2);
    for (size_t i = 1; i < prim.size(); ++i) REQUIRE(prim[i - 1].index() < prim[i].index());
}

TEST_CASE("char_eval basics") {
    const DirichletCharacter principal9 = make_character(3, 2, 0);
    CHECK(principal9.value(3) == cx(0.0));
    CHECK(principal9.value(1) == cx(1.0));
    const DirichletCharacter chi = make_character(3, 2, 1);
    CHECK(chi.value(1) == cx(1.0));
    // chi(4): dlog_2(4) = 2, so e^{2 pi i 2/6}
    const cx expected = std::exp(cx(0.0, two_pi * 2.0 / 6.0));
    CHECK(std::abs(chi.value(4) - expected) < 1e-15);
    // |chi(n)| = 1 on units, 0 elsewhere; complete multiplicativity
    for (long long m = 1; m < 60; ++m)
        for (long long n = 1; n < 60; ++n) {
            const cx prod = chi.value(m) * chi.value(n);
            REQUIRE(std::abs(chi.value(m * n) - prod) < 1e-13);
        }
}

TEST_CASE("conductor of characters and products") {
    CHECK(make_character(3, 2, 0).conductor() == 1);  // principal mod 9
    const LocalCharacter c9(3, 2, 1);
    const LocalCharacter c3_lifted(3, 2, 3);  // index 3 mod 9: conductor 3
    CHECK(c9.conductor() == 9);
    CHECK(c3_lifted.conductor() == 3);
    CHECK(conductor_exponent_brute(c3_lifted) == 1);

    // coprime moduli multiply
    const DirichletCharacter a = make_character(3, 1, 1);
    const DirichletCharacter b = make_character(5, 1, 1);
    CHECK(product(a, b).conductor() == 15);

    // chi * conj(chi) is principal of conductor 1
    const DirichletCharacter chi = make_character(3, 2, 1);
    CHECK(product(chi, chi.conj()).conductor() == 1);
    CHECK(product(chi, chi.conj()).is_principal());

    // opposite indices mod 9 cancel to conductor 1
    const DirichletCharacter b1 = make_character(3, 2, 1);
    const DirichletCharacter b5 = make_character(3, 2, 5);
    CHECK(product(b1, b5).conductor() == 1);

    // conductor-9 x conductor-3 (lifted) keeps conductor 9, brute-forced
    const DirichletCharacter lift3 = make_character(3, 2, 3);
    const auto prod9 = product(chi, lift3);
    CHECK(prod9.conductor() == 9);
    CHECK(conductor_exponent_brute(prod9.locals()[0]) == 2);

    // product respects pointwise evaluation on units of the lcm modulus
    const DirichletCharacter x = make_character(3, 2, 1);
    const DirichletCharacter y = make_character(3, 3, 5);
    const DirichletCharacter xy = product(x, y);
    for (long long n = 1; n < 54; ++n) {
        const cx lhs = xy.value(n);
        const cx rhs = x.value(n) * y.value(n);
        REQUIRE(std::abs(lhs - rhs) < 1e-13);
    }
}

TEST_CASE("primitive_char_sum divisor formula") {
    CHECK(primitive_char_sum(1, 3, 2) == 4);
    CHECK(primitive_char_sum(4, 3, 2) == -2);
    CHECK(primitive_char_sum(2, 3, 2) == 0);
    CHECK_THROWS_AS(primitive_char_sum(3, 3, 2), validation_error);

    // vs brute force everywhere it applies, for m = p^a <= 243
    for (long long p : {3LL, 5LL, 7LL})
        for (int a = 1; ipow(p, a) <= 243; ++a) {
            const long long m = ipow(p, a);
            const auto prim = enumerate_primitive(p, a);
            for (long long n = 1; n < m; ++n) {
                if (std::gcd(n, p) != 1) continue;
                CompensatedComplex acc;
                for (const auto& chi : prim) acc.add(chi.value(n));
                const cx brute = acc.value();
                REQUIRE(std::abs(brute.imag()) < 1e-9);
                REQUIRE(std::abs(brute - cx(double(primitive_char_sum(n, p, a)))) < 1e-9);
            }
        }
}

TEST_CASE("full orthogonality over all characters mod m") {
    for (long long p : {3LL, 7LL}) {
        const int a = 2;
        const long long m = ipow(p, a);
        const long long phi = phi_prime_power(p, a);
        for (long long n = 1; n < m; ++n) {
            if (std::gcd(n, m) != 1) continue;
            CompensatedComplex acc;
            for (long long j = 0; j < phi; ++j) acc.add(LocalCharacter(p, a, j).value(n));
            const cx expected(n == 1 ? double(phi) : 0.0);
            REQUIRE(std::abs(acc.value() - expected) < 1e-9);
        }
    }
}

TEST_CASE("gauss sums") {
    // tau_0 = 0 for non-principal characters mod 9
    for (long long j = 1; j < 6; ++j)
        CHECK(std::abs(gauss_sum(make_character(3, 2, j), 0)) < 1e-10);
    // |tau_1| = 3 for primitive chi mod 9
    for (const auto& lc : enumerate_primitive(3, 2))
        CHECK(std::abs(std::abs(gauss_sum(DirichletCharacter({lc}), 1)) - 3.0) < 1e-10);
    // tau_h(principal mod 3) = -1 when 3 does not divide h
    for (long long h : {1LL, 2LL, 4LL, 7LL})
        CHECK(std::abs(gauss_sum(make_character(3, 1, 0), h) - cx(-1.0)) < 1e-12);
}

TEST_CASE("all_gauss_sums: FFT vs naive, Parseval, primitive modulus") {
    for (long long j = 0; j < 18; ++j) {
        const DirichletCharacter chi = make_character(3, 3, j);
        const auto fast = all_gauss_sums(chi);
        REQUIRE(fast.size() == 27);
        CompensatedReal power;
        for (long long h = 0; h < 27; ++h) {
            REQUIRE(std::abs(fast[size_t(h)] - gauss_sum(chi, h)) < 1e-8);
            power.add(std::norm(fast[size_t(h)]));
        }
        // Parseval: sum |tau_h|^2 = M sum |chi(r)|^2 = M phi(M)
        CHECK(power.value() == Catch::Approx(27.0 * 18.0).margin(1e-6));
        if (j != 0 && j % 3 != 0) {
            // primitive: |tau_h| = sqrt(M) for p not dividing h
            CHECK(std::abs(fast[1]) == Catch::Approx(std::sqrt(27.0)).margin(1e-9));
            CHECK(std::abs(fast[0]) < 1e-10);
        }
    }
}

TEST_CASE("unit values stay exact under products") {
    const UnitValue a = UnitValue::turn(1, 6);
    const UnitValue b = UnitValue::turn(5, 6);
    CHECK((a * b) == UnitValue::one());
    CHECK(a.conj() == b);
    CHECK((UnitValue::zero() * a).is_zero);
}
