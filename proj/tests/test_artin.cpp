#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "elltwist/artin.hpp"

using namespace elltwist;

TEST_CASE("twist basics") {
    const ArtinRep rho({make_character(5, 1, 1)});
    // trivial twist is the identity
    const ArtinRep same = twist(rho, DirichletCharacter::trivial());
    CHECK(global_conductor(same) == 5);
    // conductor-27 twist of a conductor-5 character: 135
    const ArtinRep tw = twist(rho, make_character(3, 3, 1));
    CHECK(global_conductor(tw) == 135);
    // inverse twist returns to the start (values agree everywhere)
    const DirichletCharacter chi = make_character(3, 2, 1);
    const ArtinRep back = twist(twist(rho, chi), chi.conj());
    for (long long n = 1; n < 100; ++n)
        REQUIRE(std::abs(back.components()[0].value(n) - rho.components()[0].value(n)) < 1e-13);
}

TEST_CASE("local conductor exponents") {
    const ArtinRep rho({make_character(3, 2, 1), make_character(3, 1, 1)});
    CHECK(local_conductor_exponent(rho, 3) == 3);  // 2 + 1
    CHECK(local_conductor_exponent(ArtinRep({make_character(5, 1, 1)}), 3) == 0);
    const ArtinRep both({make_character(3, 1, 1), make_character(5, 1, 1)});
    CHECK(global_conductor(both) == 15);
}

TEST_CASE("lemma2 threshold and the regime above it") {
    const ArtinRep rho({make_character(3, 2, 1), make_character(3, 1, 1)});
    const TwistThreshold thr = lemma2_threshold(rho, 3);
    CHECK(thr.threshold == 3);
    const ArtinRep tw = twist(rho, make_character(3, 3, 1));
    CHECK(local_conductor_exponent(tw, 3) == 6);  // 3 * dim 2

    const ArtinRep r5({make_character(5, 1, 1)});
    CHECK(lemma2_threshold(r5, 3).threshold == 1);
    CHECK(local_conductor_exponent(twist(r5, make_character(3, 2, 1)), 3) == 2);
}

TEST_CASE("below the threshold a cancelling pair breaks the equality") {
    const DirichletCharacter chi9 = make_character(3, 2, 1);
    const ArtinRep rho({chi9, chi9.conj()});
    CHECK(lemma2_threshold(rho, 3).threshold == 3);
    // twist by the inverse of the first component: n_3(chi * chi9) = 0 there
    const ArtinRep tw = twist(rho, chi9.conj());
    CHECK(local_conductor_exponent(tw, 3) < 2 * 2);
}

TEST_CASE("lemma 2 across the internal suite, brute-force conductors") {
    const std::vector<DirichletCharacter> pool = {
        DirichletCharacter::trivial(), make_character(3, 1, 1), make_character(5, 1, 2),
        make_character(3, 2, 1), make_character(3, 3, 4)};
    std::vector<ArtinRep> reps;
    for (size_t i = 0; i < pool.size(); ++i)
        for (size_t j = i; j < pool.size(); ++j) {
            reps.push_back(ArtinRep({pool[i], pool[j]}));
            for (size_t k = j; k < pool.size(); ++k) {
                reps.push_back(ArtinRep({pool[i], pool[j], pool[k]}));
                reps.push_back(ArtinRep({pool[i], pool[j], pool[k], pool[(i + k) % pool.size()]}));
            }
        }
    for (const auto& rho : reps) {
        const int thr = lemma2_threshold(rho, 3).threshold;
        for (int b = thr; b <= thr + 1; ++b)
            for (long long idx : {1LL, 2LL}) {
                const ArtinRep tw = twist(rho, make_character(3, b, idx));
                // brute force: sum of per-component product conductor exponents
                int brute = 0;
                for (const auto& comp : tw.components()) brute += comp.conductor_exponent_at(3);
                REQUIRE(brute == b * rho.dim());
                REQUIRE(local_conductor_exponent(tw, 3) == b * rho.dim());
            }
    }
}

TEST_CASE("twisted conductor invariant under component reordering") {
    const DirichletCharacter a = make_character(3, 2, 1);
    const DirichletCharacter b = make_character(5, 1, 1);
    const DirichletCharacter chi = make_character(3, 3, 2);
    const ArtinRep r1({a, b});
    const ArtinRep r2({b, a});
    CHECK(global_conductor(twist(r1, chi)) == global_conductor(twist(r2, chi)));
}

TEST_CASE("dual") {
    // quadratic characters give a self-dual rep
    const ArtinRep quad({make_character(3, 1, 1), make_character(5, 1, 2)});
    const ArtinRep dd = dual(quad);
    for (long long n = 1; n < 60; ++n) {
        REQUIRE(std::abs(dd.components()[0].value(n) - quad.components()[0].value(n)) < 1e-13);
        REQUIRE(std::abs(dd.components()[1].value(n) - quad.components()[1].value(n)) < 1e-13);
    }
    // index negation mod 9
    const ArtinRep chi({make_character(3, 2, 1)});
    CHECK(dual(chi).components()[0].conductor_exponent_at(3) == 2);
    CHECK(std::abs(dual(chi).components()[0].value(2) - std::conj(chi.components()[0].value(2))) <
          1e-15);
    // dual(dual) = id, conductor preserved
    CHECK(global_conductor(dual(dual(chi))) == global_conductor(chi));
    // dual(twist(rho, chi)) = twist(dual(rho), conj(chi))
    const ArtinRep rho({make_character(5, 1, 1), make_character(3, 2, 1)});
    const DirichletCharacter tw_chi = make_character(3, 3, 1);
    const ArtinRep lhs = dual(twist(rho, tw_chi));
    const ArtinRep rhs = twist(dual(rho), tw_chi.conj());
    for (long long n = 1; n < 120; ++n) {
        CompensatedComplex sa, sb;
        for (const auto& c : lhs.components()) sa.add(c.value(n));
        for (const auto& c : rhs.components()) sb.add(c.value(n));
        REQUIRE(std::abs(sa.value() - sb.value()) < 1e-12);
    }
}

TEST_CASE("external tables: parse, validate, round-trip") {
    // chi_3 (+) conj(chi_3): local factor (1 - chi(q) T)^2 away from 3
    std::stringstream good;
    good << "dim 2\n"
         << "cutoff 20\n"
         << "threshold 3 2\n"
         << "cond 3 2\n"
         << "poly 3 1\n"
         << "poly 2 1 2 1\n"
         << "poly 5 1 2 1\n"
         << "poly 7 1 -2 1\n"
         << "poly 11 1 2 1\n"
         << "poly 13 1 -2 1\n"
         << "poly 17 1 2 1\n"
         << "poly 19 1 -2 1\n";
    const ArtinRep rho = ingest_external(good);
    CHECK(rho.dim() == 2);
    CHECK(local_conductor_exponent(rho, 3) == 2);
    CHECK(global_conductor(rho) == 9);
    CHECK(lemma2_threshold(rho, 3).threshold == 2);
    CHECK_THROWS_AS(lemma2_threshold(rho, 5), missing_data_error);

    // bit-exact round-trip
    std::stringstream out;
    write_external(out, rho.external());
    const ArtinRep back = ingest_external(out);
    CHECK(back.external().local_polys == rho.external().local_polys);
    CHECK(back.external().conductor_exponents == rho.external().conductor_exponents);

    // empty prime map, dim 1: the trivial representation
    std::stringstream triv;
    triv << "dim 1\ncutoff 10\n";
    const ArtinRep t = ingest_external(triv);
    CHECK(global_conductor(t) == 1);

    // degree too large at an unramified prime is rejected
    std::stringstream bad;
    bad << "dim 1\ncutoff 10\npoly 7 1 -1 2 3\n";
    CHECK_THROWS_AS(ingest_external(bad), validation_error);

    // parse errors carry line numbers
    std::stringstream syntax;
    syntax << "dim 1\npoly x y\n";
    try {
        ingest_external(syntax);
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.line == 2);
    }
}

TEST_CASE("external twist and dual rules") {
    std::stringstream src;
    src << "dim 1\ncutoff 10\nthreshold 3 1\n"
        << "poly 2 1 -1\npoly 5 1 -1\npoly 7 1 -1\n";
    const ArtinRep rho = ingest_external(src);
    // unramified twisting scales eigenvalues
    const ArtinRep tw = twist(rho, make_character(3, 2, 1));
    CHECK(local_conductor_exponent(tw, 3) == 2);
    const auto& poly5 = tw.external().local_polys.at(5);
    const cx chi5 = make_character(3, 2, 1).value(5);
    CHECK(std::abs(poly5[1] - (-chi5)) < 1e-15);
    // real tables are self-dual; the twisted (complex) table is not derivable
    CHECK_NOTHROW(dual(rho));
    CHECK_THROWS_AS(dual(tw), missing_data_error);
    // a twist the table cannot absorb
    CHECK_THROWS_AS(twist(rho, make_character(5, 1, 1)), validation_error);
}
