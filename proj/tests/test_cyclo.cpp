#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "arith/cyclo.hpp"

using namespace arith;

TEST_CASE("ring arithmetic basics") {
    // 1 + (-1) = 0 for p=2
    auto one2 = CycSum::integer(2, 1);
    CHECK(cyc_add(one2, cyc_neg(one2)).is_zero());

    // p=3: (1 + zeta)(1 + zeta^2) = 1
    auto a = cyc_add(CycSum::integer(3, 1), CycSum::zeta_pow(3, 1));
    auto b = cyc_add(CycSum::integer(3, 1), CycSum::zeta_pow(3, 2));
    CHECK(cyc_mul(a, b) == CycSum::integer(3, 1));

    // conj(zeta)*zeta = 1 for any p
    for (long long p : {2, 3, 5, 7}) {
        auto z = CycSum::zeta_pow(p, 1);
        CHECK(cyc_mul(cyc_conj(z), z) == CycSum::integer(p, 1));
        // all-roots sum vanishes
        auto s = CycSum::zero(p);
        for (long long k = 0; k < p; ++k) s = cyc_add(s, CycSum::zeta_pow(p, k));
        CHECK(s.is_zero());
    }

    CHECK_THROWS_AS(cyc_add(CycSum::zero(2), CycSum::zero(3)),
                    std::invalid_argument);
}

TEST_CASE("abs_square") {
    CHECK(abs_square(CycSum::integer(2, 1)).rational_value == 1);
    CHECK(abs_square(CycSum::integer(2, -2)).rational_value == 4);

    // p=3: |1 + 2 zeta|^2 = 3 at both embeddings
    auto a = cyc_add(CycSum::integer(3, 1),
                     cyc_mul(CycSum::integer(3, 2), CycSum::zeta_pow(3, 1)));
    auto rep = abs_square(a);
    REQUIRE(rep.embedding_values.size() == 2);
    for (auto v : rep.embedding_values) CHECK(std::abs(v - 3.0L) < 1e-9L);
    CHECK(rep.rational);
    CHECK(rep.rational_value == 3);
}

TEST_CASE("character values and additivity") {
    for (long long p : {2, 3}) {
        for (int m : {1, 2}) {
            if (ipow(p, m) > 16) continue;
            Tower T(p, {2 * m});
            for (std::uint64_t sv = 0; sv < T.field_size(m); ++sv) {
                AdditiveCharacter psi(T, m, T.from_index(m, sv));
                CHECK(psi.trivial() == (sv == 0));
                CHECK(psi.eval(T.zero(m)) == CycSum::integer(p, 1));
                for (std::uint64_t i = 0; i < T.field_size(m); ++i)
                    for (std::uint64_t j = 0; j < T.field_size(m); ++j) {
                        auto x = T.from_index(m, i), y = T.from_index(m, j);
                        CHECK(psi.eval(T.add(x, y)) ==
                              cyc_mul(psi.eval(x), psi.eval(y)));
                    }
            }
        }
    }
}

TEST_CASE("psi(1) = -1 for p=2, m=1") {
    Tower T(2, {2});
    AdditiveCharacter psi(T, 1, T.one(1));
    CHECK(psi.eval(T.one(1)) == CycSum::integer(2, -1));
    // x = 1 in F_4 has trace 0, so the value through the subfield is 1
    CHECK(psi.eval(T.trace(T.one(2), 1)) == CycSum::integer(2, 1));
}

TEST_CASE("character sums over the source field") {
    for (long long p : {2, 3}) {
        for (int m : {1, 2}) {
            if (ipow(p, m) > 16) continue;
            Tower T(p, {m});
            for (std::uint64_t sv = 0; sv < T.field_size(m); ++sv) {
                AdditiveCharacter psi(T, m, T.from_index(m, sv));
                auto s = CycSum::zero(p);
                for (std::uint64_t i = 0; i < T.field_size(m); ++i)
                    s = cyc_add(s, psi.eval(T.from_index(m, i)));
                if (psi.trivial())
                    CHECK(s == CycSum::integer(p, (long long)T.field_size(m)));
                else
                    CHECK(s.is_zero());
            }
        }
    }
}

TEST_CASE("quadratic gauss sum magnitude, odd p") {
    struct Cfg {
        long long p;
        int m;
    };
    for (Cfg c : {Cfg{3, 1}, Cfg{3, 2}, Cfg{5, 1}, Cfg{7, 1}}) {
        Tower T(c.p, {c.m});
        AdditiveCharacter psi(T, c.m, T.one(c.m));
        auto s = CycSum::zero(c.p);
        for (std::uint64_t i = 0; i < T.field_size(c.m); ++i) {
            auto x = T.from_index(c.m, i);
            s = cyc_add(s, psi.eval(T.mul(x, x)));
        }
        auto rep = abs_square(s);
        CHECK(rep.rational);
        CHECK(rep.rational_value == (long long)T.field_size(c.m));
        for (auto v : rep.embedding_values)
            CHECK(std::abs(v - (long double)T.field_size(c.m)) < 1e-9L);
    }
}

TEST_CASE("p=2 values are rational integers") {
    Tower T(2, {2});
    AdditiveCharacter psi(T, 2, T.from_index(2, 2));
    for (std::uint64_t i = 0; i < 4; ++i)
        CHECK(psi.eval(T.from_index(2, i)).is_rational());
}
