#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "arith/errors.hpp"
#include "arith/ffield.hpp"

using namespace arith;

TEST_CASE("parameter derivation") {
    auto ps = ParamSet::make(2, 1, 1, 1);
    CHECK(ps.q == 2);
    CHECK(ps.n == 2);
    CHECK(ps.m == 1);
    CHECK(ps.n1 == 1);

    ps = ParamSet::make(3, 1, 1, 2);
    CHECK(ps.q == 3);
    CHECK(ps.n == 6);
    CHECK(ps.m == 1);
    CHECK(ps.n1 == 2);

    ps = ParamSet::make(2, 2, 1, 1);
    CHECK(ps.q == 4);
    CHECK(ps.n == 2);
    CHECK(ps.m == 1);
    CHECK(ps.n1 == 1);

    CHECK_THROWS_AS(ParamSet::make(4, 1, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(ParamSet::make(2, 1, 1, 2), std::invalid_argument);
    CHECK_THROWS_AS(ParamSet::make(3, 1, 1, 3), std::invalid_argument);
}

TEST_CASE("tower construction and enumeration") {
    Tower T(2, {1, 2, 3, 6});
    CHECK(T.ambient_degree() == 6);
    CHECK(T.field_size(1) == 2);
    CHECK(T.field_size(2) == 4);
    CHECK(T.field_size(3) == 8);
    CHECK(T.field_size(6) == 64);

    // F_2 enumerates as [0, 1]
    CHECK(T.from_index(1, 0) == T.zero(1));
    CHECK(T.from_index(1, 1) == T.one(1));

    // F_4: 3 nonzero elements form a cyclic group
    std::set<std::uint32_t> cubes;
    for (std::uint64_t v = 1; v < 4; ++v)
        cubes.insert(T.pow(T.from_index(2, v), 3).v);
    CHECK(cubes == std::set<std::uint32_t>{1});

    // x -> x^3 is a bijection on F_8^* (gcd(3,7)=1)
    std::set<std::uint32_t> imgs;
    for (std::uint64_t v = 1; v < 8; ++v)
        imgs.insert(T.pow(T.from_index(3, v), 3).v);
    CHECK(imgs.size() == 7);
}

TEST_CASE("field axioms, small fields") {
    for (long long p : {2, 3}) {
        Tower T(p, {2});
        for (int d : {1, 2}) {
            auto one = T.one(d), zero = T.zero(d);
            std::uint64_t sz = T.field_size(d);
            for (std::uint64_t i = 0; i < sz; ++i) {
                auto a = T.from_index(d, i);
                CHECK(T.sub(zero, a) == T.neg(a));
                if (!T.is_zero(a)) {
                    CHECK(T.mul(a, T.inv(a)) == one);
                    CHECK(T.inv(T.inv(a)) == a);
                }
                for (std::uint64_t j = 0; j < sz; ++j) {
                    auto b = T.from_index(d, j);
                    CHECK(T.mul(a, b) == T.mul(b, a));
                    CHECK(T.add(a, b) == T.add(b, a));
                    for (std::uint64_t k = 0; k < sz; ++k) {
                        auto c = T.from_index(d, k);
                        CHECK(T.add(T.mul(a, c), T.mul(b, c)) ==
                              T.mul(T.add(b, a), c));
                    }
                }
            }
        }
    }
}

TEST_CASE("cross-field arithmetic is rejected") {
    Tower T(2, {1, 2});
    CHECK_THROWS_AS(T.add(T.one(1), T.one(2)), std::invalid_argument);
}

TEST_CASE("trace examples") {
    Tower T(2, {1, 2, 3, 6});
    // Tr_{F_4/F_2}(1) = 0
    CHECK(T.trace(T.one(2), 1) == T.zero(1));
    // Tr_{F_4/F_2}(w) = w + w^2 = 1 for a generator w of F_4^*
    FqElem w{2, 2};
    CHECK(T.mul(w, w) != w);  // w not in F_2
    CHECK(T.trace(w, 1) == T.one(1));
    // Tr_{F_8/F_2} vanishes on exactly 4 of the 8 elements
    int zero_count = 0;
    for (std::uint64_t v = 0; v < 8; ++v)
        if (T.is_zero(T.trace(T.from_index(3, v), 1))) ++zero_count;
    CHECK(zero_count == 4);
}

TEST_CASE("trace transitivity, random points") {
    for (long long p : {2, 3}) {
        Tower T(p, {2, 6});
        std::mt19937_64 rng(12345);
        for (int it = 0; it < 200; ++it) {
            auto x = T.from_index(6, rng() % T.field_size(6));
            CHECK(T.trace(x, 1) == T.trace(T.trace(x, 2), 1));
            CHECK(T.trace(x, 1) == T.trace(T.trace(x, 3), 1));
        }
    }
}

TEST_CASE("embedding compatibility") {
    for (long long p : {2, 3}) {
        Tower T(p, {12});
        for (int a : T.degrees())
            for (int b : T.degrees()) {
                if (b % a != 0) continue;
                for (std::uint64_t v = 0; v < T.field_size(a); ++v) {
                    auto x = T.from_index(a, v);
                    auto via = T.embed(T.embed(x, b), 12);
                    CHECK(via == T.embed(x, 12));
                    // ring homomorphism spot check
                    auto y = T.from_index(a, (v * 7 + 1) % T.field_size(a));
                    CHECK(T.embed(T.mul(x, y), b) ==
                          T.mul(T.embed(x, b), T.embed(y, b)));
                    CHECK(T.embed(T.add(x, y), b) ==
                          T.add(T.embed(x, b), T.embed(y, b)));
                }
            }
    }
}

TEST_CASE("artin-schreier fibers") {
    Tower T(2, {2});
    // t=0 over F_2, m=1 -> {0,1}
    auto sols = T.solve_artin_schreier(T.zero(1), 1);
    CHECK(sols.size() == 2);
    // t=1 over F_2, m=1 -> empty
    CHECK(T.solve_artin_schreier(T.one(1), 1).empty());
    // t=1 over F_4, m=1 -> the two elements outside F_2
    auto s4 = T.solve_artin_schreier(T.one(2), 1);
    REQUIRE(s4.size() == 2);
    for (auto z : s4) CHECK_FALSE(T.in_subfield(z, 1));
}

TEST_CASE("artin-schreier dichotomy over F_{p^{2m}}") {
    struct Cfg {
        long long p;
        int m;
    };
    for (Cfg c : {Cfg{2, 1}, Cfg{2, 2}, Cfg{3, 1}}) {
        if (ipow(c.p, c.m) > 8) continue;
        Tower T(c.p, {2 * c.m});
        std::uint64_t pm = std::uint64_t(ipow(c.p, c.m));
        for (std::uint64_t v = 0; v < T.field_size(2 * c.m); ++v) {
            auto t = T.from_index(2 * c.m, v);
            auto sols = T.solve_artin_schreier(t, c.m);
            bool tr0 = T.is_zero(T.trace(t, c.m));
            CHECK(sols.size() == (tr0 ? pm : 0));
        }
    }
}

TEST_CASE("frobenius fixes exactly the prime subfield") {
    for (long long p : {2, 3}) {
        for (int s : {2, 3, 4}) {
            Tower T(p, {s});
            int fixed = 0;
            for (std::uint64_t v = 0; v < T.field_size(s); ++v) {
                auto x = T.from_index(s, v);
                if (T.frob(x) == x) ++fixed;
                CHECK(T.frob(x, s) == x);
            }
            CHECK(fixed == p);
        }
    }
}

TEST_CASE("lexicographically least polynomials are stable") {
    CHECK(least_irreducible_poly(2, 1) == std::vector<int>{0, 1});
    CHECK(least_irreducible_poly(2, 2) == std::vector<int>{1, 1, 1});
    CHECK(least_irreducible_poly(3, 1) == std::vector<int>{0, 1});
    // x^2 + 1 is the least irreducible quadratic over F_3
    CHECK(least_irreducible_poly(3, 2) == std::vector<int>{1, 0, 1});
}

TEST_CASE("tower description serializes") {
    Tower T(2, {2});
    auto s = T.describe_json();
    CHECK(s.find("\"p\":2") != std::string::npos);
    CHECK(s.find("polynomials") != std::string::npos);
}
