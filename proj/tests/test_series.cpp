#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "arith/errors.hpp"
#include "arith/series.hpp"

using namespace arith;

namespace {

// Pseudo-random series over F_{2^deg} with exponents in (1/den)Z below cap.
TruncSeries random_series(const Tower& T, int deg, long long den, Rat cap,
                          std::mt19937_64& rng) {
    TruncSeries a = ts_zero(T, deg, cap);
    long long lo = -2 * den, hi = boost::rational_cast<long long>(cap * den);
    std::uniform_int_distribution<long long> de(lo, hi - 1);
    std::uniform_int_distribution<std::uint64_t> dc(0, T.field_size(deg) - 1);
    for (int t = 0; t < 6; ++t) {
        TruncSeries m = ts_monomial(T, deg, T.from_index(deg, dc(rng)),
                                    Rat(de(rng), den), cap);
        a = ts_add(a, m);
    }
    return a;
}

}  // namespace

TEST_CASE("valuations are exact and additive") {
    Tower T(2, {1});
    Rat cap(5);
    auto h = ts_monomial(T, 1, T.one(1), Rat(1, 2), cap);   // t^{1/2}
    auto th = ts_monomial(T, 1, T.one(1), Rat(1, 3), cap);  // t^{1/3}
    auto prod = ts_mul(h, th);
    CHECK(ts_valuation(prod) == Rat(5, 6));
    CHECK(ts_valuation(ts_uniformizer(T, 1, cap)) == Rat(1));

    // v(x + y) >= min, with equality when the valuations differ
    auto s = ts_add(h, th);
    CHECK(ts_valuation(s) == Rat(1, 3));
    // char 2: x + x has no terms at all, so its valuation is only >= cap
    auto z = ts_add(h, h);
    CHECK(ts_is_zero(z));
    CHECK(ts_valuation(z) == cap);
}

TEST_CASE("exact roots divide exponents and double the denominator") {
    Tower T(2, {1});
    auto w = ts_uniformizer(T, 1, Rat(3));
    auto r = ts_root(w, 1);  // square root, q = 2
    CHECK(ts_valuation(r) == Rat(1, 2));
    CHECK(r.terms.size() == 1);
    CHECK(r.terms.begin()->first.denominator() == 2);
    CHECK(r.cap == Rat(3, 2));
    // root then frobenius returns the original up to the lowered cap
    auto back = ts_frobenius(r, 1);
    CHECK(ts_agree(back, ts_truncate(w, back.cap)));

    // coefficient Frobenius is inverted as well: over F_4, (c t)^{1/2}
    Tower T4(2, {2});
    FqElem g = T4.from_index(2, 2);
    auto m = ts_monomial(T4, 2, g, Rat(1), Rat(3));
    auto rm = ts_root(m, 1);
    CHECK(ts_leading(rm) == T4.frob(g, 1));  // c^{1/2} = c^2 in F_4
    CHECK(ts_agree(ts_mul(rm, rm), ts_truncate(m, Rat(3, 2))));
}

TEST_CASE("geometric-series inverse multiplies back to one") {
    Tower T(2, {1});
    Rat cap(6);
    auto one = ts_constant(T, 1, T.one(1), cap);
    auto a = ts_add(one, ts_uniformizer(T, 1, cap));  // 1 + t
    auto ai = ts_inv(a);
    // 1/(1+t) = 1 + t + t^2 + ... in char 2
    for (long long k = 0; k < 6; ++k) CHECK(ts_coeff(ai, Rat(k)) == T.one(1));
    CHECK(ts_agree(ts_mul(a, ai), ts_truncate(one, ai.cap)));

    // positive valuation: v(1/a) = -v(a), cap drops by 2 v(a)
    auto b = ts_shift(a, T.one(1), Rat(1, 2));
    auto bi = ts_inv(b);
    CHECK(ts_valuation(bi) == Rat(-1, 2));
    CHECK(bi.cap == b.cap - Rat(1));
    auto prod = ts_mul(b, bi);
    CHECK(ts_agree(prod, ts_truncate(one, prod.cap)));

    CHECK_THROWS_AS(ts_inv(ts_zero(T, 1, cap)), std::invalid_argument);
}

TEST_CASE("inverse and powers on pseudo-random series") {
    Tower T(2, {2});
    std::mt19937_64 rng(20240917);
    auto one = ts_constant(T, 2, T.one(2), Rat(4));
    for (int trial = 0; trial < 30; ++trial) {
        auto a = random_series(T, 2, 6, Rat(4), rng);
        if (ts_is_zero(a)) continue;
        auto ai = ts_inv(a);
        auto prod = ts_mul(a, ai);
        CHECK(ts_agree(prod, ts_truncate(one, prod.cap)));
        // a^3 * a^{-3} == 1 as far as both are known
        auto p3 = ts_mul(ts_pow(a, 3), ts_pow(a, -3));
        CHECK(ts_agree(p3, ts_truncate(one, p3.cap)));
    }
}

TEST_CASE("refinement stability: higher caps extend, never change") {
    Tower T(3, {1});
    auto mk = [&](Rat cap) {
        auto one = ts_constant(T, 1, T.one(1), cap);
        auto a = ts_add(one, ts_monomial(T, 1, T.scalar(1, 2), Rat(1, 3), cap));
        return ts_inv(a);
    };
    auto lo = mk(Rat(3));
    auto hi = mk(Rat(7));
    CHECK(hi.cap > lo.cap);
    CHECK(ts_agree(lo, ts_truncate(hi, lo.cap)));
}

TEST_CASE("exponent denominators are bounded") {
    Tower T(2, {1});
    auto w = ts_uniformizer(T, 1, Rat(3));
    // repeated square roots push the denominator past the ceiling
    CHECK_THROWS_AS(
        [&] {
            auto a = w;
            for (int i = 0; i < 40; ++i) a = ts_root(a, 1);
            return a;
        }(),
        BudgetError);
    CHECK_THROWS_AS(ts_monomial(T, 1, T.one(1), Rat(1, kMaxSeriesDenominator + 1),
                                Rat(3)),
                    BudgetError);
}

TEST_CASE("congruence testing respects the caps") {
    Tower T(2, {1});
    auto a = ts_uniformizer(T, 1, Rat(3));
    auto b = ts_add(a, ts_monomial(T, 1, T.one(1), Rat(2), Rat(3)));
    CHECK(ts_congruent_above(a, b, Rat(3, 2)));
    CHECK_FALSE(ts_congruent_above(a, b, Rat(2)));
    CHECK_FALSE(ts_congruent_above(a, b, Rat(5, 2)));
    CHECK_THROWS_AS(ts_congruent_above(a, b, Rat(3)), BudgetError);
}

TEST_CASE("compatible systems cohere across depths") {
    // q = 4 = 2^2 over F_4
    Tower T(2, {2});
    std::mt19937_64 rng(424242);
    for (int trial = 0; trial < 10; ++trial) {
        auto a = random_series(T, 2, 4, Rat(4), rng);
        if (ts_is_zero(a)) continue;
        CompatSystem x = cs_make(a, 2);
        auto c3 = cs_component(x, 3);
        auto c1 = cs_component(x, 1);
        // (x^{q^{-3}})^{q^2} = x^{q^{-1}} exactly, up to the lowered cap
        auto lifted = ts_frobenius(c3, 4);
        CHECK(ts_agree(lifted, ts_truncate(c1, lifted.cap)));
        // and each component q-th-powers to the one above it
        for (int j = 3; j >= 1; --j) {
            auto up = ts_frobenius(cs_component(x, j), 2);
            CHECK(ts_agree(up, ts_truncate(cs_component(x, j - 1), up.cap)));
        }
    }

    // sum and product rules act on representatives
    auto u = cs_make(ts_uniformizer(T, 2, Rat(3)), 2);
    auto v = cs_make(ts_constant(T, 2, T.one(2), Rat(3)), 2);
    auto s = cs_add(u, v);
    CHECK(ts_coeff(s.rep, Rat(0)) == T.one(2));
    CHECK(ts_coeff(s.rep, Rat(1)) == T.one(2));
    auto m = cs_mul(u, u);
    CHECK(ts_valuation(m.rep) == Rat(2));
    CHECK_THROWS_AS(cs_component(s, -1), std::invalid_argument);
}
