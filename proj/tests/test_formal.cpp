#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "arith/errors.hpp"
#include "arith/formal.hpp"

using namespace arith;

TEST_CASE("logarithm and exponential coefficients invert each other") {
    Tower T(2, {1});
    // q = 2, n = 2, full-rank module: log = X + X^4/t + X^16/t^2 + ...
    auto M = make_formal_module(T, FormalKind::full_power, 1, 1, 2);
    auto c = formal_log_coeffs(M, 20);
    REQUIRE(c.size() == 3);  // degrees 1, 4, 16
    CHECK(ts_valuation(c[1]) == Rat(-1));
    CHECK(ts_valuation(c[2]) == Rat(-2));
    auto e = formal_exp_coeffs(M, 20);
    // termwise inversion: sum_{i+j=k} c_i e_j^{q^{is}} = 0 for k = 1, 2
    for (std::size_t k = 1; k < c.size(); ++k) {
        TruncSeries acc = ts_zero(T, 1, M.coeff_cap);
        for (std::size_t i = 0; i <= k; ++i)
            acc = ts_add(acc, ts_mul(c[i], ts_frobenius(e[k - i], 2 * i)));
        CHECK(ts_is_zero(acc));
    }

    // alternating module, n = 3 (odd exponent keeps the sign positive in
    // char 2 anyway); log = X + X^2/t + X^4/t^2 + X^8/t^3 at bound 8
    auto W = make_formal_module(T, FormalKind::alt_power, 1, 1, 3);
    auto cw = formal_log_coeffs(W, 8);
    CHECK(cw.size() == 4);
    CHECK(ts_valuation(cw[3]) == Rat(-3));
}

TEST_CASE("addition law is the plain sum in residual characteristic") {
    Tower T(2, {1});
    auto M = make_formal_module(T, FormalKind::full_power, 1, 1, 2);
    auto rep = formal_add(M, 4);
    CHECK(rep.linear_sections);
    CHECK(rep.symmetric);
    CHECK(rep.near_additive);
    CHECK(rep.threshold == 4);
    // over a characteristic-2 coefficient ring the law collapses exactly
    CHECK(rep.first_mixed_degree == -1);
    CHECK(rep.F.terms.size() == 2);

    auto W = make_formal_module(T, FormalKind::alt_power, 1, 1, 2);
    auto rw = formal_add(W, 2);
    CHECK(rw.linear_sections);
    CHECK(rw.near_additive);
    CHECK(rw.threshold == 2);
    // the coefficient of XY vanishes
    auto cxy = bi_coeff(rw.F, 1, 1, Rat(3));
    CHECK(ts_is_zero(cxy));

    // evaluation agrees with the plain sum
    auto x = ts_uniformizer(T, 1, Rat(5));
    auto y = ts_monomial(T, 1, T.one(1), Rat(2), Rat(5));
    auto s = bi_eval(rep.F, x, y);
    CHECK(ts_agree(s, ts_truncate(ts_add(x, y), s.cap)));

    CHECK_THROWS_AS(formal_add(M, 1000), BudgetError);
    CHECK_THROWS_AS(formal_add(M, 0), BudgetError);
}

TEST_CASE("base module: uniformizer action intertwines the logarithm") {
    Tower T(2, {1});
    // n = 2: pi = t^{1/2}, [pi]X = pi X + X^2
    auto M = make_formal_module(T, FormalKind::base, 1, 1, 2, Rat(8));
    auto c = formal_log_coeffs(M, 8);
    REQUIRE(c.size() >= 3);
    // l_1 = 1/(pi - pi^2) has valuation -1/2
    CHECK(ts_valuation(c[1]) == Rat(-1, 2));
    // log([pi] x) = pi log(x) at a sample point
    auto x = ts_monomial(T, 1, T.one(1), Rat(1, 4), Rat(8));
    auto eval_log = [&](const TruncSeries& v) {
        TruncSeries acc = ts_zero(T, 1, Rat(8));
        long long d = 1;
        for (const auto& ci : c) {
            acc = ts_add(acc, ts_mul(ci, ts_pow(v, d)));
            d *= 2;
        }
        return acc;
    };
    auto lhs = eval_log(formal_apply_pi(M, x));
    auto rhs = ts_mul(M.pi, eval_log(x));
    // both sides drop the logarithm's tail starting with l_4 X^{16}; the first
    // uncompensated term is l_3 x^{16} at valuation -3/2 + 4 = 5/2
    CHECK(ts_congruent_above(lhs, rhs, Rat(2)));
    CHECK_FALSE(ts_agree(lhs, ts_truncate(rhs, lhs.cap)));

    auto rb = formal_add(M, 4);
    CHECK(rb.linear_sections);
    CHECK(rb.near_additive);
}

TEST_CASE("alternating determinant for two variables") {
    Tower T(2, {1});
    auto x1 = ts_monomial(T, 1, T.one(1), Rat(1, 2), Rat(4));
    auto x2 = ts_monomial(T, 1, T.one(1), Rat(1, 4), Rat(4));
    auto d = alt_qdet({x1, x2}, 1);
    // torsion-point valuations make the determinant a uniformizer of the
    // next level: v = 1/(q-1) = 1
    CHECK(ts_valuation(d) == Rat(1));
    // the index tuples (1,0) and (-1,2) produce the same monomial here and
    // cancel in characteristic 2, so only the X1 X2^2 digit survives
    auto naive = ts_add(ts_mul(x1, ts_mul(x2, x2)),
                        ts_mul(ts_mul(x1, x1), x2));
    CHECK(!T.is_zero(ts_coeff(naive, Rat(5, 4))));
    CHECK(T.is_zero(ts_coeff(d, Rat(5, 4))));
    CHECK(d.terms.size() == 1);
    // the fractional-power tuples cost precision: X1 is only known below its
    // cap, so X1^{1/2} X2^{q^2} is only known below cap/2 + 1
    CHECK(d.cap == Rat(3));

    // the full index set and its signs
    // (0,1), (1,0), (-1,2), (2,-1), (-2,3) sit below the cutoff
    auto tms = qdet_terms({Rat(1, 2), Rat(1, 4)}, 2, Rat(3));
    REQUIRE(tms.size() == 5);
    for (const auto& tm : tms) {
        CHECK(tm.m[0] + tm.m[1] == 1);
        CHECK(((tm.m[0] - tm.m[1]) % 2 + 2) % 2 == 1);
        CHECK(tm.sign == (((tm.m[0] % 2) + 2) % 2 == 0 ? 1 : -1));
    }
}

TEST_CASE("alternating determinant for three variables") {
    Tower T(2, {1});
    std::vector<TruncSeries> X;
    for (int i = 0; i < 3; ++i)
        X.push_back(
            ts_monomial(T, 1, T.one(1), Rat(1, 3 * (1 << i)), Rat(4)));
    auto d = alt_qdet(X, 1);
    // the identity tuple contributes 1/3 + 2/6 + 4/12 = 1, every other
    // tuple strictly more
    CHECK(ts_valuation(d) == Rat(1));
    // three distinct tuples produce monomials at 7/6 -- (0,2,1), (1,0,2)
    // and (-1,1,3) -- so the digit survives in characteristic 2
    CHECK(!T.is_zero(ts_coeff(d, Rat(7, 6))));
    // direct expansion over the enumerated index set agrees
    TruncSeries direct = ts_zero(T, 1, d.cap);
    for (const auto& tm : qdet_terms({Rat(1, 3), Rat(1, 6), Rat(1, 12)}, 2,
                                     d.cap)) {
        TruncSeries t = ts_constant(T, 1, T.scalar(1, tm.sign), Rat(1000));
        for (int i = 0; i < 3; ++i)
            t = ts_mul(t, ts_frobenius(X[i], tm.m[i]));
        direct = ts_add(direct, ts_truncate(t, d.cap));
    }
    CHECK(ts_agree(d, ts_truncate(direct, d.cap)));

    CHECK_THROWS_AS(alt_qdet(X, 1, 10), BudgetError);
}

TEST_CASE("plain and folded determinants agree above the mixing bound") {
    Tower T(2, {1});
    auto x1 = ts_monomial(T, 1, T.one(1), Rat(1, 2), Rat(4));
    auto x2 = ts_monomial(T, 1, T.one(1), Rat(1, 4), Rat(4));
    auto rep = delta_eval({x1, x2}, 1);
    CHECK(rep.hypotheses_ok);
    CHECK(rep.bound == Rat(3, 2));
    CHECK(rep.congruent);
    CHECK(ts_agree(rep.plain, ts_truncate(rep.folded, rep.plain.cap)));

    // violating the valuation hypotheses is reported, not asserted
    auto bad = ts_monomial(T, 1, T.one(1), Rat(1, 100), Rat(4));
    auto rb = delta_eval({bad, x2}, 1);
    CHECK_FALSE(rb.hypotheses_ok);

    std::vector<TruncSeries> five(5, x1);
    CHECK_THROWS_AS(delta_eval(five, 1), std::invalid_argument);
}
