#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "arith/cocycle.hpp"
#include "arith/errors.hpp"

using namespace arith;

namespace {

LocalChart make_chart(long long p, long long f, long long e, long long np) {
    ChartConfig cfg;
    cfg.ps = ParamSet::make(p, f, e, np);
    if (cfg.levels <= (int)cfg.ps.n) cfg.levels = (int)cfg.ps.n + 1;
    return LocalChart(cfg);
}

}  // namespace

TEST_CASE("auxiliary tower: valuations, equations, normalizations") {
    struct Cfg { long long p, f, e, np; };
    for (Cfg c : {Cfg{2, 1, 1, 1}, Cfg{2, 2, 1, 1}, Cfg{2, 1, 2, 1}}) {
        CAPTURE(c.f);
        CAPTURE(c.e);
        auto C = make_chart(c.p, c.f, c.e, c.np);
        WeilSystem W(C);
        const auto& ps = C.params();
        long long pe = ipow(ps.p, ps.e);
        CHECK(ts_valuation(W.alpha()) == Rat(pe, ps.n * (pe + 1)));
        CHECK(ts_valuation(W.beta()) == Rat(-1, ps.n * pe * (pe + 1)));
        CHECK(ts_valuation(W.gamma()) ==
              Rat(-ipow(ps.p, ps.f - ps.m), ps.n * ps.q * pe));
        auto rep = W.validate();
        CHECK(rep.alpha_equation);
        CHECK(rep.alpha_normalized);
        CHECK(rep.beta_normalized);
        CHECK(rep.gamma_normalized);
        CHECK(rep.gamma_equation);
        // the defect of the truncated beta solve telescopes exactly
        CHECK(rep.beta_rate_ok);
        CHECK(rep.beta_residual == rep.beta_predicted);
        CHECK(rep.beta_residual < Rat(0));
    }
    // frozen solver windows for the default configuration
    auto C0 = make_chart(2, 1, 1, 1);
    WeilSystem W(C0);
    CHECK(W.beta_terms() == 5);
    CHECK(W.validate().beta_residual == Rat(-1, 3072));
}

TEST_CASE("every conjugate choice lands in the finite group") {
    struct Cfg { long long p, f, e, np; long long order; };
    for (Cfg c : {Cfg{2, 1, 1, 1, 24}, Cfg{2, 2, 1, 1, 24},
                  Cfg{2, 1, 2, 1, 160}}) {
        CAPTURE(c.f);
        CAPTURE(c.e);
        auto C = make_chart(c.p, c.f, c.e, c.np);
        WeilSystem W(C);
        auto all = W.enumerate_choices();
        CHECK((long long)all.size() == c.order);
        CHECK((long long)all.size() == W.qgroup().expected_order());
        const Tower& T = C.tower();
        for (const auto& ch : all) {
            // cocycle() itself asserts the images solve the equations and
            // that the residues satisfy the group membership
            auto co = W.cocycle(ch);
            CHECK(co.image.l == 0);
            CHECK(ts_coeff(co.a, Rat(0)) == ch.omega);
            CHECK(ts_coeff(co.b, Rat(0)) == T.mul(ch.omega, ch.shift));
            CHECK(ts_coeff(co.c, Rat(0)) == ch.kappa);
        }
    }
}

TEST_CASE("identity choice maps to the group identity") {
    auto C = make_chart(2, 1, 1, 1);
    WeilSystem W(C);
    auto co = W.cocycle(W.identity());
    CHECK(co.image.g == W.qgroup().identity());
    CHECK(co.image.l == 0);
    // a pure root-of-unity twist of alpha shows up as the a-coordinate
    for (const auto& ch : W.enumerate_choices()) {
        if (ch.omega == C.tower().one(C.coeff_deg())) continue;
        if (!C.tower().is_zero(ch.shift)) continue;
        auto tw = W.cocycle(ch);
        CHECK(tw.image.g.a == ch.omega);
        CHECK(C.tower().is_zero(tw.image.g.b));
        break;
    }
}

TEST_CASE("composition of choices multiplies the group images") {
    struct Cfg { long long p, f, e, np; int pairs; };
    for (Cfg c : {Cfg{2, 1, 1, 1, 50}, Cfg{2, 2, 1, 1, 10},
                  Cfg{2, 1, 2, 1, 10}}) {
        CAPTURE(c.f);
        CAPTURE(c.e);
        auto C = make_chart(c.p, c.f, c.e, c.np);
        WeilSystem W(C);
        for (int k = 1; k <= c.pairs; ++k) {
            CAPTURE(k);
            auto s = W.sample_choice(2 * k);
            auto t = W.sample_choice(2 * k + 1);
            auto lhs = W.cocycle(W.compose(s, t)).image;
            auto rhs =
                W.qgroup().qz_mul(W.cocycle(s).image, W.cocycle(t).image);
            CHECK(lhs.g == rhs.g);
            CHECK(lhs.l == rhs.l);
        }
        // composing with the identity is the identity map
        auto s = W.sample_choice(99);
        auto both = W.compose(W.identity(), s);
        CHECK(both.omega == s.omega);
        CHECK(both.shift == s.shift);
        CHECK(both.kappa == s.kappa);
        CHECK(both.l == s.l);
    }
}

TEST_CASE("inconsistent choices are rejected") {
    auto C = make_chart(2, 1, 1, 1);
    WeilSystem W(C);
    const Tower& T = C.tower();
    // a kappa off its translate set breaks the gamma equation
    auto bad = W.identity();
    bad.kappa = T.from_index(C.coeff_deg(), 2);  // not in the prime field
    CHECK_THROWS_AS(W.cocycle(bad), VerifyError);

    // larger field: elements outside the root-of-unity group exist
    auto C4 = make_chart(2, 1, 2, 1);
    WeilSystem W4(C4);
    const Tower& T4 = C4.tower();
    int d4 = C4.coeff_deg();
    FqElem notroot = T4.zero(d4);
    for (std::uint64_t v = 1; v < T4.field_size(d4); ++v) {
        FqElem x = T4.from_index(d4, v);
        if (!(T4.pow(x, 5) == T4.one(d4))) { notroot = x; break; }
    }
    REQUIRE(!T4.is_zero(notroot));
    auto badw = W4.identity();
    badw.omega = notroot;
    CHECK_THROWS_AS(W4.cocycle(badw), VerifyError);
}
