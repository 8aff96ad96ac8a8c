#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "arith/errors.hpp"
#include "arith/formal.hpp"
#include "arith/series.hpp"
#include "arith/tower.hpp"

using namespace arith;

namespace {

LocalChart make_chart(long long p, long long f, long long e, long long np) {
    ChartConfig cfg;
    cfg.ps = ParamSet::make(p, f, e, np);
    if (cfg.levels <= (int)cfg.ps.n) cfg.levels = (int)cfg.ps.n + 1;
    return LocalChart(cfg);
}

// Expected valuation of the j-th torsion point: 1/(n q^{j-1}(q-1)).
Rat tors_val(const ParamSet& ps, int j) {
    long long d = ps.n * (ps.q - 1);
    for (int k = 1; k < j; ++k) d *= ps.q;
    return Rat(1, d);
}

// Multiply one coordinate by a unit 1 + (monomial at valuation `at`).
LocalChart::Point perturb(const LocalChart& C, LocalChart::Point P,
                          std::size_t idx, Rat at) {
    const Tower& T = C.tower();
    TruncSeries u =
        ts_add(ts_constant(T, C.coeff_deg(), T.one(C.coeff_deg()), Rat(3)),
               ts_monomial(T, C.coeff_deg(), T.one(C.coeff_deg()), at, Rat(3)));
    P.X[idx] = ts_mul(P.X[idx], u);
    return P;
}

}  // namespace

TEST_CASE("chart valuations are the exact closed forms") {
    struct Cfg { long long p, f, e, np; };
    for (Cfg c : {Cfg{2, 1, 1, 1}, Cfg{2, 2, 1, 1}}) {
        CAPTURE(c.f);
        auto C = make_chart(c.p, c.f, c.e, c.np);
        const auto& ps = C.params();
        CHECK(ts_valuation(C.pi()) == Rat(1, ps.n));
        for (int j = 1; j <= C.config().levels; ++j)
            CHECK(ts_valuation(C.torsion(j)) == tors_val(ps, j));
        for (int i = 1; i <= (int)ps.n; ++i) {
            CHECK(ts_valuation(C.limit_coord(i)) == tors_val(ps, i));
            CHECK(ts_valuation(C.shifted_coord(i)) == tors_val(ps, i));
        }
        CHECK(ts_valuation(C.eta()) == Rat(1, ps.n));
        CHECK(ts_valuation(C.target()) == Rat(1, ps.q - 1));
        long long pe = ipow(ps.p, ps.e);
        CHECK(ts_valuation(C.theta()) == Rat(pe - 1, ps.n * pe * pe));
        CHECK(ts_valuation(C.lambda()) ==
              Rat(1, ps.n) * (Rat(1) - Rat(1, ps.q * pe)));
        CHECK(ts_valuation(C.center_coord((int)ps.n)) == tors_val(ps, (int)ps.n));
        // fractional roots of eta used by the coordinate change
        CHECK(ts_valuation(C.eta_sqrt()) == Rat(1, 2 * ps.n));
        CHECK(ts_valuation(C.eta_root_e1()) == Rat(1, ps.n * (pe + 1)));
    }
}

TEST_CASE("chart equations hold to the advertised precision") {
    for (long long f : {1, 2}) {
        CAPTURE(f);
        auto C = make_chart(2, f, 1, 1);
        auto rep = C.validate();
        CHECK(rep.torsion_valuations);
        CHECK(rep.torsion_residuals);
        CHECK(rep.limit_valuations);
        CHECK(rep.limit_coherence);
        CHECK(rep.limit_stable);
        CHECK(rep.eta_valuation);
        CHECK(rep.target_valuation);
        CHECK(rep.theta_valuation);
        CHECK(rep.lambda_valuation);
        CHECK(rep.theta_residual);
        CHECK(rep.lambda_residual);
        // the two congruences are checked as far as the series caps reach;
        // no digit inside the window may differ
        CHECK(rep.det_congruence);
        CHECK(rep.center_congruence);
        CHECK(rep.center_residual);
        CHECK(rep.det_achieved > Rat(0));
        CHECK(rep.center_achieved > Rat(0));
    }
    // frozen precision windows for the default configuration
    auto rep2 = make_chart(2, 1, 1, 1).validate();
    CHECK(rep2.det_achieved == Rat(38229, 32768));
    CHECK(rep2.center_achieved == Rat(21845, 65536));
    CHECK(rep2.center_bound == Rat(3, 4));
    auto rep4 = make_chart(2, 2, 1, 1).validate();
    CHECK(rep4.det_achieved == Rat(49151, 98304));
    CHECK(rep4.center_achieved == Rat(32767, 393216));
    CHECK(rep4.center_bound == Rat(13, 24));
}

TEST_CASE("distinguished point lies on the fiber and reduces correctly") {
    for (long long f : {1, 2}) {
        CAPTURE(f);
        auto C = make_chart(2, f, 1, 1);
        auto P = C.base_point();
        CHECK(C.member(P));
        auto rec = C.coords(P);
        CHECK(rec.chain_N == 1);  // gcd chain for (f, e) ends in one step
        CHECK(rec.z_nonneg);
        CHECK(rec.y_congruent);
        CHECK((int)rec.s.size() == 1);
        CHECK((int)rec.Ycap.size() == 1);
        CHECK(rec.y_small.empty());  // n = 2: only the top coordinate remains
        auto red = C.reduce(P);
        CHECK(red.residual_positive);
        CHECK(red.on_variety);
    }
}

TEST_CASE("sampled fiber points satisfy membership and reduce to the variety") {
    for (long long f : {1, 2}) {
        CAPTURE(f);
        auto C = make_chart(2, f, 1, 1);
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            CAPTURE(seed);
            auto P = C.sample_point(seed);
            CHECK(C.member(P));
            auto rec = C.coords(P);
            CHECK(rec.z_nonneg);
            CHECK(rec.y_congruent);
            auto red = C.reduce(P);
            CHECK(red.residual_positive);
            CHECK(red.on_variety);
        }
        // determinism: the same seed reproduces the same point
        auto A = C.sample_point(7);
        auto B = C.sample_point(7);
        REQUIRE(A.X.size() == B.X.size());
        for (std::size_t i = 0; i < A.X.size(); ++i)
            CHECK(ts_agree(A.X[i], B.X[i]));
    }
}

TEST_CASE("points violating the membership bounds are rejected loudly") {
    for (long long f : {1, 2}) {
        CAPTURE(f);
        auto C = make_chart(2, f, 1, 1);
        const auto& ps = C.params();
        // a visible digit below the tail bound on the last coordinate
        auto Q = perturb(C, C.base_point(), ps.n - 1, Rat(1, 4 * ps.n * ps.q));
        CHECK_FALSE(C.member(Q));
        CHECK_THROWS_AS(C.coords(Q), VerifyError);
        CHECK_THROWS_AS(C.reduce(Q), VerifyError);
    }
}

TEST_CASE("four-coordinate chart: valuations, congruences, reduction") {
    auto C = make_chart(2, 1, 2, 1);  // q = 2, n = 4
    const auto& ps = C.params();
    REQUIRE(ps.n == 4);
    for (int i = 1; i <= 4; ++i)
        CHECK(ts_valuation(C.limit_coord(i)) == tors_val(ps, i));
    CHECK(ts_valuation(C.theta()) == Rat(3, 64));
    CHECK(ts_valuation(C.lambda()) == Rat(7, 32));
    auto rep = C.validate();
    CHECK(rep.torsion_valuations);
    CHECK(rep.limit_valuations);
    CHECK(rep.limit_coherence);
    CHECK(rep.theta_residual);
    CHECK(rep.lambda_residual);
    CHECK(rep.det_congruence);
    CHECK(rep.center_congruence);
    CHECK(rep.center_residual);
    CHECK(rep.center_bound == Rat(3, 32));
    auto P = C.base_point();
    CHECK(C.member(P));
    auto rec = C.coords(P);
    CHECK(rec.chain_N == 2);  // gcd chain (1, 2) needs two steps
    CHECK(rec.chain_m == std::vector<long long>{1, 2, 1});
    CHECK((int)rec.s.size() == 3);
    CHECK((int)rec.y_small.size() == 2);
    CHECK(rec.z_nonneg);
    CHECK(rec.y_congruent);
    auto red = C.reduce(P);
    CHECK(red.residual_positive);
    CHECK(red.on_variety);
    CHECK((int)red.ybar_small.size() == 2);
}

TEST_CASE("limit-point valuations satisfy the mixed-determinant congruence") {
    // the chart's limit coordinates carry caps just below the mixing bound,
    // so the congruence is decided on exact monomial representatives at the
    // same valuations; the chart contributes the expected determinant value
    auto C = make_chart(2, 1, 1, 1);
    const Tower& T = C.tower();
    auto x1 = ts_monomial(T, 1, T.one(1),
                          ts_valuation(C.limit_coord(1)), Rat(4));
    auto x2 = ts_monomial(T, 1, T.one(1),
                          ts_valuation(C.limit_coord(2)), Rat(4));
    auto rep = delta_eval({x1, x2}, C.params().f);
    CHECK(rep.hypotheses_ok);
    CHECK(rep.bound == Rat(3, 2));
    CHECK(rep.congruent);
    CHECK(ts_valuation(rep.plain) == ts_valuation(C.target()));
}
