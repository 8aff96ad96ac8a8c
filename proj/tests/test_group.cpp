#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>

#include "arith/errors.hpp"
#include "arith/group.hpp"

using namespace arith;

namespace {

std::vector<std::vector<FqElem>> rational_points(const Tower& T,
                                                 const VarietySpec& spec,
                                                 int deg) {
    std::vector<std::vector<FqElem>> pts;
    std::uint64_t fs = T.field_size(deg);
    int arity = spec.y_arity() + 1;
    std::uint64_t total = 1;
    for (int i = 0; i < arity; ++i) total *= fs;
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::uint64_t t = idx;
        std::vector<FqElem> P;
        for (int i = 0; i < arity; ++i) {
            P.push_back(T.from_index(deg, t % fs));
            t /= fs;
        }
        if (on_variety(T, spec, P)) pts.push_back(P);
    }
    return pts;
}

// sample points by solving the z-fiber over pseudorandom y-tuples
std::vector<std::vector<FqElem>> sampled_points(const Tower& T,
                                                const VarietySpec& spec,
                                                int deg, size_t want) {
    std::vector<std::vector<FqElem>> pts;
    std::mt19937_64 rng(777);
    std::uint64_t fs = T.field_size(deg);
    while (pts.size() < want) {
        std::vector<FqElem> y;
        for (int i = 0; i < spec.y_arity(); ++i)
            y.push_back(T.from_index(deg, rng() % fs));
        FqElem rhs = phi_eval(T, spec, y);
        for (FqElem z : T.solve_artin_schreier(rhs, int(spec.params.m))) {
            std::vector<FqElem> P{z};
            P.insert(P.end(), y.begin(), y.end());
            pts.push_back(std::move(P));
            if (pts.size() >= want) break;
        }
    }
    return pts;
}

}  // namespace

TEST_CASE("group order from exhaustive constraint solving") {
    QGroup G2(ParamSet::make(2, 1, 1, 1));
    CHECK(G2.elements().size() == 24);
    CHECK(G2.expected_order() == 24);

    QGroup G3(ParamSet::make(3, 1, 1, 2));
    CHECK(G3.elements().size() == 108);
    CHECK(G3.expected_order() == 108);

    QGroup G4(ParamSet::make(2, 1, 2, 1));
    CHECK(G4.elements().size() == 160);
}

TEST_CASE("membership validation") {
    QGroup G(ParamSet::make(2, 1, 1, 1));
    const Tower& T = G.tower();
    int d = G.coord_degree();
    CHECK(G.validate(T.one(d), T.zero(d), T.zero(d)) == G.identity());
    for (const QElt& g : G.elements()) CHECK_NOTHROW(G.validate(g.a, g.b, g.c));
    // a = 0 violates the first constraint
    CHECK_THROWS_AS(G.validate(T.zero(d), T.zero(d), T.zero(d)), VerifyError);
    // b = 1: c must solve c^2 + c + 1 = 0, i.e. lie outside the prime field
    int with_b1 = 0;
    for (const QElt& g : G.elements()) {
        if (!(g.b == T.one(d)) || !(g.a == T.one(d))) continue;
        ++with_b1;
        CHECK(!T.in_subfield(g.c, 1));
        CHECK(T.is_zero(T.add(T.add(T.mul(g.c, g.c), g.c), T.one(d))));
    }
    CHECK(with_b1 == 2);
}

TEST_CASE("group axioms, exhaustive for the smallest group") {
    QGroup G(ParamSet::make(2, 1, 1, 1));
    const auto& E = G.elements();
    auto contains = [&](const QElt& g) {
        for (const QElt& h : E)
            if (h == g) return true;
        return false;
    };
    for (const QElt& x : E) {
        CHECK(G.mul(x, G.identity()) == x);
        CHECK(G.mul(G.identity(), x) == x);
        QElt xi = G.inverse(x);
        CHECK(G.mul(x, xi) == G.identity());
        CHECK(G.mul(xi, x) == G.identity());
        for (const QElt& y : E) {
            QElt xy = G.mul(x, y);
            CHECK(contains(xy));
            CHECK_NOTHROW(G.validate(xy.a, xy.b, xy.c));
            for (const QElt& z : E)
                CHECK(G.mul(G.mul(x, y), z) == G.mul(x, G.mul(y, z)));
        }
    }
}

TEST_CASE("group axioms, sampled for a larger group") {
    QGroup G(ParamSet::make(3, 1, 1, 2));
    const auto& E = G.elements();
    for (const QElt& x : E) {
        QElt xi = G.inverse(x);
        CHECK(G.mul(x, xi) == G.identity());
    }
    std::mt19937 rng(12345);
    std::uniform_int_distribution<size_t> pick(0, E.size() - 1);
    for (int t = 0; t < 10000; ++t) {
        const QElt &x = E[pick(rng)], &y = E[pick(rng)], &z = E[pick(rng)];
        CHECK(G.mul(G.mul(x, y), z) == G.mul(x, G.mul(y, z)));
    }
}

TEST_CASE("torus subgroup and explicit c-component") {
    QGroup G(ParamSet::make(2, 1, 1, 1));
    const Tower& T = G.tower();
    int d = G.coord_degree();
    for (const QElt& x : G.elements())
        for (const QElt& y : G.elements()) {
            if (T.is_zero(x.b) && T.is_zero(x.c) && T.is_zero(y.b) &&
                T.is_zero(y.c)) {
                QElt xy = G.mul(x, y);
                CHECK(xy == QElt{T.mul(x.a, y.a), T.zero(d), T.zero(d)});
            }
            if (x.a == T.one(d) && y.a == T.one(d)) {
                // c-component is c1 + c2 + b1^2 b2 here
                FqElem want =
                    T.add(T.add(x.c, y.c), T.mul(T.mul(x.b, x.b), y.b));
                CHECK(G.mul(x, y).c == want);
            }
        }
}

TEST_CASE("bounded Z-window") {
    QGroup G(ParamSet::make(2, 1, 1, 1));
    QZElt a{G.identity(), 65}, b{G.identity(), 0};
    CHECK_THROWS_AS(G.qz_mul(a, b), std::invalid_argument);
    QZElt c{G.identity(), 40}, e{G.identity(), 40};
    CHECK_THROWS_AS(G.qz_mul(c, e), std::invalid_argument);
    CHECK(G.qz_mul({G.identity(), 3}, {G.identity(), -2}).l == 1);
}

TEST_CASE("action preserves the equation and fixes expected points") {
    auto ps = ParamSet::make(2, 1, 1, 1);
    QGroup G(ps);
    auto spec = VarietySpec::makeX(ps);
    int pdeg = std::lcm(G.coord_degree(), int(2 * ps.m));
    Tower T(ps.p, {pdeg, G.coord_degree(), int(ps.m)});
    auto pts = rational_points(T, spec, pdeg);
    CHECK(pts.size() == 8);
    for (const auto& P : pts) {
        CHECK(G.act({G.identity(), 0}, spec, T, P) == P);
        for (const QElt& g : G.elements())
            for (long long l : {0LL, 1LL, -1LL})
                CHECK_NOTHROW(G.act({g, l}, spec, T, P));
    }
    // central translate: (z, y) -> (z + c, y)
    for (const QElt& g : G.elements()) {
        if (!(g.a == T.one(G.coord_degree())) || !G.tower().is_zero(g.b))
            continue;
        FqElem ce = T.embed(g.c, pdeg);
        for (const auto& P : pts) {
            auto Q = G.act({g, 0}, spec, T, P);
            CHECK(Q[0] == T.add(P[0], ce));
            CHECK(Q[1] == P[1]);
        }
    }
    CHECK_THROWS_AS(
        G.act({G.identity(), 0}, spec, T,
              std::vector<FqElem>{T.one(pdeg), T.one(pdeg)}),
        VerifyError);
}

TEST_CASE("points are acted on from the right") {
    for (auto pr : {ParamSet::make(2, 1, 1, 1), ParamSet::make(3, 1, 1, 2)}) {
        QGroup G(pr);
        auto spec = VarietySpec::makeX(pr);
        int pdeg = std::lcm(G.coord_degree(), int(2 * pr.m));
        Tower T(pr.p, {pdeg, G.coord_degree(), int(pr.m)});
        auto pts = sampled_points(T, spec, pdeg, 12);
        size_t step = G.elements().size() > 30 ? 7 : 1;
        for (size_t i = 0; i < G.elements().size(); i += step)
            for (size_t j = 0; j < G.elements().size(); j += step)
                for (long long lx : {0LL, 1LL})
                    for (long long ly : {0LL, 2LL}) {
                        QZElt x{G.elements()[i], lx}, y{G.elements()[j], ly};
                        QZElt m = G.qz_mul(x, y);
                        for (const auto& P : pts)
                            CHECK(G.act(m, spec, T, P) ==
                                  G.act(y, spec, T, G.act(x, spec, T, P)));
                    }
    }
}

TEST_CASE("order-two-style automorphism on points") {
    auto ps = ParamSet::make(2, 1, 1, 3);
    auto spec = VarietySpec::makeX(ps);
    Tower T(2, {2});
    CHECK(eps1(ps) == 1);
    // all-zero y-block: z gains 1, every y_i becomes 1
    std::vector<FqElem> P(6, T.zero(2));
    auto Q = frob_automorphism(T, spec, P);
    CHECK(Q[0] == T.one(2));
    CHECK(Q[1] == T.zero(2));
    for (int i = 2; i < 6; ++i) CHECK(Q[i] == T.one(2));

    // iterating n times is the identity on every rational point
    auto pts = rational_points(T, spec, 2);
    CHECK(pts.size() == 1088);
    for (const auto& pt : pts) {
        auto R = pt;
        for (long long i = 0; i < ps.n; ++i) R = frob_automorphism(T, spec, R);
        CHECK(R == pt);
    }
}

TEST_CASE("automorphism in odd characteristic and its determinant") {
    auto ps = ParamSet::make(3, 1, 1, 2);
    auto spec = VarietySpec::makeX(ps);
    Tower T(3, {1});
    CHECK(eps1(ps) == 0);
    auto pts = rational_points(T, spec, 1);
    CHECK(pts.size() == 243);
    for (const auto& pt : pts) {
        auto R = pt;
        for (long long i = 0; i < ps.n; ++i) R = frob_automorphism(T, spec, R);
        CHECK(R == pt);
    }
    // n = 6: determinant of the linear part is (-1)^{n+1} = -1
    CHECK(frob_linear_det(T, ps) == T.neg(T.one(1)));
    // n = 3: determinant is (-1)^4 = 1
    Tower T3(3, {1});
    CHECK(frob_linear_det(T3, ParamSet::make(3, 1, 1, 1)) == T3.one(1));
}

TEST_CASE("fixed points of the twisted action") {
    auto ps = ParamSet::make(2, 1, 1, 1);
    QGroup G(ps);
    auto spec = VarietySpec::makeX(ps);

    // identity element: fixed points are the rational points at level k
    for (int k = 1; k <= 3; ++k) {
        auto rep = equivariant_lefschetz(G, G.identity(), spec, k);
        CHECK(rep.central);
        CHECK(rep.fixed_count == count_points(spec, k));
        CHECK(rep.has_prediction);
        CHECK(rep.match);
        CHECK(rep.search_deg == 2 * k);
    }

    // central translate by c = 1: count equals the signed character sum
    const Tower& T = G.tower();
    int d = G.coord_degree();
    QElt g = G.validate(T.one(d), T.zero(d), T.one(d));
    auto r1 = equivariant_lefschetz(G, g, spec, 1);
    CHECK(r1.central);
    CHECK(r1.fixed_count == 2);
    CHECK(r1.match);
    auto r2 = equivariant_lefschetz(G, g, spec, 2);
    CHECK(r2.fixed_count == 0);
    CHECK(r2.match);

    // non-central torus elements: frozen regression values
    for (const QElt& h : G.elements()) {
        if (h.a == T.one(d) || !T.is_zero(h.b) || !T.is_zero(h.c)) continue;
        auto rep = equivariant_lefschetz(G, h, spec, 1);
        CHECK_FALSE(rep.central);
        CHECK(rep.fixed_count == 2);
        CHECK(rep.search_deg == 6);
    }

    CHECK_THROWS_AS(equivariant_lefschetz(G, G.identity(), spec, 3, 100),
                    BudgetError);
}
