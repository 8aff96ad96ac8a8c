#include "arith/group.hpp"

#include <numeric>

#include "arith/errors.hpp"

namespace arith {

namespace {

long long mult_order(const Tower& T, FqElem a) {
    if (T.is_zero(a)) throw std::domain_error("order of zero");
    long long k = 1;
    FqElem x = a;
    while (!(x == T.one(a.deg))) {
        x = T.mul(x, a);
        ++k;
    }
    return k;
}

}  // namespace

long long eps1(const ParamSet& ps) { return ipow(ps.p, ps.e) == 2 ? 1 : 0; }

// nullptr when (a,b,c) satisfies the membership equations, else the name of
// the violated constraint
static const char* q_violation(const Tower& T, const ParamSet& ps, FqElem a,
                               FqElem b, FqElem c) {
    long long pe1 = ipow(ps.p, ps.e) + 1;
    if (!(T.pow(a, pe1) == T.one(a.deg))) return "a^{p^e+1} = 1";
    if (!(T.frob(b, 2 * ps.e) == T.neg(b))) return "b^{p^{2e}} + b = 0";
    FqElem lhs = T.add(T.sub(T.frob(c, ps.m), c), T.pow(b, pe1));
    if (!T.is_zero(lhs)) return "c^{p^m} - c + b^{p^e+1} = 0";
    return nullptr;
}

static QElt q_mul_in(const Tower& T, const ParamSet& ps, const QElt& x,
                     const QElt& y) {
    long long pe = ipow(ps.p, ps.e);
    QElt r;
    r.a = T.mul(x.a, y.a);
    r.b = T.add(T.mul(x.a, y.b), x.b);
    FqElem corr = T.zero(x.a.deg);
    FqElem base = T.mul(T.mul(x.a, T.pow(x.b, pe)), y.b);
    for (long long i = 0; i < ps.e / ps.m; ++i)
        corr = T.add(corr, T.frob(base, i * ps.m));
    r.c = T.add(T.add(x.c, y.c), corr);
    return r;
}

QGroup::QGroup(const ParamSet& ps) : ps_(ps) {
    long long d0 = ps.p == 2 ? std::lcm(ps.m, 2 * ps.e) : std::lcm(ps.m, 4 * ps.e);
    long long expected = expected_order();
    for (long long t : {1, 2, 3, 4, 6, 8, 12}) {
        long long deg = d0 * t;
        std::unique_ptr<Tower> T;
        try {
            T = std::make_unique<Tower>(ps.p, std::vector<int>{int(deg)});
        } catch (const BudgetError&) {
            break;
        } catch (const std::invalid_argument&) {
            break;
        }
        std::vector<QElt> elems;
        std::vector<FqElem> as, bs;
        for (std::uint64_t v = 1; v < T->field_size(int(deg)); ++v) {
            FqElem a = T->from_index(int(deg), v);
            if (T->pow(a, ipow(ps.p, ps.e) + 1) == T->one(int(deg)))
                as.push_back(a);
        }
        for (std::uint64_t v = 0; v < T->field_size(int(deg)); ++v) {
            FqElem b = T->from_index(int(deg), v);
            if (T->frob(b, 2 * ps.e) == T->neg(b)) bs.push_back(b);
        }
        for (FqElem b : bs) {
            auto cs = T->solve_artin_schreier(
                T->neg(T->pow(b, ipow(ps.p, ps.e) + 1)), int(ps.m));
            for (FqElem a : as)
                for (FqElem c : cs) elems.push_back({a, b, c});
        }
        if ((long long)elems.size() == expected) {
            deg_ = int(deg);
            tower_ = std::move(T);
            elements_ = std::move(elems);
            return;
        }
    }
    throw BudgetError("no rational field for the full group within size cap");
}

long long QGroup::expected_order() const {
    return (ipow(ps_.p, ps_.e) + 1) * ipow(ps_.p, 2 * ps_.e) * ipow(ps_.p, ps_.m);
}

QElt QGroup::identity() const {
    return {tower_->one(deg_), tower_->zero(deg_), tower_->zero(deg_)};
}

QElt QGroup::validate(FqElem a, FqElem b, FqElem c) const {
    if (a.deg != deg_ || b.deg != deg_ || c.deg != deg_)
        throw std::invalid_argument("coordinates must live in the group field");
    if (const char* viol = q_violation(*tower_, ps_, a, b, c))
        throw VerifyError(std::string("membership violated: ") + viol);
    return {a, b, c};
}

QElt QGroup::mul(const QElt& x, const QElt& y) const {
    return q_mul_in(*tower_, ps_, x, y);
}

QElt QGroup::inverse(const QElt& x) const {
    for (const QElt& y : elements_)
        if (mul(x, y) == identity()) return y;
    throw VerifyError("no inverse found (group closure broken)");
}

QZElt QGroup::qz_mul(const QZElt& x, const QZElt& y) const {
    if (std::llabs(x.l) > kMaxZWindow || std::llabs(y.l) > kMaxZWindow ||
        std::llabs(x.l + y.l) > kMaxZWindow)
        throw std::invalid_argument("Z-component outside the bounded window");
    // x.l acts on y.g coordinate-wise by the q^{-l}-power map
    auto tw = [&](FqElem v) { return tower_->frob(v, -ps_.f * x.l); };
    QElt yg{tw(y.g.a), tw(y.g.b), tw(y.g.c)};
    return {mul(x.g, yg), x.l + y.l};
}

FqElem QGroup::a_half_power(FqElem a) const {
    long long pe1 = ipow(ps_.p, ps_.e) + 1;
    if (ps_.p != 2) return tower_->pow(a, pe1 / 2);
    // p = 2: p^e+1 is odd, so mu_{p^e+1} has odd order and the unique square
    // root of a^{p^e+1} = 1 is 1.
    return tower_->one(a.deg);
}

std::vector<FqElem> QGroup::act(const QZElt& g, const VarietySpec& spec,
                                const Tower& PT, std::vector<FqElem> P) const {
    if (spec.kind != VarietySpec::Kind::X)
        throw std::invalid_argument("the group acts on the kind-X variety");
    if (std::llabs(g.l) > kMaxZWindow)
        throw std::invalid_argument("Z-component outside the bounded window");
    if (P.size() != size_t(spec.y_arity() + 1))
        throw std::invalid_argument("wrong point arity");
    int deg = P[0].deg;
    if (deg % deg_ != 0)
        throw std::invalid_argument("point field does not contain group field");
    if (!on_variety(PT, spec, P)) throw VerifyError("point not on the variety");

    FqElem a = PT.embed(g.g.a, deg), b = PT.embed(g.g.b, deg),
           c = PT.embed(g.g.c, deg);
    long long pe = ipow(ps_.p, ps_.e);
    long long twist = ps_.f * g.l;

    FqElem z = P[0], y = P[1];
    FqElem s = PT.zero(deg);
    FqElem by = PT.mul(b, y);
    for (long long i = 0; i < ps_.e / ps_.m; ++i)
        s = PT.add(s, PT.frob(by, i * ps_.m));

    std::vector<FqElem> out;
    out.push_back(PT.frob(PT.add(PT.add(z, s), c), twist));
    out.push_back(PT.frob(PT.mul(a, PT.add(y, PT.pow(b, pe))), twist));
    FqElem ah = PT.embed(a_half_power(g.g.a), deg);
    for (size_t i = 2; i < P.size(); ++i)
        out.push_back(PT.mul(ah, PT.frob(P[i], twist)));
    if (!on_variety(PT, spec, out))
        throw VerifyError("action image left the variety");
    return out;
}

std::vector<FqElem> frob_automorphism(const Tower& T, const VarietySpec& spec,
                                      std::vector<FqElem> P) {
    if (spec.kind != VarietySpec::Kind::X)
        throw std::invalid_argument("defined on the kind-X variety");
    const ParamSet& ps = spec.params;
    if (P.size() != size_t(ps.n))
        throw std::invalid_argument("wrong point arity");
    if (!on_variety(T, spec, P)) throw VerifyError("point not on the variety");
    int deg = P[0].deg;
    long long e1 = eps1(ps);
    FqElem eps = T.scalar(deg, e1);
    std::vector<FqElem> out(P.size(), T.zero(deg));
    out[1] = P[1];  // y is fixed
    if (ps.n == 2) {
        out[0] = T.add(P[0], eps);
    } else {
        FqElem ylast = P[size_t(ps.n) - 1];
        out[0] = T.add(P[0], T.mul(eps, T.add(ylast, T.one(deg))));
        // y_1
        FqElem s = T.zero(deg);
        for (size_t i = 2; i + 1 < P.size(); ++i) s = T.add(s, P[i]);
        FqElem two = T.scalar(deg, 2);
        out[2] = T.add(T.sub(T.neg(s), T.mul(two, ylast)), eps);
        // y_i = y_{i-1} - y_{n-2} + eps1, 2 <= i <= n-2
        for (size_t i = 3; i < P.size(); ++i)
            out[i] = T.add(T.sub(P[i - 1], ylast), eps);
    }
    if (!on_variety(T, spec, out))
        throw VerifyError("automorphism image left the variety");
    return out;
}

FqElem frob_linear_det(const Tower& T, const ParamSet& ps) {
    int d = int(ps.n) - 1;  // coordinates (y, y_1..y_{n-2})
    long long e1 = eps1(ps);
    (void)e1;
    std::vector<std::vector<FqElem>> M(size_t(d),
                                       std::vector<FqElem>(size_t(d), T.zero(1)));
    M[0][0] = T.one(1);
    if (d > 1) {
        // row 1: image of y_1
        for (int j = 1; j <= d - 2; ++j) M[1][size_t(j)] = T.neg(T.one(1));
        M[1][size_t(d - 1)] = T.neg(T.scalar(1, 2));
        for (int i = 2; i <= d - 1; ++i) {
            M[size_t(i)][size_t(i - 1)] = T.one(1);
            M[size_t(i)][size_t(d - 1)] =
                T.add(M[size_t(i)][size_t(d - 1)], T.neg(T.one(1)));
        }
    }
    // gaussian elimination over F_p
    FqElem det = T.one(1);
    for (int col = 0, row = 0; col < d && row < d; ++col) {
        int piv = -1;
        for (int i = row; i < d; ++i)
            if (!T.is_zero(M[size_t(i)][size_t(col)])) {
                piv = i;
                break;
            }
        if (piv < 0) return T.zero(1);
        if (piv != row) {
            std::swap(M[size_t(piv)], M[size_t(row)]);
            det = T.neg(det);
        }
        det = T.mul(det, M[size_t(row)][size_t(col)]);
        FqElem inv = T.inv(M[size_t(row)][size_t(col)]);
        for (int j = col; j < d; ++j)
            M[size_t(row)][size_t(j)] = T.mul(M[size_t(row)][size_t(j)], inv);
        for (int i = 0; i < d; ++i) {
            if (i == row) continue;
            FqElem f = M[size_t(i)][size_t(col)];
            if (T.is_zero(f)) continue;
            for (int j = col; j < d; ++j)
                M[size_t(i)][size_t(j)] = T.sub(
                    M[size_t(i)][size_t(j)], T.mul(f, M[size_t(row)][size_t(j)]));
        }
        ++row;
    }
    return det;
}

LefschetzReport equivariant_lefschetz(const QGroup& G, const QElt& g,
                                      const VarietySpec& spec, int k,
                                      std::uint64_t budget) {
    const ParamSet& ps = G.params();
    const Tower& GT = G.tower();
    long long pe = ipow(ps.p, ps.e);
    long long ord_a = G.tower().is_zero(g.a) ? 1 : mult_order(GT, g.a);

    long long D = std::lcm((long long)G.coord_degree(),
                           std::lcm(ps.m * k * ps.p, ps.m * k * ord_a));
    Tower T(ps.p, {int(D), G.coord_degree(), int(ps.m)});

    int arity = spec.y_arity() + 1;
    std::uint64_t fsize = T.field_size(int(D));
    std::uint64_t total = 1;
    for (int i = 0; i < arity; ++i) {
        if (total > budget / fsize + 1) throw BudgetError("lefschetz budget");
        total *= fsize;
        if (total > budget) throw BudgetError("lefschetz budget");
    }

    FqElem a = T.embed({G.coord_degree(), g.a.v}, int(D));
    FqElem b = T.embed({G.coord_degree(), g.b.v}, int(D));
    FqElem c = T.embed({G.coord_degree(), g.c.v}, int(D));
    FqElem ah = T.embed({G.coord_degree(), G.a_half_power(g.a).v}, int(D));
    long long twist = ps.m * k;  // Frobenius of the F_{p^m}-structure, k times

    LefschetzReport rep;
    rep.search_deg = int(D);
    rep.points_scanned = total;
    rep.central = g.a == GT.one(G.coord_degree()) && GT.is_zero(g.b);

    long long fixed = 0;
    std::vector<FqElem> P(size_t(arity), T.zero(int(D)));
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::uint64_t t = idx;
        for (int i = 0; i < arity; ++i) {
            P[size_t(i)] = T.from_index(int(D), t % fsize);
            t /= fsize;
        }
        if (!on_variety(T, spec, P)) continue;
        // image under g composed with the twist
        FqElem z = P[0], y = P[1];
        FqElem s = T.zero(int(D));
        FqElem by = T.mul(b, y);
        for (long long i = 0; i < ps.e / ps.m; ++i)
            s = T.add(s, T.frob(by, i * ps.m));
        bool fixed_pt =
            T.frob(T.add(T.add(z, s), c), twist) == z &&
            T.frob(T.mul(a, T.add(y, T.pow(b, pe))), twist) == y;
        for (size_t i = 2; fixed_pt && i < P.size(); ++i)
            fixed_pt = T.mul(ah, T.frob(P[i], twist)) == P[i];
        if (fixed_pt) ++fixed;
    }
    rep.fixed_count = fixed;

    if (rep.central) {
        FqElem cm = T.project(c, int(ps.m));
        Tower Tm(ps.p, {int(ps.m)});
        CycSum pred = CycSum::zero(ps.p);
        for (std::uint64_t sv = 0; sv < Tm.field_size(int(ps.m)); ++sv) {
            AdditiveCharacter psi(Tm, int(ps.m), Tm.from_index(int(ps.m), sv));
            pred = cyc_add(pred, cyc_mul(psi.eval({int(ps.m), cm.v}),
                                         exp_sum(spec, k, sv, budget)));
        }
        rep.predicted = pred;
        rep.has_prediction = true;
        rep.match = pred == CycSum::integer(ps.p, fixed);
    }
    return rep;
}

}  // namespace arith
