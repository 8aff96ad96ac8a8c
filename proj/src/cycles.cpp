#include "arith/cycles.hpp"

#include <numeric>

#include "arith/errors.hpp"

namespace arith {

namespace {

long long binom2(long long a) { return a * (a - 1) / 2; }  // binom(a, 2)

void check_y_kind(const ParamSet& ps) {
    if (ps.p != 2 || ps.n < 4 || ps.n % 2 != 0)
        throw std::invalid_argument("requires p = 2 and even n >= 4");
}

// w^2 + zeta w - zeta sum u_i - sum_{i<=n-3} u_i u_{i+1}, on (w, u_1..u_{n-2})
FqElem quotient_residual(const Tower& T, const Char2Config& cfg,
                         const std::vector<FqElem>& W) {
    int deg = W[0].deg;
    FqElem zeta = T.embed(cfg.zeta, deg);
    FqElem lhs = T.add(T.mul(W[0], W[0]), T.mul(zeta, W[0]));
    FqElem rhs = T.zero(deg);
    for (size_t i = 1; i < W.size(); ++i) {
        rhs = T.add(rhs, T.mul(zeta, W[i]));
        if (i + 1 < W.size()) rhs = T.add(rhs, T.mul(W[i], W[i + 1]));
    }
    return T.sub(lhs, rhs);
}

std::uint64_t checked_total(std::uint64_t fsize, int dims, std::uint64_t budget) {
    std::uint64_t total = 1;
    for (int i = 0; i < dims; ++i) {
        if (total > budget / fsize + 1) throw BudgetError("enumeration budget");
        total *= fsize;
        if (total > budget) throw BudgetError("enumeration budget");
    }
    return total;
}

}  // namespace

Char2Config make_char2_config(const ParamSet& ps, FqElem zeta) {
    check_y_kind(ps);
    if (zeta.deg != ps.m || zeta.v == 0)
        throw std::invalid_argument("zeta must be a nonzero element of F_{2^m}");
    Char2Config cfg;
    cfg.ps = ps;
    cfg.n0 = (ps.n - 2) / 2;
    cfg.N0 = binom2(cfg.n0 + 1);
    cfg.zeta = zeta;
    Tower T(2, {int(ps.m), int(2 * ps.m)});
    FqElem target = T.scalar(int(ps.m), cfg.N0);
    auto sols = T.solve_artin_schreier(target, 1);
    if (!sols.empty()) {
        cfg.rho = sols.front();
        cfg.rho_deg = int(ps.m);
    } else {
        auto sols2 = T.solve_artin_schreier(T.embed(target, int(2 * ps.m)), 1);
        if (sols2.empty()) throw VerifyError("no quadratic solution for rho");
        cfg.rho = sols2.front();
        cfg.rho_deg = int(2 * ps.m);
    }
    return cfg;
}

std::vector<FqElem> to_u_coords(const Tower& T, const VarietySpec& spec,
                                const std::vector<FqElem>& P) {
    if (spec.kind != VarietySpec::Kind::Y)
        throw std::invalid_argument("u-coordinates live on the kind-Y variety");
    if (!on_variety(T, spec, P)) throw VerifyError("point not on the variety");
    std::vector<FqElem> U(P.size(), T.zero(P[0].deg));
    U[0] = P[0];
    for (size_t i = P.size() - 1; i >= 1; --i) {
        U[i] = P[i];
        if (i + 1 < P.size()) U[i] = T.add(U[i], U[i + 1]);
    }
    // z^{2^m} - z = sum u_i^2 + sum u_i u_{i+1}
    const ParamSet& ps = spec.params;
    FqElem lhs = T.sub(T.frob(U[0], ps.m), U[0]);
    FqElem rhs = T.zero(P[0].deg);
    for (size_t i = 1; i < U.size(); ++i) {
        rhs = T.add(rhs, T.mul(U[i], U[i]));
        if (i + 1 < U.size()) rhs = T.add(rhs, T.mul(U[i], U[i + 1]));
    }
    if (!(lhs == rhs)) throw VerifyError("u-coordinate equation failed");
    return U;
}

std::vector<FqElem> from_u_coords(const Tower& T, const VarietySpec& spec,
                                  const std::vector<FqElem>& U) {
    std::vector<FqElem> P(U.size(), T.zero(U[0].deg));
    P[0] = U[0];
    for (size_t i = 1; i < U.size(); ++i) {
        P[i] = U[i];
        if (i + 1 < U.size()) P[i] = T.sub(P[i], U[i + 1]);
    }
    if (!on_variety(T, spec, P)) throw VerifyError("inverse image not on the variety");
    return P;
}

std::vector<FqElem> quotient_coords(const Tower& T, const Char2Config& cfg,
                                    const std::vector<FqElem>& P) {
    auto spec = VarietySpec::makeY(cfg.ps);
    auto U = to_u_coords(T, spec, P);
    int deg = P[0].deg;
    FqElem zeta = T.embed(cfg.zeta, deg);
    FqElem zinv2 = T.inv(T.mul(zeta, zeta));
    FqElem zz = T.zero(deg);
    FqElem base = T.mul(zinv2, U[0]);
    for (long long i = 0; i < cfg.ps.m; ++i) zz = T.add(zz, T.frob(base, i));
    std::vector<FqElem> W = U;
    W[0] = T.mul(zeta, zz);
    for (size_t i = 1; i < U.size(); ++i) W[0] = T.add(W[0], U[i]);
    if (!T.is_zero(quotient_residual(T, cfg, W)))
        throw VerifyError("quotient equation failed");
    return W;
}

FiberSplitReport fiber_split(const Char2Config& cfg, int k,
                             std::uint64_t budget) {
    const ParamSet& ps = cfg.ps;
    int L = std::lcm(int(ps.m) * k, cfg.rho_deg);
    Tower T(2, {L, int(ps.m), cfg.rho_deg, int(ps.m) * k});

    FiberSplitReport rep;
    rep.field_deg = L;
    rep.rho_rational = (ps.m * k) % cfg.rho_deg == 0;

    FqElem zeta = T.embed(cfg.zeta, L);
    FqElem rho = T.embed(cfg.rho, L);
    FqElem wplus = T.mul(zeta, rho);
    FqElem wminus = T.mul(zeta, T.add(rho, T.one(L)));

    int n2 = int(ps.n) - 2;
    std::uint64_t fs = T.field_size(L);
    std::uint64_t total = checked_total(fs, int(cfg.n0) + 1, budget);
    std::vector<FqElem> W(size_t(n2) + 1, T.zero(L));
    for (long long i = 1; i <= cfg.n0; ++i)
        W[size_t(2 * i)] = T.mul(T.scalar(L, i), zeta);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::uint64_t t = idx;
        W[0] = T.from_index(L, t % fs);
        t /= fs;
        for (long long i = 1; i <= cfg.n0; ++i) {
            W[size_t(2 * i - 1)] = T.from_index(L, t % fs);
            t /= fs;
        }
        if (!T.is_zero(quotient_residual(T, cfg, W))) continue;
        ++rep.fiber_total;
        if (W[0] == wplus)
            ++rep.comp_plus;
        else if (W[0] == wminus)
            ++rep.comp_minus;
    }
    rep.union_ok = rep.comp_plus + rep.comp_minus == rep.fiber_total;
    long long want = 1;
    for (long long i = 0; i < cfg.n0; ++i) want *= (long long)fs;
    rep.counts_ok = rep.comp_plus == want && rep.comp_minus == want;
    return rep;
}

DivisorIdentityReport divisor_identity_check(const Char2Config& cfg, long long j,
                                             std::uint64_t budget) {
    const ParamSet& ps = cfg.ps;
    if (j < 1 || j > cfg.n0) throw std::invalid_argument("j out of range");
    int L = int(2 * ps.m);
    Tower T(2, {L, int(ps.m)});
    FqElem zeta = T.embed(cfg.zeta, L);
    int n2 = int(ps.n) - 2;
    std::uint64_t fs = T.field_size(L);
    std::uint64_t total = checked_total(fs, n2 + 1, budget);

    DivisorIdentityReport rep;
    rep.identity_ok = rep.sum_ok = true;
    FqElem n0z2 = T.mul(T.scalar(L, cfg.N0), T.mul(zeta, zeta));
    std::vector<FqElem> W(size_t(n2) + 1, T.zero(L));
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::uint64_t t = idx;
        for (int i = 0; i <= n2; ++i) {
            W[size_t(i)] = T.from_index(L, t % fs);
            t /= fs;
        }
        // interpolating-subvariety constraints
        bool on = true;
        for (long long i = 1; i < j && on; ++i)
            if (!(W[size_t(2 * i - 1)] ==
                  T.mul(T.scalar(L, cfg.n0 + 1 - i), zeta)))
                on = false;
        for (long long i = j + 1; i <= cfg.n0 && on; ++i) {
            FqElem prev = W[size_t(2 * i - 2)];
            if (!(T.add(prev, W[size_t(2 * i)]) == zeta)) on = false;
        }
        if (!on || !T.is_zero(quotient_residual(T, cfg, W))) continue;
        ++rep.points_checked;

        FqElem u2jm2 = 2 * j - 2 >= 1 ? W[size_t(2 * j - 2)] : T.zero(L);
        FqElem factor1 = T.add(W[size_t(2 * j - 1)],
                               T.mul(T.scalar(L, cfg.n0 + 1 - j), zeta));
        FqElem factor2 = T.add(T.add(u2jm2, W[size_t(2 * j)]), zeta);
        FqElem lhs = T.add(T.mul(W[0], W[0]), T.mul(zeta, W[0]));
        if (!(lhs == T.add(n0z2, T.mul(factor1, factor2))))
            rep.identity_ok = false;

        FqElem osum = T.zero(L);
        for (long long i = 1; i < j; ++i)
            osum = T.add(osum, W[size_t(2 * i - 1)]);
        long long coeff = cfg.N0 + binom2(cfg.n0 + 2 - j);
        if (!(osum == T.mul(T.scalar(L, coeff), zeta))) rep.sum_ok = false;
    }
    if (!rep.identity_ok || !rep.sum_ok)
        throw VerifyError("interpolating-cycle identity failed");
    return rep;
}

BundleReport affine_bundle_check(const Char2Config& cfg, int k,
                                 std::uint64_t budget) {
    const ParamSet& ps = cfg.ps;
    int L = int(ps.m) * k;
    Tower T(2, {L, int(ps.m)});
    FqElem zeta = T.embed(cfg.zeta, L);
    int n2 = int(ps.n) - 2;
    std::uint64_t fs = T.field_size(L);
    std::uint64_t total = checked_total(fs, n2 + 1, budget);

    // special base point u_{2i} = i zeta
    std::vector<FqElem> special;
    for (long long i = 1; i <= cfg.n0; ++i)
        special.push_back(T.mul(T.scalar(L, i), zeta));

    std::uint64_t bases = 1;
    for (long long i = 0; i < cfg.n0; ++i) bases *= fs;
    std::vector<long long> fiber(bases, 0);
    std::vector<FqElem> W(size_t(n2) + 1, T.zero(L));
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::uint64_t t = idx;
        for (int i = 0; i <= n2; ++i) {
            W[size_t(i)] = T.from_index(L, t % fs);
            t /= fs;
        }
        if (!T.is_zero(quotient_residual(T, cfg, W))) continue;
        std::uint64_t key = 0;
        for (long long i = cfg.n0; i >= 1; --i)
            key = key * fs + W[size_t(2 * i)].v;
        ++fiber[key];
    }
    std::uint64_t special_key = 0;
    for (long long i = cfg.n0; i >= 1; --i)
        special_key = special_key * fs + special[size_t(i - 1)].v;
    long long want = 1;
    for (long long i = 0; i < cfg.n0; ++i) want *= (long long)fs;

    BundleReport rep;
    rep.fiber_counts_ok = true;
    for (std::uint64_t b = 0; b < bases; ++b) {
        if (b == special_key) {
            rep.special_fiber = fiber[b];
            continue;
        }
        ++rep.bases_checked;
        if (fiber[b] != want) rep.fiber_counts_ok = false;
    }
    return rep;
}

std::vector<FqElem> g_on_y(const Tower& T, const VarietySpec& spec,
                           const std::vector<FqElem>& P) {
    if (spec.kind != VarietySpec::Kind::Y)
        throw std::invalid_argument("defined on the kind-Y variety");
    if (!on_variety(T, spec, P)) throw VerifyError("point not on the variety");
    const ParamSet& ps = spec.params;
    int deg = P[0].deg;
    FqElem eps = T.scalar(deg, ps.e == 1 ? 1 : 0);
    size_t last = P.size() - 1;
    std::vector<FqElem> out(P.size(), T.zero(deg));
    out[0] = T.add(P[0], T.mul(eps, T.add(P[last], T.one(deg))));
    FqElem s = T.zero(deg);
    for (size_t i = 1; i + 1 < P.size(); ++i) s = T.add(s, P[i]);
    out[1] = T.add(s, eps);
    for (size_t i = 2; i < P.size(); ++i)
        out[i] = T.add(T.add(P[i - 1], P[last]), eps);
    if (!on_variety(T, spec, out))
        throw VerifyError("automorphism image left the variety");
    return out;
}

ComponentMapReport g_component_map(const Char2Config& cfg,
                                   std::uint64_t budget) {
    const ParamSet& ps = cfg.ps;
    auto spec = VarietySpec::makeY(ps);
    int L = std::lcm(int(2 * ps.m), cfg.rho_deg);
    Tower T(2, {L, int(ps.m), cfg.rho_deg});
    FqElem zeta = T.embed(cfg.zeta, L);
    FqElem rho = T.embed(cfg.rho, L);
    FqElem eps = T.scalar(L, ps.e == 1 ? 1 : 0);
    FqElem wprime_plus = T.mul(zeta, rho);
    // source component carried onto the primed plus-component
    FqElem wsrc = ps.e == 1 ? T.mul(zeta, T.add(rho, T.one(L))) : T.mul(zeta, rho);

    int arity = int(ps.n) - 1;
    std::uint64_t fs = T.field_size(L);
    std::uint64_t total = checked_total(fs, arity, budget);

    ComponentMapReport rep;
    rep.maps_into = rep.w_shift_ok = rep.component_ok = true;
    rep.source_sign = ps.e == 1 ? '-' : '+';
    std::vector<FqElem> P(size_t(arity), T.zero(L));
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::uint64_t t = idx;
        for (int i = 0; i < arity; ++i) {
            P[size_t(i)] = T.from_index(L, t % fs);
            t /= fs;
        }
        if (!on_variety(T, spec, P)) continue;
        ++rep.points_checked;
        std::vector<FqElem> Q;
        try {
            Q = g_on_y(T, spec, P);
        } catch (const VerifyError&) {
            rep.maps_into = false;
            continue;
        }
        auto WP = quotient_coords(T, cfg, P);
        auto WQ = quotient_coords(T, cfg, Q);
        if (!(WQ[0] == T.add(WP[0], eps))) rep.w_shift_ok = false;

        // membership of P in the source component and of g(P) in the primed
        // plus-component; the two sets must coincide through g
        bool in_src = WP[0] == wsrc;
        for (long long i = 1; i <= cfg.n0 && in_src; ++i)
            if (!(WP[size_t(2 * i)] == T.mul(T.scalar(L, i), zeta)))
                in_src = false;
        bool in_primed = WQ[0] == wprime_plus;
        for (long long i = 1; i <= cfg.n0 && in_primed; ++i)
            if (!(WQ[size_t(2 * i - 1)] ==
                  T.mul(T.scalar(L, cfg.n0 + 1 - i), zeta)))
                in_primed = false;
        if (in_src) ++rep.component_points;
        if (in_src != in_primed) rep.component_ok = false;
    }
    if (rep.maps_into && rep.w_shift_ok && rep.component_ok &&
        rep.component_points > 0)
        rep.implied_scalar = -1;
    return rep;
}

}  // namespace arith
