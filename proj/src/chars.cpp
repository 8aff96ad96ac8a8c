#include "arith/chars.hpp"

#include <random>

#include "arith/errors.hpp"

namespace arith {

namespace {

long long mod_exp(long long x, long long md) {
    long long r = x % md;
    return r < 0 ? r + md : r;
}

}  // namespace

CharSystem::CharSystem(const ParamSet& ps) : ps_(ps) {
    kdeg_ = (int)ps.f;
    ddeg_ = (int)(ps.f * ps.n);
    long long size = 1;
    for (int i = 0; i < ddeg_; ++i) {
        size *= ps.p;
        if (size > 4'000'000)
            throw BudgetError(
                "residue field of the degree-n algebra is too large");
    }
    tower_ = std::make_unique<Tower>(ps.p, std::vector<int>{ddeg_});
    // the field's own discrete-log table fixes the generator
    const auto& exp = tower_->exp_table(kdeg_);
    gen_ = tower_->from_index(kdeg_, exp[exp.size() > 1 ? 1 : 0]);
    inv_nprime_ = tower_->inv(tower_->scalar(kdeg_, ps.nprime));
}

long long CharSystem::dlog(FqElem x) const {
    if (x.deg != kdeg_ || tower_->is_zero(x))
        throw VerifyError("discrete log of zero or of a foreign-field element");
    return (long long)tower_->log_table(kdeg_)[x.v];
}

CharValue CharSystem::one() const {
    return {0, 0, CycSum::integer(ps_.p, 1)};
}

CharValue CharSystem::mul(const CharValue& x, const CharValue& y) const {
    return {x.c_exp + y.c_exp, mod_exp(x.unit_exp + y.unit_exp, ps_.q - 1),
            cyc_mul(x.psi, y.psi)};
}

CharValue CharSystem::chi_value(const SSCParams& par, FqElem xbar) const {
    auto v = one();
    v.unit_exp = mod_exp(par.chi_exp * dlog(xbar), ps_.q - 1);
    return v;
}

CharValue CharSystem::psi_value(FqElem residue) const {
    FqElem tr = tower_->trace(residue, 1);
    auto v = one();
    v.psi = CycSum::zeta_pow(ps_.p, (long long)tr.v);
    return v;
}

CharValue CharSystem::lambda_phi(const SSCParams& par) const {
    auto v = one();
    v.c_exp = 1;
    long long sign = 0;
    if (ps_.p != 2 && (ps_.n - 1) % 2 != 0) sign = (ps_.q - 1) / 2;
    v.unit_exp = mod_exp(par.c_unit_exp + sign, ps_.q - 1);
    return v;
}

CharValue CharSystem::theta_phi(const SSCParams& par) const {
    auto v = one();
    v.c_exp = 1;
    v.unit_exp = mod_exp(par.c_unit_exp, ps_.q - 1);
    return v;
}

TruncSeries CharSystem::entry_or_zero(const MatUnit& u, int i, int j) const {
    return u.a[(size_t)i][(size_t)j];
}

void CharSystem::check_mat_unit(const MatUnit& u) const {
    size_t n = (size_t)ps_.n;
    if (u.a.size() != n)
        throw VerifyError("matrix unit has the wrong size");
    for (size_t i = 0; i < n; ++i) {
        if (u.a[i].size() != n)
            throw VerifyError("matrix unit has the wrong size");
        for (size_t j = 0; j < n; ++j) {
            const TruncSeries& x = u.a[i][j];
            if (x.deg != kdeg_)
                throw VerifyError("matrix entry over the wrong field");
            for (const auto& [e, c] : x.terms) {
                if (i == j) {
                    if (e < Rat(0) || (e == Rat(0) && !(c == tower_->one(kdeg_))))
                        throw VerifyError(
                            "diagonal entry is not a principal unit");
                } else if (i < j) {
                    if (e < Rat(0))
                        throw VerifyError(
                            "upper entry has negative valuation");
                } else {
                    if (e < Rat(1))
                        throw VerifyError(
                            "lower entry escapes the radical");
                }
            }
        }
    }
}

FqElem CharSystem::unit_trace_residue(const MatUnit& u, FqElem zeta) const {
    check_mat_unit(u);
    if (zeta.deg != kdeg_ || tower_->is_zero(zeta))
        throw VerifyError("the torsion parameter must be a nonzero residue");
    int n = (int)ps_.n;
    // tr(phi^{-1} (u - 1)) = sum of the superdiagonal of u - 1 plus
    // zeta^{-1} * (coefficient of t in the corner entry), all over n'.
    FqElem acc = tower_->zero(kdeg_);
    for (int j = 1; j < n; ++j) {
        const TruncSeries& x = u.a[(size_t)(j - 1)][(size_t)j];
        if (!(x.cap > Rat(0)))
            throw BudgetError("matrix entry cap too low to read the residue");
        acc = tower_->add(acc, ts_coeff(x, Rat(0)));
    }
    const TruncSeries& corner = u.a[(size_t)(n - 1)][0];
    if (!(corner.cap > Rat(1)))
        throw BudgetError("matrix entry cap too low to read the residue");
    acc = tower_->add(
        acc, tower_->mul(tower_->inv(zeta), ts_coeff(corner, Rat(1))));
    return tower_->mul(inv_nprime_, acc);
}

CharValue CharSystem::lambda_eval(const SSCParams& par, long long phi_pow,
                                  FqElem unit, const MatUnit& u) const {
    if (unit.deg != kdeg_ || tower_->is_zero(unit))
        throw VerifyError("the Teichmueller part must be a nonzero residue");
    auto v = one();
    v.c_exp = phi_pow;
    long long sign = 0;
    if (ps_.p != 2 && (ps_.n - 1) % 2 != 0) sign = (ps_.q - 1) / 2;
    v.unit_exp = mod_exp(phi_pow * (par.c_unit_exp + sign), ps_.q - 1);
    v = mul(v, chi_value(par, unit));
    return mul(v, psi_value(unit_trace_residue(u, par.zeta)));
}

CharSystem::ThetaHr CharSystem::theta_and_hr(const SSCParams& par,
                                             const DUnit& d,
                                             const MatUnit& g) const {
    FqElem d1 = tower_->zero(ddeg_);
    for (const FqElem& c : d.d)
        if (c.deg != ddeg_)
            throw VerifyError("division-algebra digit over the wrong field");
    if (!d.d.empty()) d1 = d.d[0];
    // Only the leading digit survives the reduced trace modulo the maximal
    // ideal; Frobenius twists do not move its trace.
    FqElem trd = tower_->trace(d1, kdeg_);
    ThetaHr out;
    out.theta = psi_value(tower_->mul(inv_nprime_, trd));
    FqElem diff = tower_->sub(trd, tower_->mul(
        tower_->scalar(kdeg_, ps_.nprime), unit_trace_residue(g, par.zeta)));
    // unit_trace_residue already divides by n', so undo that for g before
    // applying the shared 1/n' factor.
    out.hr = tower_->trace(tower_->mul(inv_nprime_, diff), (int)ps_.m);
    return out;
}

MatUnit CharSystem::mat_identity() const {
    int n = (int)ps_.n;
    MatUnit u;
    u.a.assign((size_t)n, std::vector<TruncSeries>());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            u.a[(size_t)i].push_back(
                i == j ? ts_constant(*tower_, kdeg_, tower_->one(kdeg_), Rat(3))
                       : ts_zero(*tower_, kdeg_, Rat(3)));
    return u;
}

MatUnit CharSystem::mat_mul(const MatUnit& x, const MatUnit& y) const {
    check_mat_unit(x);
    check_mat_unit(y);
    int n = (int)ps_.n;
    MatUnit out;
    out.a.assign((size_t)n, std::vector<TruncSeries>());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            TruncSeries acc = ts_mul(x.a[(size_t)i][0], y.a[0][(size_t)j]);
            for (int k = 1; k < n; ++k)
                acc = ts_add(acc,
                             ts_mul(x.a[(size_t)i][(size_t)k],
                                    y.a[(size_t)k][(size_t)j]));
            out.a[(size_t)i].push_back(acc);
        }
    return out;
}

MatUnit CharSystem::sample_mat_unit(std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    auto coeff = [&]() {
        return tower_->from_index(kdeg_, rng() % tower_->field_size(kdeg_));
    };
    int n = (int)ps_.n;
    MatUnit u = mat_identity();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int lo = (i < j) ? 0 : 1;  // diagonal handled by lo = 1 too
            for (int e = lo; e <= 2; ++e) {
                FqElem c = coeff();
                if (tower_->is_zero(c)) continue;
                u.a[(size_t)i][(size_t)j] = ts_add(
                    u.a[(size_t)i][(size_t)j],
                    ts_monomial(*tower_, kdeg_, c, Rat(e), Rat(3)));
            }
        }
    return u;
}

DUnit CharSystem::d_identity() const { return DUnit{}; }

DUnit CharSystem::d_mul(const DUnit& x, const DUnit& y) const {
    auto digit = [&](const DUnit& z, int j) {
        return (j >= 1 && j <= (int)z.d.size()) ? z.d[(size_t)(j - 1)]
                                                : tower_->zero(ddeg_);
    };
    DUnit out;
    for (int l = 1; l <= dmax_; ++l) {
        FqElem c = tower_->add(digit(x, l), digit(y, l));
        // the uniformizer conjugates the unramified digits by Frobenius
        for (int j = 1; j < l; ++j)
            c = tower_->add(
                c, tower_->mul(digit(x, j),
                               tower_->frob(digit(y, l - j), ps_.f * j)));
        out.d.push_back(c);
    }
    return out;
}

DUnit CharSystem::sample_d_unit(std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    DUnit out;
    for (int j = 0; j < 4; ++j)
        out.d.push_back(
            tower_->from_index(ddeg_, rng() % tower_->field_size(ddeg_)));
    return out;
}

HomCountReport hom_count(const Tower& T, const ParamSet& ps, FqElem zeta,
                         FqElem r, FqElem s) {
    int f = (int)ps.f;
    if (zeta.deg != f || r.deg != f || s.deg != f || T.is_zero(zeta) ||
        T.is_zero(r) || T.is_zero(s))
        throw VerifyError("torsion parameters must be nonzero residues");
    long long pm1 = ipow(ps.p, ps.m) - 1;
    if (!(T.pow(r, pm1 / ps.n1) == s))
        throw VerifyError("the sign parameter disagrees with its source");
    long long pe = ipow(ps.p, ps.e);
    long long count = 0;
    for (std::uint64_t v = 1; v < T.field_size(f); ++v) {
        FqElem a = T.from_index(f, v);
        if (!T.in_subfield(a, (int)ps.m)) continue;
        if (T.mul(T.pow(a, ps.n), r) == zeta) ++count;
    }
    HomCountReport rep;
    rep.direct = pe * count;
    rep.closed = pe * ps.n1 * (T.pow(zeta, pm1 / ps.n1) == s ? 1 : 0);
    rep.match = rep.direct == rep.closed;
    return rep;
}

DimReport dim_identity(const ParamSet& ps) {
    long long qn = 1;
    for (long long i = 0; i < ps.n; ++i) {
        if (qn > 2'000'000'000 / ps.q)
            throw BudgetError("q^n exceeds the exact-integer budget");
        qn *= ps.q;
    }
    DimReport rep;
    rep.dim_rho = (qn - 1) / (ps.q - 1);
    rep.dim_tau = ps.n;
    rep.lhs = rep.dim_tau * rep.dim_rho;
    long long num = ps.nprime * (qn - 1);
    long long den = ps.n1 * (ps.q - 1);
    if (num % den != 0)
        throw VerifyError("the subgroup index is not an integer");
    rep.index = num / den;
    rep.multiplicity = ipow(ps.p, ps.e) * ps.n1;
    rep.rhs = rep.index * rep.multiplicity;
    rep.holds = rep.lhs == rep.rhs;
    return rep;
}

SSCParams param_normalize(const CharSystem& S, const SSCParams& par,
                          FqElem a) {
    const Tower& T = S.tower();
    const ParamSet& ps = S.params();
    if (a.deg != S.kdeg() || T.is_zero(a) || !T.in_subfield(a, (int)ps.m))
        throw VerifyError(
            "normalizing element must be a unit of the small subfield");
    SSCParams out = par;
    out.zeta = T.mul(T.pow(a, ps.n), par.zeta);
    out.c_unit_exp =
        mod_exp(par.c_unit_exp + par.chi_exp * S.dlog(a), ps.q - 1);
    return out;
}

}  // namespace arith
