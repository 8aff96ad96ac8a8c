#include "arith/cocycle.hpp"

#include <random>
#include <string>

#include "arith/errors.hpp"

namespace arith {

namespace {

// True when no known digit sits at exponent <= 0 (a unit congruent to its
// leading term "modulo terms of positive valuation").
bool visibly_above_zero(const TruncSeries& a) {
    for (const auto& [e, c] : a.terms)
        if (e <= Rat(0)) return false;
    return true;
}

// Largest iterate count whose exponent denominators stay under the budget.
bool denominators_ok(const TruncSeries& a) {
    long long limit = kMaxSeriesDenominator / 8;
    if (a.cap.denominator() > limit) return false;
    for (const auto& [e, c] : a.terms)
        if (e.denominator() > limit) return false;
    return true;
}

}  // namespace

WeilSystem::WeilSystem(const LocalChart& chart, int depth)
    : chart_(chart), qg_(chart.params()) {
    T_ = &chart.tower();
    deg_ = chart.coeff_deg();
    const ParamSet& ps = chart.params();
    pe_ = ipow(ps.p, ps.e);
    if (qg_.coord_degree() != deg_)
        throw BudgetError(
            "group field and chart coefficient field have different degrees");
    eps0_ = pe_ == 2 ? T_->scalar(deg_, (ps.nprime + 1) / 2) : T_->zero(deg_);

    // alpha = eta^{p^e/(p^e+1)} * u with u^{p^e+1} equal to the unit
    // -pi^{p^e} eta^{-p^e}; Newton in u, derivative (p^e+1) u^{p^e} with
    // p^e+1 = 1 in the coefficient field.
    TruncSeries U = ts_mul(ts_neg(ts_frobenius(chart.pi(), ps.e)),
                           ts_frobenius(ts_inv(chart.eta()), ps.e));
    if (ts_valuation(U) != Rat(0))
        throw VerifyError("pi^{p^e} eta^{-p^e} is not a unit");
    FqElem c0 = ts_coeff(U, Rat(0));
    auto roots = T_->roots_of_unity_times(c0, pe_ + 1);
    if (roots.empty())
        throw BudgetError("coefficient field misses the (p^e+1)-th root");
    FqElem u0 = roots[0];
    for (FqElem r : roots)
        if (r == T_->one(deg_)) u0 = r;
    TruncSeries u = ts_constant(*T_, deg_, u0, U.cap);
    FqElem kf = T_->scalar(deg_, pe_ + 1);
    for (int it = 0; it < 12; ++it) {
        TruncSeries res = ts_sub(ts_pow(u, pe_ + 1), U);
        if (ts_is_zero(res)) break;
        TruncSeries der = ts_scale(ts_pow(u, pe_), kf);
        u = ts_sub(u, ts_mul(res, ts_inv(der)));
    }
    alpha_ = ts_mul(ts_pow(chart.eta_root_e1(), pe_), u);
    alpha_inv_ = ts_inv(alpha_);
    TruncSeries R = ts_neg(alpha_inv_);
    if (!(R.cap > Rat(0)))
        throw BudgetError("alpha inverse carries no positive-cap window");

    // beta = sum_{j>=1} (-1)^{j-1} R^{1/p^{2ej}}: applying x -> x^{p^{2e}} + x
    // telescopes to R plus the last iterate's root, so the defect valuation
    // is v(R)/p^{2e J}.
    TruncSeries raw = R;
    beta_ = ts_zero(*T_, deg_, Rat(1));
    for (int j = 1; j <= depth; ++j) {
        TruncSeries next = ts_root(raw, 2 * ps.e);
        if (!denominators_ok(next)) break;
        beta_ = ts_add(beta_, j % 2 == 1 ? next : ts_neg(next));
        raw = next;
        beta_terms_ = j;
    }
    if (beta_terms_ == 0) throw BudgetError("no room for a single beta iterate");
    beta_res_ = ts_add(ts_add(ts_frobenius(beta_, 2 * ps.e), beta_), alpha_inv_);

    // gamma = sum_{j>=1} Rg^{1/p^{mj}} with Rg = beta^{p^e+1} + eps0; the
    // digits of beta accumulate toward exponent 0, so Rg (and gamma) only
    // carry a window below a small negative cap -- enough for the leading
    // digits, while the cocycle formulas below avoid powers of beta entirely.
    TruncSeries Rg = ts_add(ts_pow(beta_, pe_ + 1), constant(eps0_));
    raw = Rg;
    gamma_ = ts_zero(*T_, deg_, Rat(1));
    for (int j = 1; j <= depth; ++j) {
        TruncSeries next = ts_root(raw, ps.m);
        if (!denominators_ok(next)) break;
        gamma_ = ts_add(gamma_, next);
        raw = next;
        gamma_terms_ = j;
    }
}

TruncSeries WeilSystem::constant(FqElem c) const {
    return ts_constant(*T_, deg_, c, chart_.config().work_cap);
}

FqElem WeilSystem::visible_constant(const TruncSeries& a,
                                    const char* what) const {
    if (!(a.cap > Rat(0)))
        throw BudgetError(std::string(what) +
                          ": no window around exponent zero");
    FqElem out = T_->zero(deg_);
    for (const auto& [e, c] : a.terms) {
        if (e != Rat(0))
            throw VerifyError(std::string(what) + " is not a constant");
        out = c;
    }
    return out;
}

FqElem WeilSystem::twist(FqElem x, long long l) const {
    return T_->frob(x, -chart_.params().f * l);
}

TruncSeries WeilSystem::chain_poly(FqElem B) const {
    const ParamSet& ps = chart_.params();
    TruncSeries inner = ts_scale(ts_add(beta_, constant(B)), T_->frob(B, ps.e));
    TruncSeries acc = ts_zero(*T_, deg_, inner.cap);
    for (long long i = 0; i < ps.e / ps.m; ++i)
        acc = ts_add(acc, ts_frobenius(inner, i * ps.m));
    return ts_neg(acc);
}

WeilSystem::Report WeilSystem::validate() const {
    const ParamSet& ps = chart_.params();
    Report rep;
    rep.alpha_equation = ts_is_zero(
        ts_add(ts_pow(alpha_, pe_ + 1), ts_frobenius(chart_.pi(), ps.e)));
    TruncSeries N = ts_pow(chart_.eta_root_e1(), pe_);
    rep.alpha_normalized = visibly_above_zero(
        ts_sub(ts_mul(alpha_, ts_inv(N)), constant(T_->one(deg_))));

    rep.beta_residual = ts_is_zero(beta_res_) ? beta_res_.cap
                                              : ts_valuation(beta_res_);
    rep.beta_predicted =
        ts_valuation(alpha_inv_) / Rat(ipow(ps.p, 2 * ps.e * beta_terms_));
    rep.beta_rate_ok =
        !ts_is_zero(beta_res_) && rep.beta_residual == rep.beta_predicted;
    TruncSeries b0 = ts_mul(ts_frobenius(chart_.theta(), ps.e),
                            ts_pow(ts_inv(chart_.eta_root_e1()), pe_));
    rep.beta_normalized = visibly_above_zero(
        ts_sub(ts_mul(beta_, ts_inv(b0)), constant(T_->one(deg_))));

    TruncSeries Rg = ts_add(ts_pow(beta_, pe_ + 1), constant(eps0_));
    TruncSeries gres =
        ts_sub(ts_sub(ts_frobenius(gamma_, ps.m), gamma_), Rg);
    rep.gamma_equation = ts_is_zero(gres);
    rep.gamma_window = gres.cap;
    TruncSeries target = ts_zero(*T_, deg_, gamma_.cap);
    TruncSeries le = ts_mul(chart_.lambda(), ts_inv(chart_.eta()));
    for (long long i = 0; i < ps.f / ps.m; ++i)
        target = ts_add(target, ts_frobenius(le, i * ps.m));
    rep.gamma_normalized = ts_is_zero(ts_sub(gamma_, target));
    return rep;
}

WeilSystem::Choice WeilSystem::identity() const {
    return {T_->one(deg_), T_->zero(deg_), T_->zero(deg_), 0};
}

std::vector<WeilSystem::Choice> WeilSystem::enumerate_choices() const {
    const ParamSet& ps = chart_.params();
    if (T_->field_size(deg_) > (1u << 20))
        throw BudgetError("coefficient field too large to enumerate");
    std::vector<FqElem> omegas =
        T_->roots_of_unity_times(T_->one(deg_), pe_ + 1);
    std::vector<FqElem> shifts;
    for (std::uint64_t v = 0; v < T_->field_size(deg_); ++v) {
        FqElem b = T_->from_index(deg_, v);
        if (T_->frob(b, 2 * ps.e) == T_->neg(b)) shifts.push_back(b);
    }
    std::vector<Choice> out;
    for (FqElem w : omegas)
        for (FqElem b : shifts) {
            FqElem B = T_->mul(w, b);
            for (FqElem k : T_->solve_artin_schreier(
                     T_->neg(T_->pow(B, pe_ + 1)), int(ps.m)))
                out.push_back({w, b, k, 0});
        }
    return out;
}

WeilSystem::Choice WeilSystem::sample_choice(std::uint64_t seed,
                                             long long max_twist) const {
    auto all = enumerate_choices();
    std::mt19937_64 rng(seed);
    Choice c = all[rng() % all.size()];
    c.l = (long long)(rng() % (2 * max_twist + 1)) - max_twist;
    return c;
}

WeilSystem::Choice WeilSystem::compose(const Choice& s, const Choice& t) const {
    FqElem wt = twist(t.omega, s.l);
    FqElem bt = twist(t.shift, s.l);
    FqElem kt = twist(t.kappa, s.l);
    FqElem w = T_->mul(s.omega, wt);
    FqElem b = T_->add(T_->mul(T_->inv(wt), s.shift), bt);
    // gamma translate of the composite: read off the series identity
    // W(B_s) + kappa_s + s(W(B_t)) + kappa_t' - W(B_{st}); everything but a
    // constant must cancel.
    const ParamSet& ps = chart_.params();
    TruncSeries sbeta =
        ts_add(ts_scale(beta_, T_->inv(s.omega)), constant(s.shift));
    FqElem Bt = T_->mul(wt, bt);
    TruncSeries inner =
        ts_scale(ts_add(sbeta, constant(Bt)), T_->frob(Bt, ps.e));
    TruncSeries sW = ts_zero(*T_, deg_, inner.cap);
    for (long long i = 0; i < ps.e / ps.m; ++i)
        sW = ts_add(sW, ts_frobenius(inner, i * ps.m));
    sW = ts_neg(sW);
    TruncSeries D = ts_add(chain_poly(T_->mul(s.omega, s.shift)),
                           constant(T_->add(s.kappa, kt)));
    D = ts_add(D, sW);
    D = ts_sub(D, chain_poly(T_->mul(w, b)));
    FqElem k = visible_constant(D, "composite gamma translate");
    return {w, b, k, s.l + t.l};
}

WeilSystem::Cocycle WeilSystem::cocycle(const Choice& s) const {
    const ParamSet& ps = chart_.params();
    TruncSeries salpha = ts_scale(alpha_, s.omega);
    if (!ts_is_zero(ts_add(ts_pow(salpha, pe_ + 1),
                           ts_frobenius(chart_.pi(), ps.e))))
        throw VerifyError("alpha image does not solve its equation");

    TruncSeries sbeta =
        ts_add(ts_scale(beta_, T_->inv(s.omega)), constant(s.shift));
    TruncSeries sres =
        ts_add(ts_add(ts_frobenius(sbeta, 2 * ps.e), sbeta),
               ts_scale(alpha_inv_, T_->inv(s.omega)));
    if (!ts_is_zero(ts_sub(sres, ts_scale(beta_res_, T_->inv(s.omega)))))
        throw VerifyError("beta translate does not solve its equation");

    FqElem B = T_->mul(s.omega, s.shift);
    TruncSeries Wk = ts_add(chain_poly(B), constant(s.kappa));
    // sigma(beta)^{p^e+1} - beta^{p^e+1}, expanded so beta only meets
    // constants: B beta^{p^e} + omega^{-1} shift^{p^e} beta + shift^{p^e+1}.
    TruncSeries delta = ts_add(
        ts_scale(ts_frobenius(beta_, ps.e), B),
        ts_scale(beta_, T_->mul(T_->inv(s.omega), T_->frob(s.shift, ps.e))));
    delta = ts_add(delta, constant(T_->pow(s.shift, pe_ + 1)));
    if (!ts_is_zero(ts_sub(ts_sub(ts_frobenius(Wk, ps.m), Wk), delta)))
        throw VerifyError("gamma translate does not solve its equation");

    Cocycle out;
    out.a = ts_mul(salpha, ts_inv(alpha_));
    FqElem abar = visible_constant(out.a, "a residue");
    out.b = ts_sub(ts_mul(out.a, sbeta), beta_);
    FqElem bbar = visible_constant(out.b, "b residue");
    if (!(bbar == B))
        throw VerifyError("b residue disagrees with the twisted shift");
    // b is exactly its residue, so the chain sum uses the constant; the
    // series form of b would multiply its unknown tail into beta and lose
    // the window around exponent zero.
    out.c = ts_add(Wk, ts_neg(chain_poly(bbar)));
    FqElem cbar = visible_constant(out.c, "c residue");
    out.image = {qg_.validate(abar, bbar, cbar), s.l};
    return out;
}

}  // namespace arith
