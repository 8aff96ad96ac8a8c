#include "arith/tower.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

#include "arith/errors.hpp"

namespace arith {

namespace {

// Throws when a needed root of unity is missing from the working field; the
// constructor then retries with a larger coefficient field.
struct FieldTooSmall {};

FqElem pick_root(const Tower& T, FqElem a, long long k) {
    auto roots = T.roots_of_unity_times(a, k);
    if (roots.empty()) throw FieldTooSmall{};
    return roots.front();
}

// q^m as an exact rational, m possibly negative
Rat qpow_exp(long long q, long long m) {
    if (m < -40 || m > 40) throw BudgetError("exponent out of range");
    return m >= 0 ? Rat(ipow(q, m)) : Rat(1, ipow(q, -m));
}

// a^g for a rational exponent whose denominator is a power of q = p^f:
// integer power followed by the matching unique q-power root
TruncSeries rat_power(const TruncSeries& a, Rat g, long long f) {
    long long q = ipow(a.T->p(), f);
    int s = 0;
    Rat gg = g;
    while (gg.denominator() != 1) {
        gg = gg * Rat(q);
        if (++s > 40) throw BudgetError("exponent denominator is no q-power");
    }
    return ts_frobenius(ts_pow(a, static_cast<long long>(gg.numerator())),
                        -f * s);
}

// Drop digits whose exponent denominators exceed max_den, lowering the cap
// to the first dropped position. The fine digits near the cap are the ones
// carrying compound denominators, so this trades a sliver of precision for
// headroom under the global denominator ceiling.
TruncSeries squeeze_denominators(TruncSeries a, long long max_den) {
    Rat new_cap = a.cap;
    if (new_cap.denominator() > max_den) {
        // round the cap down onto a coarse dyadic grid
        long long D = 1;
        while (D <= max_den / 2) D *= 2;
        long long num = new_cap.numerator() * D / new_cap.denominator();
        new_cap = Rat(num, D);
    }
    for (const auto& [e, c] : a.terms)
        if (e.denominator() > max_den && e < new_cap) new_cap = e;
    if (new_cap != a.cap) a = ts_truncate(std::move(a), new_cap);
    return a;
}

}  // namespace

TruncSeries LocalChart::capped(TruncSeries a) const {
    return ts_truncate(std::move(a), cfg_.work_cap);
}

TruncSeries LocalChart::solve_root_fixed(
    int root_exp, const std::function<TruncSeries(const TruncSeries&)>& rhs,
    TruncSeries x0, int max_iters) const {
    // The iterates converge only up to the separation of conjugate roots,
    // and the natural cap of an iterate can overstate what has actually
    // converged, so the distance between consecutive iterates bounds the
    // precision whenever it is below the cap.
    TruncSeries x = std::move(x0);
    Rat reached = ts_valuation(x);
    for (int k = 0; k < max_iters; ++k) {
        x = squeeze_denominators(std::move(x), kMaxSeriesDenominator / 256);
        TruncSeries next;
        try {
            next = ts_root(rhs(x), root_exp);
        } catch (const BudgetError&) {
            break;  // exponent denominators exhausted; keep the last iterate
        }
        reached = ts_valuation(ts_sub(next, x));  // = cap when they agree
        x = std::move(next);
        if (reached >= x.cap) {
            reached = x.cap;
            break;
        }
    }
    return ts_truncate(x, std::min(reached, cfg_.work_cap));
}

TruncSeries LocalChart::kth_root_unit(const TruncSeries& a, long long k) const {
    if (k % tower_->p() == 0)
        throw std::invalid_argument("root index must be prime to p");
    Rat v = ts_valuation(a);
    FqElem lead = ts_leading(a);
    FqElem c = pick_root(*tower_, lead, k);
    // a = lead t^v (1 + w); Newton for the unit part (k is invertible)
    TruncSeries u = ts_shift(a, tower_->inv(lead), -v);
    TruncSeries x = ts_constant(*tower_, cdeg_, tower_->one(cdeg_), u.cap);
    FqElem kinv = tower_->inv(tower_->scalar(cdeg_, k));
    TruncSeries kinv_s = ts_constant(*tower_, cdeg_, kinv, u.cap);
    for (int it = 0; it < 50; ++it) {
        TruncSeries res = ts_sub(ts_pow(x, k), u);
        if (ts_is_zero(res)) break;
        TruncSeries step =
            ts_mul(kinv_s, ts_mul(res, ts_inv(ts_pow(x, k - 1))));
        x = ts_sub(x, step);
        if (it == 49) throw BudgetError("unit root iteration did not settle");
    }
    return ts_mul(ts_monomial(*tower_, cdeg_, c, v / k, x.cap + v / k), x);
}

LocalChart::LocalChart(const ChartConfig& cfg) : cfg_(cfg) {
    const ParamSet& ps = cfg_.ps;
    if (cfg_.levels < ps.n + 1)
        throw std::invalid_argument("ladder depth must exceed the coordinate count");
    long long base = std::lcm(std::lcm(ps.f, 2 * ps.e), ps.m);
    for (long long mult : {1, 2, 3, 4, 6, 8, 12}) {
        long long d = base * mult;
        if (ipow(ps.p, d) > (1ll << 22)) break;
        try {
            std::vector<int> degs{static_cast<int>(d), static_cast<int>(ps.f),
                                  static_cast<int>(2 * ps.e),
                                  static_cast<int>(ps.m)};
            tower_ = std::make_shared<Tower>(ps.p, degs);
            cdeg_ = static_cast<int>(d);
            const Tower& T = *tower_;

            FqElem r = T.from_index(static_cast<int>(ps.f), cfg_.r_index);
            if (T.is_zero(r)) throw std::invalid_argument("r must be a unit");
            FqElem rd = T.embed(r, cdeg_);

            // phi with phi^n = r * t; leading coefficient solves x^n = r
            FqElem cphi = pick_root(T, rd, ps.n);
            phi_ = ts_monomial(T, cdeg_, cphi, Rat(1, ps.n), cfg_.work_cap);

            // bottom torsion: t^{q-1} = -phi exactly
            FqElem ct = pick_root(T, T.neg(cphi), ps.q - 1);
            torsion_.clear();
            torsion_.push_back(ts_monomial(T, cdeg_, ct,
                                           Rat(1, ps.n * (ps.q - 1)),
                                           cfg_.work_cap));
            for (int j = 2; j <= cfg_.levels; ++j) {
                const TruncSeries& below = torsion_.back();
                // the first level solves against an exact right-hand side and
                // needs many iterations to climb toward the root separation;
                // deeper levels inherit a cap from below and settle fast
                int its = j == 2 ? cfg_.iters : 4;
                torsion_.push_back(solve_root_fixed(
                    static_cast<int>(ps.f),
                    [&](const TruncSeries& x) {
                        return ts_sub(below, ts_mul(phi_, x));
                    },
                    ts_root(squeeze_denominators(below,
                                                 kMaxSeriesDenominator / 256),
                            ps.f),
                    its));
            }

            // limit coordinates from the top two ladder levels
            limit_.clear();
            limit_prev_.clear();
            for (long long i = 1; i <= ps.n; ++i) {
                limit_.push_back(capped(ts_frobenius(
                    torsion_.back(), ps.f * (cfg_.levels - i))));
                limit_prev_.push_back(capped(ts_frobenius(
                    torsion_[cfg_.levels - 2], ps.f * (cfg_.levels - 1 - i))));
            }

            eta_ = capped(ts_pow(limit_[0], ps.q - 1));
            target_ = capped(alt_qdet(limit_, ps.f));

            long long pe = ipow(ps.p, ps.e);
            long long eps0 = pe == 2 ? (ps.nprime + 1) / 2 : 0;

            // theta^{p^{2e}} = -eta^{p^e - 1} (theta + 1). The digits of
            // theta accumulate at v(eta^{p^e-1})/(p^{2e}-1); the coefficient
            // only matters below p^{2e} times that, so truncating it there
            // keeps the iteration's exponent denominators small.
            long long p2e = pe * pe;
            TruncSeries eta_pow = ts_pow(eta_, pe - 1);
            Rat theta_wall = Rat(pe - 1, ps.n) * Rat(p2e, p2e - 1);
            eta_pow = ts_truncate(eta_pow, theta_wall);
            theta_ = solve_root_fixed(
                static_cast<int>(2 * ps.e),
                [&](const TruncSeries& x) {
                    return ts_neg(ts_mul(
                        eta_pow,
                        ts_add(x, ts_constant(T, cdeg_, T.one(cdeg_), x.cap))));
                },
                ts_root(ts_neg(eta_pow), 2 * ps.e), cfg_.iters);

            // lambda^q = eta^{q-1} (lambda - theta^{p^e}(theta + 1) + eps0 eta);
            // the precision is limited by the inner polynomial in theta, so
            // the coefficient can be truncated to match
            TruncSeries one_s =
                ts_constant(T, cdeg_, T.one(cdeg_), cfg_.work_cap);
            TruncSeries B = ts_sub(
                ts_mul(ts_pow(theta_, pe), ts_add(theta_, one_s)),
                ts_scale(eta_, T.scalar(cdeg_, eps0)));
            TruncSeries eta_q1 = ts_pow(eta_, ps.q - 1);
            eta_q1 = ts_truncate(
                eta_q1, ts_valuation(eta_q1) + (B.cap - ts_valuation(B)));
            lambda_ = solve_root_fixed(
                static_cast<int>(ps.f),
                [&](const TruncSeries& x) {
                    return ts_mul(eta_q1, ts_sub(x, B));
                },
                ts_root(squeeze_denominators(ts_neg(ts_mul(eta_q1, B)),
                                             kMaxSeriesDenominator / 256),
                        ps.f),
                cfg_.iters);

            // shifted coordinates
            shifted_.clear();
            shifted_.push_back(capped(ts_mul(limit_[0], ts_add(one_s, theta_))));
            for (long long i = 1; i <= ps.n - 2; ++i)
                shifted_.push_back(ts_root(shifted_.back(), ps.f));
            TruncSeries U = ts_mul(
                ts_pow(ts_add(one_s, theta_), -ps.n),
                ts_add(one_s, ts_scale(lambda_, T.scalar(cdeg_, ps.nprime))));
            shifted_.push_back(ts_mul(ts_root(shifted_.back(), ps.f),
                                      ts_root(U, ps.f * (ps.n - 1))));

            // refined n-th coordinate: the determinant is additive in its
            // last argument, so group the index tuples by that exponent and
            // solve sum_k C_k x^{q^k} = target by Newton steps. Dividing by
            // the k = 0 coefficient involves no fractional roots, so the
            // iteration costs no exponent-denominator growth.
            {
                std::vector<Rat> vals(ps.n);
                for (int i = 0; i < ps.n; ++i)
                    vals[i] = ts_valuation(shifted_[i]);
                // the cutoff must reach the tuple (1,...,n-1,0) carrying the
                // linear term of the last coordinate, which the division in
                // the Newton step needs
                Rat vlin = vals[ps.n - 1];
                for (int i = 0; i + 1 < ps.n; ++i)
                    vlin = vlin + qpow_exp(ps.q, i + 1) * vals[i];
                Rat cut = std::max(target_.cap, vlin + Rat(1, ps.n));
                std::map<long long, TruncSeries> Ck;
                for (const auto& tm : qdet_terms(vals, ps.q, cut)) {
                    TruncSeries term = ts_constant(
                        T, cdeg_, T.scalar(cdeg_, tm.sign), Rat(1000));
                    for (int i = 0; i + 1 < ps.n; ++i)
                        term = ts_mul(term,
                                      ts_frobenius(shifted_[i], ps.f * tm.m[i]));
                    long long k = tm.m[ps.n - 1];
                    auto it = Ck.find(k);
                    if (it == Ck.end()) Ck.emplace(k, term);
                    else it->second = ts_add(it->second, term);
                }
                auto eval_resid = [&](const TruncSeries& x) {
                    TruncSeries r = ts_neg(target_);
                    for (const auto& [k, C] : Ck)
                        r = ts_add(r, ts_mul(C, ts_frobenius(x, ps.f * k)));
                    return r;
                };
                TruncSeries C0inv = ts_inv(Ck.at(0));
                TruncSeries x = shifted_[ps.n - 1];
                TruncSeries resid = eval_resid(x);
                for (int it = 0; it < 12 && !ts_is_zero(resid); ++it) {
                    TruncSeries next = ts_sub(x, ts_mul(C0inv, resid));
                    TruncSeries nres = eval_resid(next);
                    if (!ts_is_zero(nres) &&
                        ts_valuation(nres) <= ts_valuation(resid))
                        break;  // no further progress within the caps
                    x = std::move(next);
                    resid = std::move(nres);
                }
                center_n_ = capped(x);
                center_resid_ = resid;
            }
            center_bound_ = Rat(ps.q * ps.q - ps.q + 1,
                                ps.n * ipow(ps.q, ps.n - 1) * (ps.q - 1));

            // compatible roots of eta
            eta_sqrt_ = ps.p == 2 ? ts_root(eta_, 1) : kth_root_unit(eta_, 2);
            eta_root_e1_ = kth_root_unit(eta_, pe + 1);
            return;
        } catch (const FieldTooSmall&) {
            continue;
        }
    }
    throw BudgetError("no admissible coefficient field within the size limit");
}

const TruncSeries& LocalChart::torsion(int j) const {
    if (j < 1 || j > static_cast<int>(torsion_.size()))
        throw std::invalid_argument("ladder level out of range");
    return torsion_[j - 1];
}

const TruncSeries& LocalChart::limit_coord(int i) const {
    if (i < 1 || i > static_cast<int>(limit_.size()))
        throw std::invalid_argument("coordinate index out of range");
    return limit_[i - 1];
}

const TruncSeries& LocalChart::shifted_coord(int i) const {
    if (i < 1 || i > static_cast<int>(shifted_.size()))
        throw std::invalid_argument("coordinate index out of range");
    return shifted_[i - 1];
}

const TruncSeries& LocalChart::center_coord(int i) const {
    if (i == static_cast<int>(cfg_.ps.n)) return center_n_;
    return shifted_coord(i);
}

LocalChart::Report LocalChart::validate() const {
    const ParamSet& ps = cfg_.ps;
    const Tower& T = *tower_;
    Report rep;
    long long pe = ipow(ps.p, ps.e);

    rep.torsion_valuations = true;
    rep.torsion_residuals = true;
    for (int j = 1; j <= cfg_.levels; ++j) {
        if (ts_valuation(torsion_[j - 1]) !=
            Rat(1, ps.n * ipow(ps.q, j - 1) * (ps.q - 1)))
            rep.torsion_valuations = false;
        TruncSeries res = ts_add(ts_mul(phi_, torsion_[j - 1]),
                                 ts_pow(torsion_[j - 1], ps.q));
        if (j > 1) res = ts_sub(res, torsion_[j - 2]);
        if (!ts_is_zero(res)) rep.torsion_residuals = false;
    }

    rep.limit_valuations = true;
    rep.limit_coherence = true;
    rep.limit_stable = true;
    for (long long i = 1; i <= ps.n; ++i) {
        if (ts_valuation(limit_[i - 1]) !=
            Rat(1, ps.n * ipow(ps.q, i - 1) * (ps.q - 1)))
            rep.limit_valuations = false;
        if (i < ps.n &&
            !ts_agree(limit_[i - 1], ts_frobenius(limit_[i], ps.f)))
            rep.limit_coherence = false;
        if (!ts_agree(limit_[i - 1], limit_prev_[i - 1]))
            rep.limit_stable = false;
    }

    rep.eta_valuation = ts_valuation(eta_) == Rat(1, ps.n);
    rep.target_valuation = ts_valuation(target_) == Rat(1, ps.q - 1);
    rep.theta_valuation =
        ts_valuation(theta_) == Rat(pe - 1, ps.n * pe * pe);
    rep.lambda_valuation =
        ts_valuation(lambda_) ==
        Rat(1, ps.n) * (Rat(1) - Rat(1, ps.q * pe));

    TruncSeries one_s = ts_constant(T, cdeg_, T.one(cdeg_), cfg_.work_cap);
    rep.theta_residual = ts_is_zero(
        ts_add(ts_frobenius(theta_, 2 * ps.e),
               ts_mul(ts_pow(eta_, pe - 1), ts_add(theta_, one_s))));
    {
        long long eps0 = pe == 2 ? (ps.nprime + 1) / 2 : 0;
        TruncSeries B = ts_sub(
            ts_mul(ts_pow(theta_, pe), ts_add(theta_, one_s)),
            ts_scale(eta_, T.scalar(cdeg_, eps0)));
        rep.lambda_residual = ts_is_zero(
            ts_sub(ts_pow(lambda_, ps.q),
                   ts_mul(ts_pow(eta_, ps.q - 1), ts_sub(lambda_, B))));
    }

    // Congruence between the determinant at the shifted point and at the
    // limit point. Computed symbolically: with xi_i = xi_1^{q^{1-i}}, every
    // index tuple contributes xi_1^E * ((1+theta)^g (1+n' lambda)^{q^c} - 1)
    // with exponents that cancel exactly, which keeps the precision of the
    // difference far above what the stored coordinates deliver directly.
    {
        Rat mix = Rat(1, ps.n) + Rat(1, ps.q - 1);
        std::vector<Rat> vals(ps.n);
        for (long long i = 1; i <= ps.n; ++i)
            vals[i - 1] = ts_valuation(limit_[i - 1]);
        TruncSeries one_theta = ts_add(one_s, theta_);
        TruncSeries one_lam = ts_add(
            one_s, ts_scale(lambda_, T.scalar(cdeg_, ps.nprime)));
        TruncSeries res = ts_zero(T, cdeg_, Rat(1000));
        for (const auto& tm : qdet_terms(vals, ps.q, mix + Rat(1, 2))) {
            Rat E(0);
            for (int i = 0; i < ps.n; ++i) E = E + qpow_exp(ps.q, tm.m[i] - i);
            long long c = tm.m[ps.n - 1] - (ps.n - 1);
            Rat g = E - Rat(ps.n) * qpow_exp(ps.q, c);
            TruncSeries unit = ts_sub(
                ts_mul(rat_power(one_theta, g, ps.f),
                       ts_frobenius(one_lam, ps.f * c)),
                one_s);
            TruncSeries term =
                ts_mul(rat_power(limit_[0], E, ps.f), unit);
            res = ts_add(res, ts_scale(term, T.scalar(cdeg_, tm.sign)));
        }
        rep.det_achieved = res.cap;
        rep.det_congruence = ts_is_zero(res) || ts_valuation(res) > mix;
    }
    rep.center_bound = center_bound_;
    {
        TruncSeries d = ts_sub(center_n_, shifted_[ps.n - 1]);
        rep.center_achieved = d.cap;
        rep.center_congruence =
            ts_is_zero(d) || ts_valuation(d) > center_bound_;
    }
    rep.center_residual = ts_is_zero(center_resid_);
    return rep;
}

LocalChart::Point LocalChart::base_point() const {
    Point P;
    for (long long i = 1; i <= cfg_.ps.n; ++i)
        P.X.push_back(center_coord(static_cast<int>(i)));
    return P;
}

LocalChart::Point LocalChart::sample_point(std::uint64_t seed) const {
    const ParamSet& ps = cfg_.ps;
    const Tower& T = *tower_;
    long long pe = ipow(ps.p, ps.e);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint64_t> dc(
        1, T.field_size(cdeg_) - 1);
    std::uniform_int_distribution<int> dk(0, 5);

    // last two relative coordinates: 1 + (monomial at or above the bound)
    Rat tail_bound(1, ps.n * ipow(ps.q, ps.n - 1) * (pe + 1));
    auto unit_near_one = [&](Rat bound) {
        Rat e = bound + Rat(dk(rng), 24);
        TruncSeries u = ts_constant(T, cdeg_, T.one(cdeg_), cfg_.work_cap);
        return ts_add(u, ts_monomial(T, cdeg_, T.from_index(cdeg_, dc(rng)), e,
                                     cfg_.work_cap));
    };
    std::vector<TruncSeries> x(ps.n,
                               ts_constant(T, cdeg_, T.one(cdeg_), cfg_.work_cap));
    x[ps.n - 2] = unit_near_one(tail_bound);
    x[ps.n - 1] = unit_near_one(tail_bound);
    TruncSeries ratio = ts_mul(x[ps.n - 2], ts_inv(x[ps.n - 1]));
    for (long long i = ps.n - 2; i >= 1; --i) {
        TruncSeries w = unit_near_one(Rat(1, 2 * ps.n * ipow(ps.q, i)));
        x[i - 1] = ts_mul(ts_mul(x[i], ts_frobenius(ratio,
                                                    ps.f * (ps.n - 1 - i))),
                          w);
    }
    Point P;
    for (long long i = 1; i <= ps.n; ++i)
        P.X.push_back(capped(
            ts_mul(center_coord(static_cast<int>(i)), x[i - 1])));

    // Put the point back on the fiber det = target by re-solving the first
    // coordinate: the determinant is additive in it, so group the index
    // tuples by the first exponent and run Newton steps with the k = 0
    // coefficient, exactly as for the refined center.
    std::map<long long, TruncSeries> Ck;
    std::vector<Rat> vals(ps.n);
    for (int i = 0; i < ps.n; ++i) vals[i] = ts_valuation(P.X[i]);
    // reach the tuple (0, 1, ..., n-1) carrying the linear term of the first
    // coordinate, which the Newton division needs
    Rat vlin = vals[0];
    for (int i = 1; i < ps.n; ++i)
        vlin = vlin + qpow_exp(ps.q, i) * vals[i];
    Rat cut = std::max(target_.cap, vlin + Rat(1, ps.n));
    for (const auto& tm : qdet_terms(vals, ps.q, cut)) {
        TruncSeries term = ts_constant(
            T, cdeg_, T.scalar(cdeg_, tm.sign), Rat(1000));
        for (int i = 1; i < ps.n; ++i)
            term = ts_mul(term, ts_frobenius(P.X[i], ps.f * tm.m[i]));
        long long k = tm.m[0];
        auto it = Ck.find(k);
        if (it == Ck.end()) Ck.emplace(k, term);
        else it->second = ts_add(it->second, term);
    }
    auto eval_resid = [&](const TruncSeries& v) {
        TruncSeries r = ts_neg(target_);
        for (const auto& [k, C] : Ck)
            r = ts_add(r, ts_mul(C, ts_frobenius(v, ps.f * k)));
        return r;
    };
    TruncSeries C0inv = ts_inv(Ck.at(0));
    TruncSeries xs = P.X[0];
    TruncSeries resid = eval_resid(xs);
    for (int it = 0; it < 12 && !ts_is_zero(resid); ++it) {
        TruncSeries next = ts_sub(xs, ts_mul(C0inv, resid));
        TruncSeries nres = eval_resid(next);
        if (!ts_is_zero(nres) &&
            ts_valuation(nres) <= ts_valuation(resid))
            break;
        xs = std::move(next);
        resid = std::move(nres);
    }
    P.X[0] = capped(xs);
    return P;
}

namespace {

// v(d) >= bound, deciding with the digits that are actually known: a
// violation must be visible below the bound to be reported. The center is
// itself only computed to finite precision, so digits past the cap are
// treated as absent rather than unknown.
bool val_at_least(const TruncSeries& d, Rat bound) {
    if (!ts_is_zero(d)) return ts_valuation(d) >= bound;
    return true;
}

}  // namespace

bool LocalChart::member(const Point& P) const {
    const ParamSet& ps = cfg_.ps;
    if (static_cast<long long>(P.X.size()) != ps.n)
        throw std::invalid_argument("point has the wrong arity");
    long long pe = ipow(ps.p, ps.e);
    std::vector<TruncSeries> x;
    for (long long i = 1; i <= ps.n; ++i)
        x.push_back(ts_mul(P.X[i - 1],
                           ts_inv(center_coord(static_cast<int>(i)))));
    TruncSeries one_s =
        ts_constant(*tower_, cdeg_, tower_->one(cdeg_), cfg_.work_cap);
    TruncSeries tail_ratio = ts_mul(x[ps.n - 2], ts_inv(x[ps.n - 1]));
    for (long long i = 1; i <= ps.n - 2; ++i) {
        TruncSeries lhs = ts_mul(x[i - 1], ts_inv(x[i]));
        TruncSeries rhs = ts_frobenius(tail_ratio, ps.f * (ps.n - 1 - i));
        if (!val_at_least(ts_sub(lhs, rhs), Rat(1, 2 * ps.n * ipow(ps.q, i))))
            return false;
    }
    Rat tail_bound(1, ps.n * ipow(ps.q, ps.n - 1) * (pe + 1));
    for (long long i = ps.n - 1; i <= ps.n; ++i)
        if (!val_at_least(ts_sub(x[i - 1], one_s), tail_bound)) return false;
    return true;
}

LocalChart::CoordRecord LocalChart::coords(const Point& P) const {
    if (!member(P))
        throw VerifyError("point lies outside the affinoid membership bounds");
    const ParamSet& ps = cfg_.ps;
    const Tower& T = *tower_;
    long long pe = ipow(ps.p, ps.e);
    CoordRecord rec;

    std::vector<TruncSeries> x;
    for (long long i = 1; i <= ps.n; ++i)
        x.push_back(squeeze_denominators(
            ts_mul(P.X[i - 1], ts_inv(center_coord(static_cast<int>(i)))),
            kMaxSeriesDenominator / 1024));
    TruncSeries one_s = ts_constant(T, cdeg_, T.one(cdeg_), cfg_.work_cap);

    for (long long i = 1; i <= ps.n - 1; ++i)
        rec.s.push_back(ts_pow(ts_mul(x[i - 1], ts_inv(x[i])),
                               ipow(ps.q, i) * (ps.q - 1)));
    for (long long i = 1; i <= ps.n - 2; ++i)
        rec.Ycap.push_back(ts_sub(
            ts_mul(rec.s[i - 1], ts_inv(rec.s[ps.n - 2])), one_s));
    rec.Ycap.push_back(ts_sub(rec.s[ps.n - 2], one_s));

    auto f0 = [&](const std::vector<TruncSeries>& Xs) {
        TruncSeries acc = ts_zero(T, cdeg_, cfg_.work_cap);
        for (long long i = 1; i <= ps.n - 1; ++i)
            acc = ts_add(acc,
                         ts_pow(ts_mul(Xs[i - 1], ts_inv(Xs[i])),
                                ipow(ps.q, i - 1) * (ps.q - 1)));
        TruncSeries corner =
            ts_mul(ts_frobenius(Xs[ps.n - 1], ps.f * ps.n), ts_inv(Xs[0]));
        return ts_add(acc, ts_root(ts_pow(corner, ps.q - 1), ps.f));
    };
    std::vector<TruncSeries> center;
    for (long long i = 1; i <= ps.n; ++i)
        center.push_back(center_coord(static_cast<int>(i)));
    rec.S = squeeze_denominators(ts_sub(f0(P.X), f0(center)),
                                 kMaxSeriesDenominator / 1024);

    // z as the double Frobenius-orbit sum
    TruncSeries T0 = ts_mul(ts_mul(ts_pow(theta_, pe), rec.Ycap[ps.n - 2]),
                            ts_inv(eta_));
    FqElem npr_inv = T.inv(T.scalar(cdeg_, ps.nprime));
    TruncSeries T1 =
        ts_neg(ts_scale(ts_mul(rec.S, ts_inv(eta_)), npr_inv));
    rec.z = ts_zero(T, cdeg_, cfg_.work_cap);
    for (long long i = 0; i < ps.e / ps.m; ++i)
        rec.z = ts_add(rec.z, ts_frobenius(T0, i * ps.m));
    for (long long i = 0; i < ps.f / ps.m; ++i)
        rec.z = ts_add(rec.z, ts_frobenius(T1, i * ps.m));

    // Euclidean chain f = m_0, e = m_1, ..., m_N = gcd
    rec.chain_m = {ps.f, ps.e};
    while (rec.chain_m.back() != ps.m) {
        long long a = rec.chain_m[rec.chain_m.size() - 2];
        long long b = rec.chain_m.back();
        rec.chain_q.push_back(a / b);
        rec.chain_m.push_back(a % b);
    }
    rec.chain_N = static_cast<int>(rec.chain_m.size()) - 1;

    std::vector<TruncSeries> Tchain{T0, T1};
    for (int i = 1; i + 1 <= rec.chain_N; ++i) {
        long long mi = rec.chain_m[i], mi1 = rec.chain_m[i + 1];
        long long ni = rec.chain_q[i - 1];
        TruncSeries next = Tchain[i - 1];
        for (long long j = 0; j < ni; ++j)
            next = ts_add(next, ts_frobenius(Tchain[i], j * mi + mi1));
        Tchain.push_back(next);
    }
    FqElem sign = T.scalar(cdeg_, rec.chain_N % 2 ? -1 : 1);
    rec.Ybig = squeeze_denominators(
        ts_scale(ts_mul(ts_mul(eta_, ts_inv(ts_pow(theta_, pe))),
                        ts_frobenius(Tchain[rec.chain_N], ps.f - ps.m)),
                 sign),
        kMaxSeriesDenominator / 1024);

    // Both checks decide with the digits that are actually known: the point's
    // coordinates carry finite precision, so a violation must be visible.
    TruncSeries ydiff = ts_sub(rec.Ybig, rec.Ycap[ps.n - 2]);
    rec.y_congruent = ts_is_zero(ydiff) ||
                      ts_valuation(ydiff) > Rat(1, ps.n * (pe + 1));
    rec.z_nonneg = ts_is_zero(rec.z) || ts_valuation(rec.z) >= Rat(0);

    rec.y = ts_mul(rec.Ybig, ts_inv(eta_root_e1_));
    for (long long i = 1; i <= ps.n - 2; ++i)
        rec.y_small.push_back(squeeze_denominators(
            ts_mul(rec.Ycap[i - 1], ts_inv(eta_sqrt_)),
            kMaxSeriesDenominator / 1024));
    return rec;
}

LocalChart::ReductionReport LocalChart::reduce(const Point& P) const {
    const ParamSet& ps = cfg_.ps;
    const Tower& T = *tower_;
    long long pe = ipow(ps.p, ps.e);
    CoordRecord rec = coords(P);
    ReductionReport rep;

    TruncSeries quad = ts_pow(rec.Ycap[ps.n - 2], pe + 1);
    TruncSeries cross = ts_zero(T, cdeg_, cfg_.work_cap);
    for (long long i = 1; i <= ps.n - 2; ++i)
        for (long long j = i; j <= ps.n - 2; ++j)
            cross = ts_add(cross, ts_mul(rec.Ycap[i - 1], rec.Ycap[j - 1]));
    FqElem npr_inv = T.inv(T.scalar(cdeg_, ps.nprime));
    TruncSeries rhs =
        ts_mul(ts_inv(eta_), ts_sub(quad, ts_scale(cross, npr_inv)));
    TruncSeries res =
        ts_sub(ts_sub(ts_frobenius(rec.z, ps.m), rec.z), rhs);
    // no visible digit at nonpositive valuation: the defect of the reduction
    // identity stays in the maximal ideal as far as the digits reach
    rep.residual_valuation = ts_is_zero(res) ? res.cap : ts_valuation(res);
    rep.residual_positive = ts_is_zero(res) || ts_valuation(res) > Rat(0);

    rep.zbar = ts_coeff(rec.z, Rat(0));
    rep.ybar = ts_coeff(rec.y, Rat(0));
    for (long long i = 1; i <= ps.n - 2; ++i)
        rep.ybar_small.push_back(ts_coeff(rec.y_small[i - 1], Rat(0)));
    FqElem lhs = T.sub(T.frob(rep.zbar, ps.m), rep.zbar);
    FqElem quad_bar = T.pow(rep.ybar, pe + 1);
    FqElem cross_bar = T.zero(cdeg_);
    for (std::size_t i = 0; i < rep.ybar_small.size(); ++i)
        for (std::size_t j = i; j < rep.ybar_small.size(); ++j)
            cross_bar = T.add(cross_bar,
                              T.mul(rep.ybar_small[i], rep.ybar_small[j]));
    rep.on_variety =
        lhs == T.sub(quad_bar, T.mul(npr_inv, cross_bar));
    return rep;
}

}  // namespace arith
