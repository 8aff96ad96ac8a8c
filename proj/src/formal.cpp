#include "arith/formal.hpp"

#include <algorithm>
#include <stdexcept>

#include "arith/errors.hpp"

namespace arith {

namespace {

void check_bi_compat(const BiSeries& a, const BiSeries& b) {
    if (a.T != b.T || a.deg != b.deg)
        throw std::invalid_argument("bivariate operands over different fields");
}

}  // namespace

BiSeries bi_zero(const Tower& T, int deg, int bound) {
    if (bound < 1) throw std::invalid_argument("degree bound must be positive");
    BiSeries F;
    F.T = &T;
    F.deg = deg;
    F.bound = bound;
    return F;
}

void bi_set(BiSeries& F, int dx, int dy, const TruncSeries& c) {
    if (c.T != F.T || c.deg != F.deg)
        throw std::invalid_argument("coefficient field mismatch");
    if (dx < 0 || dy < 0) throw std::invalid_argument("negative degree");
    if (dx + dy > F.bound) return;
    if (ts_is_zero(c))
        F.terms.erase({dx, dy});
    else
        F.terms[{dx, dy}] = c;
}

TruncSeries bi_coeff(const BiSeries& F, int dx, int dy, Rat cap) {
    auto it = F.terms.find({dx, dy});
    if (it == F.terms.end()) return ts_zero(*F.T, F.deg, cap);
    return it->second;
}

BiSeries bi_add(const BiSeries& a, const BiSeries& b) {
    check_bi_compat(a, b);
    BiSeries r = bi_zero(*a.T, a.deg, std::min(a.bound, b.bound));
    for (const auto& [d, c] : a.terms)
        if (d.first + d.second <= r.bound) r.terms[d] = c;
    for (const auto& [d, c] : b.terms) {
        if (d.first + d.second > r.bound) continue;
        auto it = r.terms.find(d);
        if (it == r.terms.end())
            r.terms[d] = c;
        else {
            it->second = ts_add(it->second, c);
            if (ts_is_zero(it->second)) r.terms.erase(it);
        }
    }
    return r;
}

BiSeries bi_mul(const BiSeries& a, const BiSeries& b) {
    check_bi_compat(a, b);
    BiSeries r = bi_zero(*a.T, a.deg, std::min(a.bound, b.bound));
    for (const auto& [da, ca] : a.terms)
        for (const auto& [db, cb] : b.terms) {
            int dx = da.first + db.first, dy = da.second + db.second;
            if (dx + dy > r.bound) continue;
            TruncSeries c = ts_mul(ca, cb);
            auto it = r.terms.find({dx, dy});
            if (it == r.terms.end())
                r.terms[{dx, dy}] = c;
            else {
                it->second = ts_add(it->second, c);
                if (ts_is_zero(it->second)) r.terms.erase(it);
            }
        }
    return r;
}

BiSeries bi_scale(const BiSeries& a, const TruncSeries& c) {
    BiSeries r = bi_zero(*a.T, a.deg, a.bound);
    for (const auto& [d, ca] : a.terms) {
        TruncSeries v = ts_mul(ca, c);
        if (!ts_is_zero(v)) r.terms[d] = v;
    }
    return r;
}

TruncSeries bi_eval(const BiSeries& F, const TruncSeries& x,
                    const TruncSeries& y) {
    int mx = 0, my = 0;
    for (const auto& [d, c] : F.terms) {
        mx = std::max(mx, d.first);
        my = std::max(my, d.second);
    }
    Rat cap = std::min(x.cap, y.cap);
    std::vector<TruncSeries> xp{ts_constant(*F.T, F.deg, F.T->one(F.deg), cap)};
    for (int i = 1; i <= mx; ++i) xp.push_back(ts_mul(xp.back(), x));
    std::vector<TruncSeries> yp{xp[0]};
    for (int i = 1; i <= my; ++i) yp.push_back(ts_mul(yp.back(), y));
    TruncSeries acc = ts_zero(*F.T, F.deg, cap);
    for (const auto& [d, c] : F.terms)
        acc = ts_add(acc, ts_mul(c, ts_mul(xp[d.first], yp[d.second])));
    return acc;
}

FormalModule make_formal_module(const Tower& T, FormalKind kind, int deg,
                                long long f, long long n, Rat coeff_cap) {
    TruncSeries pi =
        kind == FormalKind::base
            ? ts_monomial(T, deg, T.one(deg), Rat(1, n), coeff_cap)
            : ts_uniformizer(T, deg, coeff_cap);
    return make_formal_module(T, kind, deg, f, n, std::move(pi), coeff_cap);
}

FormalModule make_formal_module(const Tower& T, FormalKind kind, int deg,
                                long long f, long long n, TruncSeries pi,
                                Rat coeff_cap) {
    if (f < 1 || n < 1) throw std::invalid_argument("need f >= 1 and n >= 1");
    FormalModule M;
    M.kind = kind;
    M.T = &T;
    M.deg = deg;
    M.f = f;
    M.n = n;
    M.pi = std::move(pi);
    M.coeff_cap = coeff_cap;
    if (M.pi.T != &T || M.pi.deg != deg)
        throw std::invalid_argument("pi lives over the wrong field");
    return M;
}

int formal_max_degree(const FormalModule& M) {
    long long q = ipow(M.T->p(), M.f);
    long long qn = 1;
    for (long long i = 0; i < M.n; ++i) {
        qn *= q;
        if (qn > 1'000'000) throw BudgetError("formal degree range too large");
    }
    return static_cast<int>(qn + q);
}

std::vector<TruncSeries> formal_log_coeffs(const FormalModule& M,
                                           int degree_bound) {
    long long q = ipow(M.T->p(), M.f);
    long long s = M.kind == FormalKind::full_power ? M.n : 1;
    std::vector<TruncSeries> c;
    c.push_back(ts_constant(*M.T, M.deg, M.T->one(M.deg), M.coeff_cap));
    long long step = 1;
    for (long long i = 1;; ++i) {
        bool over = false;
        for (long long j = 0; j < s; ++j) {
            step *= q;
            if (step > degree_bound) { over = true; break; }
        }
        if (over) break;
        switch (M.kind) {
            case FormalKind::base: {
                // l_i = l_{i-1} / (pi - pi^{q^i})
                TruncSeries d = ts_sub(M.pi, ts_pow(M.pi, ipow(q, i)));
                c.push_back(ts_mul(c.back(), ts_inv(d)));
                break;
            }
            case FormalKind::full_power:
                c.push_back(ts_monomial(*M.T, M.deg, M.T->one(M.deg), Rat(-i),
                                        M.coeff_cap));
                break;
            case FormalKind::alt_power: {
                long long sg = ((M.n - 1) * i) % 2 == 0 ? 1 : -1;
                c.push_back(ts_monomial(*M.T, M.deg, M.T->scalar(M.deg, sg),
                                        Rat(-i), M.coeff_cap));
                break;
            }
        }
    }
    return c;
}

std::vector<TruncSeries> formal_exp_coeffs(const FormalModule& M,
                                           int degree_bound) {
    auto c = formal_log_coeffs(M, degree_bound);
    long long s = M.kind == FormalKind::full_power ? M.n : 1;
    std::vector<TruncSeries> e;
    e.push_back(c[0]);
    // log(exp(X)) = X termwise: sum_{i+j=k} c_i e_j^{q^{is}} = 0 for k >= 1
    for (std::size_t k = 1; k < c.size(); ++k) {
        TruncSeries acc = ts_zero(*M.T, M.deg, M.coeff_cap);
        for (std::size_t i = 1; i <= k; ++i)
            acc = ts_add(acc,
                         ts_mul(c[i], ts_frobenius(e[k - i], M.f * i * s)));
        e.push_back(ts_neg(acc));
    }
    return e;
}

FormalSumReport formal_add(const FormalModule& M, int degree_bound) {
    if (degree_bound < 1 || degree_bound > formal_max_degree(M))
        throw BudgetError("formal addition degree bound out of range");
    long long q = ipow(M.T->p(), M.f);
    long long s = M.kind == FormalKind::full_power ? M.n : 1;
    auto c = formal_log_coeffs(M, degree_bound);
    auto e = formal_exp_coeffs(M, degree_bound);

    // Z = log X + log Y as a bivariate polynomial
    BiSeries Z = bi_zero(*M.T, M.deg, degree_bound);
    long long d = 1;
    for (std::size_t i = 0; i < c.size(); ++i) {
        bi_set(Z, static_cast<int>(d), 0, c[i]);
        bi_set(Z, 0, static_cast<int>(d), c[i]);
        d *= ipow(q, s);
    }

    // F = sum_j e_j Z^{q^{js}}
    BiSeries F = bi_zero(*M.T, M.deg, degree_bound);
    d = 1;
    for (std::size_t j = 0; j < e.size(); ++j) {
        BiSeries Zp = bi_zero(*M.T, M.deg, degree_bound);
        bi_set(Zp, 0, 0, ts_constant(*M.T, M.deg, M.T->one(M.deg), M.coeff_cap));
        long long k = d;
        BiSeries base = Z;
        while (k > 0) {
            if (k & 1) Zp = bi_mul(Zp, base);
            k >>= 1;
            if (k) base = bi_mul(base, base);
        }
        F = bi_add(F, bi_scale(Zp, e[j]));
        d *= ipow(q, s);
    }

    FormalSumReport rep;
    rep.threshold = static_cast<int>(
        M.kind == FormalKind::full_power ? ipow(q, M.n) : q);
    // sections along Y = 0 and X = 0 must be the identity
    FqElem one = M.T->one(M.deg);
    rep.linear_sections =
        F.terms.count({1, 0}) == 1 && F.terms.count({0, 1}) == 1;
    for (const auto& [dd, cc] : F.terms) {
        if (dd.second == 0 &&
            !(dd.first == 1 && ts_coeff(cc, Rat(0)) == one && cc.terms.size() == 1))
            rep.linear_sections = false;
        if (dd.first == 0 &&
            !(dd.second == 1 && ts_coeff(cc, Rat(0)) == one && cc.terms.size() == 1))
            rep.linear_sections = false;
    }
    rep.symmetric = true;
    for (const auto& [dd, cc] : F.terms) {
        auto it = F.terms.find({dd.second, dd.first});
        if (it == F.terms.end() || !ts_agree(cc, it->second))
            rep.symmetric = false;
    }
    rep.near_additive = true;
    for (const auto& [dd, cc] : F.terms) {
        if (dd.first == 0 || dd.second == 0) continue;
        int tot = dd.first + dd.second;
        if (rep.first_mixed_degree < 0 || tot < rep.first_mixed_degree)
            rep.first_mixed_degree = tot;
        if (tot < rep.threshold) rep.near_additive = false;
    }
    rep.F = std::move(F);
    return rep;
}

TruncSeries formal_apply_pi(const FormalModule& M, const TruncSeries& x) {
    long long q = ipow(M.T->p(), M.f);
    return ts_add(ts_mul(M.pi, x), ts_pow(x, q));
}

namespace {

// Largest exponent for which q^m still fits in a long long.
long long qpow_limit(long long q) {
    long long m = 0, v = 1;
    while (v <= (1ll << 61) / q) { v *= q; ++m; }
    return m;
}

Rat qpow_rat(long long q, long long m) {
    long long L = qpow_limit(q);
    if (m < -L || m > L) throw BudgetError("q-power exponent out of range");
    return m >= 0 ? Rat(ipow(q, m)) : Rat(1, ipow(q, -m));
}

void qdet_enumerate(const std::vector<Rat>& vals, long long q, Rat cutoff,
                    std::uint64_t budget, std::size_t i, long long partial_sum,
                    Rat partial_val, std::vector<long long>& m,
                    const std::vector<long long>& upper,
                    const std::vector<long long>& upper_suffix,
                    std::vector<QdetTerm>& out, std::uint64_t& steps) {
    int n = static_cast<int>(vals.size());
    long long target = static_cast<long long>(n) * (n - 1) / 2;
    if (++steps > budget)
        throw BudgetError("determinant index set exceeds the enumeration budget");
    if (i + 1 == vals.size()) {
        long long last = target - partial_sum;
        if (last > upper[i] || last < -qpow_limit(q)) return;
        if (partial_val + qpow_rat(q, last) * vals[i] >= cutoff) return;
        m[i] = last;
        // residues mod n must be pairwise distinct
        std::vector<int> res(n);
        for (int a = 0; a < n; ++a)
            res[a] = static_cast<int>(((m[a] % n) + n) % n);
        std::vector<bool> seen(n, false);
        for (int a = 0; a < n; ++a) {
            if (seen[res[a]]) return;
            seen[res[a]] = true;
        }
        int inv = 0;
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                if (res[a] > res[b]) ++inv;
        out.push_back({m, inv % 2 ? -1 : 1});
        return;
    }
    long long lo = target - partial_sum - upper_suffix[i + 1];
    lo = std::max(lo, -qpow_limit(q));
    for (long long mi = lo; mi <= upper[i]; ++mi) {
        Rat val = partial_val + qpow_rat(q, mi) * vals[i];
        if (val >= cutoff) break;
        m[i] = mi;
        qdet_enumerate(vals, q, cutoff, budget, i + 1, partial_sum + mi, val, m,
                       upper, upper_suffix, out, steps);
    }
}

}  // namespace

std::vector<QdetTerm> qdet_terms(const std::vector<Rat>& vals, long long q,
                                 Rat cutoff, std::uint64_t budget) {
    int n = static_cast<int>(vals.size());
    if (n < 1) throw std::invalid_argument("need at least one valuation");
    for (const Rat& v : vals)
        if (v <= Rat(0))
            throw std::invalid_argument(
                "determinant index set needs positive valuations");
    const long long L = qpow_limit(q);
    std::vector<long long> upper(n, 0);
    for (int i = 0; i < n; ++i) {
        // largest m with q^m * vals[i] < cutoff, found by walking the ratio
        // so that no intermediate rational outgrows the integer type
        Rat ratio = cutoff / vals[i];
        long long m2;
        if (ratio > Rat(1)) {
            m2 = 0;
            Rat v(q);
            while (m2 < L && v < ratio) {
                v = v * Rat(q);
                ++m2;
            }
        } else {
            m2 = -1;
            Rat v(1, q);
            while (v >= ratio) {
                --m2;
                if (m2 < -L || v.denominator() > (1ll << 40))
                    return {};  // this factor alone exceeds the cutoff
                v = v / Rat(q);
            }
        }
        upper[i] = m2;
    }
    std::vector<long long> upper_suffix(n + 1, 0);
    for (int i = n - 1; i >= 0; --i)
        upper_suffix[i] = upper_suffix[i + 1] + upper[i];
    std::vector<QdetTerm> out;
    std::vector<long long> m(n, 0);
    std::uint64_t steps = 0;
    qdet_enumerate(vals, q, cutoff, budget, 0, 0, Rat(0), m, upper,
                   upper_suffix, out, steps);
    return out;
}

TruncSeries alt_qdet(const std::vector<TruncSeries>& X, long long f,
                     std::uint64_t budget) {
    if (X.empty()) throw std::invalid_argument("need at least one series");
    const Tower& T = *X[0].T;
    int n = static_cast<int>(X.size());
    long long q = ipow(T.p(), f);
    std::uint64_t nfact = 1;
    for (int i = 2; i <= n; ++i) nfact *= i;
    if (nfact * n > budget) throw BudgetError("alternating determinant too large");

    // Pass 1: the n! terms with exponents (0,...,n-1) fix the reachable
    // precision; their cap bounds the valuations worth enumerating.
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    TruncSeries acc = ts_zero(T, X[0].deg, Rat(1000));
    do {
        int inv = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (perm[i] > perm[j]) ++inv;
        TruncSeries term = ts_constant(
            T, X[0].deg, T.scalar(X[0].deg, inv % 2 ? -1 : 1), Rat(1000));
        for (int i = 0; i < n; ++i)
            term = ts_mul(term, ts_frobenius(X[i], f * perm[i]));
        acc = ts_add(acc, term);
    } while (std::next_permutation(perm.begin(), perm.end()));

    // Pass 2: every other integer exponent tuple whose term can still carry
    // a digit below that cap.
    std::vector<Rat> vals(n);
    for (int i = 0; i < n; ++i) vals[i] = ts_valuation(X[i]);
    for (const auto& tm : qdet_terms(vals, q, acc.cap, budget)) {
        bool is_perm = true;
        for (long long mi : tm.m)
            if (mi < 0 || mi >= n) is_perm = false;
        if (is_perm) continue;
        TruncSeries term = ts_constant(T, X[0].deg,
                                       T.scalar(X[0].deg, tm.sign), Rat(1000));
        for (int i = 0; i < n; ++i)
            term = ts_mul(term, ts_frobenius(X[i], f * tm.m[i]));
        acc = ts_add(acc, term);
    }
    return acc;
}

DeltaReport delta_eval(const std::vector<TruncSeries>& X, long long f,
                       int degree_bound, std::uint64_t budget) {
    int n = static_cast<int>(X.size());
    if (n < 2 || n > 4)
        throw std::invalid_argument("folded determinant supports 2 <= n <= 4");
    const Tower& T = *X[0].T;
    int deg = X[0].deg;
    long long q = ipow(T.p(), f);

    DeltaReport rep;
    rep.bound = Rat(1, n) + Rat(1, q - 1);
    rep.plain = alt_qdet(X, f, budget);

    FormalModule M = make_formal_module(T, FormalKind::alt_power, deg, f, n);
    if (degree_bound == 0) degree_bound = formal_max_degree(M);
    BiSeries F = formal_add(M, degree_bound).F;

    // fold the same terms through the module's addition law
    std::vector<Rat> vals(n);
    for (int i = 0; i < n; ++i) vals[i] = ts_valuation(X[i]);
    TruncSeries acc = ts_zero(T, deg, rep.plain.cap);
    for (const auto& tm : qdet_terms(vals, q, rep.plain.cap, budget)) {
        TruncSeries term =
            ts_constant(T, deg, T.scalar(deg, tm.sign), Rat(1000));
        for (int i = 0; i < n; ++i)
            term = ts_mul(term, ts_frobenius(X[i], f * tm.m[i]));
        acc = bi_eval(F, acc, term);
    }
    rep.folded = acc;

    rep.hypotheses_ok = true;
    for (int i = 0; i < n; ++i)
        if (ts_valuation(X[i]) < Rat(1, n * ipow(q, i) * (q - 1)))
            rep.hypotheses_ok = false;
    if (rep.hypotheses_ok)
        rep.congruent = ts_congruent_above(rep.plain, rep.folded, rep.bound);
    return rep;
}

}  // namespace arith
