#include "arith/series.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "arith/errors.hpp"

namespace arith {

namespace {

void check_denominator(const Rat& e) {
    if (e.denominator() > kMaxSeriesDenominator)
        throw BudgetError("series exponent denominator exceeds the configured bound");
}

void check_compatible(const TruncSeries& a, const TruncSeries& b) {
    if (a.T != b.T || a.deg != b.deg)
        throw std::invalid_argument("series live over different coefficient fields");
}

// Drop zero coefficients and anything at or beyond the cap.
void normalize(TruncSeries& a) {
    check_denominator(a.cap);
    for (auto it = a.terms.begin(); it != a.terms.end();) {
        check_denominator(it->first);
        if (a.T->is_zero(it->second) || it->first >= a.cap)
            it = a.terms.erase(it);
        else
            ++it;
    }
}

}  // namespace

TruncSeries ts_zero(const Tower& T, int deg, Rat cap) {
    TruncSeries a;
    a.T = &T;
    a.deg = deg;
    a.cap = cap;
    T.zero(deg);  // validates deg
    normalize(a);
    return a;
}

TruncSeries ts_monomial(const Tower& T, int deg, FqElem c, Rat e, Rat cap) {
    TruncSeries a = ts_zero(T, deg, cap);
    if (c.deg != deg) throw std::invalid_argument("monomial coefficient degree mismatch");
    a.terms[e] = c;
    normalize(a);
    return a;
}

TruncSeries ts_uniformizer(const Tower& T, int deg, Rat cap) {
    return ts_monomial(T, deg, T.one(deg), Rat(1), cap);
}

TruncSeries ts_constant(const Tower& T, int deg, FqElem c, Rat cap) {
    return ts_monomial(T, deg, c, Rat(0), cap);
}

bool ts_is_zero(const TruncSeries& a) { return a.terms.empty(); }

Rat ts_valuation(const TruncSeries& a) {
    if (a.terms.empty()) return a.cap;
    return a.terms.begin()->first;
}

FqElem ts_coeff(const TruncSeries& a, Rat e) {
    auto it = a.terms.find(e);
    if (it == a.terms.end()) return a.T->zero(a.deg);
    return it->second;
}

FqElem ts_leading(const TruncSeries& a) {
    if (a.terms.empty())
        throw std::invalid_argument("series has no known terms");
    return a.terms.begin()->second;
}

TruncSeries ts_add(const TruncSeries& a, const TruncSeries& b) {
    check_compatible(a, b);
    TruncSeries r = ts_zero(*a.T, a.deg, std::min(a.cap, b.cap));
    r.terms = a.terms;
    for (const auto& [e, c] : b.terms) {
        auto it = r.terms.find(e);
        if (it == r.terms.end())
            r.terms[e] = c;
        else
            it->second = a.T->add(it->second, c);
    }
    normalize(r);
    return r;
}

TruncSeries ts_neg(const TruncSeries& a) {
    TruncSeries r = a;
    for (auto& [e, c] : r.terms) c = a.T->neg(c);
    return r;
}

TruncSeries ts_sub(const TruncSeries& a, const TruncSeries& b) {
    return ts_add(a, ts_neg(b));
}

TruncSeries ts_mul(const TruncSeries& a, const TruncSeries& b) {
    check_compatible(a, b);
    // Digits of the product are trustworthy below min(cap(a)+v(b), cap(b)+v(a)).
    Rat cap = std::min(a.cap + ts_valuation(b), b.cap + ts_valuation(a));
    TruncSeries r = ts_zero(*a.T, a.deg, cap);
    for (const auto& [ea, ca] : a.terms)
        for (const auto& [eb, cb] : b.terms) {
            Rat e = ea + eb;
            if (e >= cap) continue;
            check_denominator(e);
            FqElem c = a.T->mul(ca, cb);
            auto it = r.terms.find(e);
            if (it == r.terms.end())
                r.terms[e] = c;
            else
                it->second = a.T->add(it->second, c);
        }
    normalize(r);
    return r;
}

TruncSeries ts_scale(const TruncSeries& a, FqElem c) {
    return ts_shift(a, c, Rat(0));
}

TruncSeries ts_shift(const TruncSeries& a, FqElem c, Rat e) {
    if (c.deg != a.deg) throw std::invalid_argument("scale coefficient degree mismatch");
    TruncSeries r = ts_zero(*a.T, a.deg, a.cap + e);
    for (const auto& [ea, ca] : a.terms) r.terms[ea + e] = a.T->mul(ca, c);
    normalize(r);
    return r;
}

TruncSeries ts_inv(const TruncSeries& a) {
    if (a.terms.empty())
        throw std::invalid_argument("cannot invert a series with no known terms");
    Rat v = ts_valuation(a);
    FqElem lead = ts_leading(a);
    // a = lead * t^v * (1 + u) with v(u) > 0; relative precision cap(a) - v.
    Rat rel = a.cap - v;
    TruncSeries u = ts_shift(a, a.T->inv(lead), -v);
    u = ts_truncate(u, rel);
    u.terms.erase(Rat(0));  // u = a / (lead t^v) - 1
    // 1/(1+u) = sum (-u)^k while k*v(u) < rel
    TruncSeries acc = ts_constant(*a.T, a.deg, a.T->one(a.deg), rel);
    TruncSeries powu = acc;
    TruncSeries mu = ts_neg(u);
    if (!ts_is_zero(mu)) {
        Rat vu = ts_valuation(mu);
        for (Rat got = vu; got < rel; got += vu) {
            powu = ts_mul(powu, mu);
            powu = ts_truncate(powu, rel);
            acc = ts_add(acc, powu);
        }
    }
    acc.cap = rel;
    // result cap: cap(a) - 2v(a), per v(1/a) = -v(a)
    TruncSeries r = ts_shift(acc, a.T->inv(lead), -v);
    return r;
}

TruncSeries ts_pow(const TruncSeries& a, long long k) {
    if (k < 0) return ts_pow(ts_inv(a), -k);
    TruncSeries r = ts_constant(*a.T, a.deg, a.T->one(a.deg), a.cap);
    if (k == 0) return r;
    // plain square-and-multiply; caps propagate through ts_mul
    TruncSeries base = a;
    while (k > 0) {
        if (k & 1) r = ts_mul(r, base);
        k >>= 1;
        if (k) base = ts_mul(base, base);
    }
    return r;
}

TruncSeries ts_frobenius(const TruncSeries& a, long long i) {
    if (i < 0) return ts_root(a, -i);
    long long s = ipow(a.T->p(), i);
    TruncSeries r = ts_zero(*a.T, a.deg, a.cap * s);
    for (const auto& [e, c] : a.terms) r.terms[e * s] = a.T->frob(c, i);
    normalize(r);
    return r;
}

TruncSeries ts_root(const TruncSeries& a, long long i) {
    if (i < 0) return ts_frobenius(a, -i);
    long long s = ipow(a.T->p(), i);
    // c^{p^-i} = c^{p^{deg - (i mod deg)}} since c^{p^deg} = c
    long long back = ((a.deg - i % a.deg) % a.deg);
    TruncSeries r = ts_zero(*a.T, a.deg, a.cap / s);
    for (const auto& [e, c] : a.terms) {
        Rat e2 = e / s;
        check_denominator(e2);
        r.terms[e2] = a.T->frob(c, back);
    }
    normalize(r);
    return r;
}

TruncSeries ts_truncate(const TruncSeries& a, Rat new_cap) {
    TruncSeries r = a;
    r.cap = std::min(a.cap, new_cap);
    normalize(r);
    return r;
}

TruncSeries ts_embed(const TruncSeries& a, int new_deg) {
    TruncSeries r = ts_zero(*a.T, new_deg, a.cap);
    for (const auto& [e, c] : a.terms) r.terms[e] = a.T->embed(c, new_deg);
    normalize(r);
    return r;
}

bool ts_agree(const TruncSeries& a, const TruncSeries& b) {
    check_compatible(a, b);
    TruncSeries d = ts_sub(a, b);
    return d.terms.empty();
}

bool ts_congruent_above(const TruncSeries& a, const TruncSeries& b, Rat bound) {
    check_compatible(a, b);
    TruncSeries d = ts_sub(a, b);
    if (d.cap <= bound)
        throw BudgetError("precision cap too low to decide the congruence");
    return ts_valuation(d) > bound;
}

std::string ts_to_string(const TruncSeries& a) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : a.terms) {
        if (!first) os << " + ";
        first = false;
        os << a.T->to_string(c) << "*t^(" << e.numerator() << "/"
           << e.denominator() << ")";
    }
    if (first) os << "0";
    os << " + O(t^(" << a.cap.numerator() << "/" << a.cap.denominator() << "))";
    return os.str();
}

CompatSystem cs_make(TruncSeries rep, long long f) {
    if (f < 1) throw std::invalid_argument("q must be a positive power of p");
    CompatSystem x;
    x.rep = std::move(rep);
    x.f = f;
    return x;
}

const TruncSeries& cs_component(CompatSystem& x, int j) {
    if (j < 0) throw std::invalid_argument("component index must be >= 0");
    if (j == 0) return x.rep;
    while (static_cast<int>(x.roots.size()) < j) {
        const TruncSeries& prev = x.roots.empty() ? x.rep : x.roots.back();
        x.roots.push_back(ts_root(prev, x.f));
    }
    return x.roots[j - 1];
}

CompatSystem cs_add(const CompatSystem& x, const CompatSystem& y) {
    if (x.f != y.f) throw std::invalid_argument("incompatible systems");
    return cs_make(ts_add(x.rep, y.rep), x.f);
}

CompatSystem cs_mul(const CompatSystem& x, const CompatSystem& y) {
    if (x.f != y.f) throw std::invalid_argument("incompatible systems");
    return cs_make(ts_mul(x.rep, y.rep), x.f);
}

CompatSystem cs_pow(const CompatSystem& x, long long k) {
    return cs_make(ts_pow(x.rep, k), x.f);
}

}  // namespace arith
