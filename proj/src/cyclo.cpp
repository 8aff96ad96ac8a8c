#include "arith/cyclo.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace arith {

namespace {

void check_same_p(const CycSum& a, const CycSum& b) {
    if (a.p != b.p) throw std::invalid_argument("mismatched cyclotomic primes");
}

// Fold raw coefficients of zeta^0..zeta^{len-1} into the power basis.
CycSum reduce(long long p, const std::vector<BigInt>& raw) {
    CycSum r = CycSum::zero(p);
    for (size_t j = 0; j < raw.size(); ++j) {
        if (raw[j] == 0) continue;
        long long k = (long long)(j % (size_t)p);
        if (k <= p - 2) {
            r.c[k] += raw[j];
        } else {
            for (long long i = 0; i <= p - 2; ++i) r.c[i] -= raw[j];
        }
    }
    return r;
}

}  // namespace

CycSum CycSum::zero(long long p) {
    if (p < 2) throw std::invalid_argument("p must be at least 2");
    CycSum r;
    r.p = p;
    r.c.assign(size_t(p - 1), BigInt(0));
    return r;
}

CycSum CycSum::integer(long long p, BigInt v) {
    CycSum r = zero(p);
    r.c[0] = std::move(v);
    return r;
}

CycSum CycSum::zeta_pow(long long p, long long k) {
    CycSum r = zero(p);
    long long kk = ((k % p) + p) % p;
    if (kk <= p - 2) {
        r.c[size_t(kk)] = 1;
    } else {
        for (auto& x : r.c) x = -1;
    }
    return r;
}

bool CycSum::is_zero() const {
    for (const auto& x : c)
        if (x != 0) return false;
    return true;
}

bool CycSum::is_rational() const {
    for (size_t i = 1; i < c.size(); ++i)
        if (c[i] != 0) return false;
    return true;
}

BigInt CycSum::rational_value() const {
    if (!is_rational()) throw std::domain_error("value is not rational");
    return c[0];
}

std::string CycSum::to_string() const {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
    os << "]";
    return os.str();
}

CycSum cyc_add(const CycSum& a, const CycSum& b) {
    check_same_p(a, b);
    CycSum r = a;
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] += b.c[i];
    return r;
}

CycSum cyc_sub(const CycSum& a, const CycSum& b) {
    check_same_p(a, b);
    CycSum r = a;
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] -= b.c[i];
    return r;
}

CycSum cyc_neg(const CycSum& a) {
    CycSum r = a;
    for (auto& x : r.c) x = -x;
    return r;
}

CycSum cyc_mul(const CycSum& a, const CycSum& b) {
    check_same_p(a, b);
    std::vector<BigInt> raw(a.c.size() + b.c.size() - 1, BigInt(0));
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0) continue;
        for (size_t j = 0; j < b.c.size(); ++j)
            if (b.c[j] != 0) raw[i + j] += a.c[i] * b.c[j];
    }
    return reduce(a.p, raw);
}

CycSum cyc_conj(const CycSum& a) {
    std::vector<BigInt> raw(size_t(a.p), BigInt(0));
    for (size_t k = 0; k < a.c.size(); ++k)
        raw[size_t((a.p - (long long)k) % a.p)] += a.c[k];
    return reduce(a.p, raw);
}

std::complex<long double> cyc_embed(const CycSum& a, long long j) {
    if (j < 1 || j > a.p - 1) throw std::invalid_argument("bad embedding index");
    const long double pi = 3.14159265358979323846264338327950288L;
    std::complex<long double> acc(0.0L, 0.0L);
    for (size_t k = 0; k < a.c.size(); ++k) {
        if (a.c[k] == 0) continue;
        long double ang = 2.0L * pi * (long double)(j * (long long)k % a.p) /
                          (long double)a.p;
        acc += a.c[k].convert_to<long double>() *
               std::complex<long double>(std::cos(ang), std::sin(ang));
    }
    return acc;
}

AbsSquareReport abs_square(const CycSum& a) {
    AbsSquareReport rep;
    rep.exact = cyc_mul(a, cyc_conj(a));
    for (long long j = 1; j <= a.p - 1; ++j)
        rep.embedding_values.push_back(std::norm(cyc_embed(a, j)));
    rep.rational = rep.exact.is_rational();
    if (rep.rational) rep.rational_value = rep.exact.rational_value();
    return rep;
}

AdditiveCharacter::AdditiveCharacter(const Tower& tower, int m, FqElem scale)
    : tower_(&tower), m_(m), scale_(scale) {
    if (!tower.has_field(m)) throw std::invalid_argument("source field missing");
    if (scale.deg != m)
        throw std::invalid_argument("twisting scalar must live in F_{p^m}");
}

bool AdditiveCharacter::trivial() const { return tower_->is_zero(scale_); }

CycSum AdditiveCharacter::eval(FqElem x) const {
    if (x.deg != m_) {
        if (m_ % x.deg == 0)
            x = tower_->embed(x, m_);
        else if (x.deg % m_ == 0)
            x = tower_->project(x, m_);  // throws when not in the subfield
        else
            throw std::invalid_argument("argument not embeddable into F_{p^m}");
    }
    FqElem t = tower_->trace(tower_->mul(scale_, x), 1);
    long long lift = tower_->coords(t)[0];
    return CycSum::zeta_pow(tower_->p(), lift);
}

}  // namespace arith
