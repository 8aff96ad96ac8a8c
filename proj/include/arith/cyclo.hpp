#pragma once

#include <complex>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "arith/ffield.hpp"

namespace arith {

using BigInt = boost::multiprecision::cpp_int;

// Exact element of Z[zeta_p], stored in the power basis 1, zeta, ...,
// zeta^{p-2} modulo the p-th cyclotomic polynomial.
struct CycSum {
    long long p = 2;
    std::vector<BigInt> c;  // length p-1

    static CycSum zero(long long p);
    static CycSum integer(long long p, BigInt v);
    static CycSum zeta_pow(long long p, long long k);

    bool operator==(const CycSum&) const = default;

    bool is_zero() const;
    bool is_rational() const;
    BigInt rational_value() const;  // throws if not rational
    std::string to_string() const;
};

CycSum cyc_add(const CycSum& a, const CycSum& b);
CycSum cyc_sub(const CycSum& a, const CycSum& b);
CycSum cyc_neg(const CycSum& a);
CycSum cyc_mul(const CycSum& a, const CycSum& b);
CycSum cyc_conj(const CycSum& a);

// Value of a under the embedding zeta -> e^{2*pi*i*j/p}, 1 <= j <= p-1.
std::complex<long double> cyc_embed(const CycSum& a, long long j);

struct AbsSquareReport {
    CycSum exact;                             // a * conj(a)
    std::vector<long double> embedding_values;  // |iota_j(a)|^2 for each j
    bool rational = false;
    BigInt rational_value;
};

AbsSquareReport abs_square(const CycSum& a);

// psi_s(x) = zeta^{lift(Tr_{F_{p^m}/F_p}(s*x))} on F_{p^m}; trivial iff s = 0.
class AdditiveCharacter {
public:
    AdditiveCharacter(const Tower& tower, int m, FqElem scale);

    bool trivial() const;
    FqElem scale() const { return scale_; }
    int m() const { return m_; }
    CycSum eval(FqElem x) const;

private:
    const Tower* tower_;
    int m_;
    FqElem scale_;
};

}  // namespace arith
