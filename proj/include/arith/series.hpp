#pragma once

#include <boost/rational.hpp>
#include <map>
#include <string>
#include <vector>

#include "arith/ffield.hpp"

namespace arith {

// Exponents of Puiseux series live in (1/D)Z for a lazily growing D; this is
// the hard ceiling on D that guards against runaway ramification.
inline constexpr long long kMaxSeriesDenominator = 10'000'000;

using Rat = boost::rational<long long>;

// A truncated Puiseux series over F_{p^deg}((t^{1/D})) with t the uniformizer
// (valuation 1). `terms` maps exponents to nonzero coefficients; everything at
// exponent >= cap is unknown, and arithmetic never reports digits there.
struct TruncSeries {
    const Tower* T = nullptr;
    int deg = 0;
    std::map<Rat, FqElem> terms;
    Rat cap{3, 1};
};

TruncSeries ts_zero(const Tower& T, int deg, Rat cap);
// c * t^e  (dropped if c = 0 or e >= cap)
TruncSeries ts_monomial(const Tower& T, int deg, FqElem c, Rat e, Rat cap);
// The uniformizer t itself.
TruncSeries ts_uniformizer(const Tower& T, int deg, Rat cap);
// The constant c.
TruncSeries ts_constant(const Tower& T, int deg, FqElem c, Rat cap);

// True when no digit is known below the cap (i.e. v >= cap).
bool ts_is_zero(const TruncSeries& a);
// Least exponent with nonzero coefficient; for a series with no known terms
// this returns the cap (the valuation is only known to be >= cap).
Rat ts_valuation(const TruncSeries& a);
FqElem ts_coeff(const TruncSeries& a, Rat e);
// Leading (lowest-exponent) coefficient; throws if no terms are known.
FqElem ts_leading(const TruncSeries& a);

TruncSeries ts_add(const TruncSeries& a, const TruncSeries& b);
TruncSeries ts_sub(const TruncSeries& a, const TruncSeries& b);
TruncSeries ts_neg(const TruncSeries& a);
TruncSeries ts_mul(const TruncSeries& a, const TruncSeries& b);
TruncSeries ts_scale(const TruncSeries& a, FqElem c);
// Multiply by the monomial c * t^e (exact cap shift by e).
TruncSeries ts_shift(const TruncSeries& a, FqElem c, Rat e);
// Inverse via leading-term factorization and a geometric series; requires a
// known nonzero leading term. Result cap is cap(a) - 2 v(a).
TruncSeries ts_inv(const TruncSeries& a);
// Integer power; negative k goes through ts_inv.
TruncSeries ts_pow(const TruncSeries& a, long long k);

// x -> x^{p^i}: coefficients are raised to the p^i-th power and exponents
// (and the cap) are multiplied by p^i. Exact in characteristic p.
TruncSeries ts_frobenius(const TruncSeries& a, long long i);
// Exact p^i-th root: coefficient Frobenius is inverted and exponents (and the
// cap) are divided by p^i, growing the denominator.
TruncSeries ts_root(const TruncSeries& a, long long i);

// Lower the cap (forgetting digits); raising it is not possible.
TruncSeries ts_truncate(const TruncSeries& a, Rat new_cap);
// Re-express the coefficients in a larger field of the same tower.
TruncSeries ts_embed(const TruncSeries& a, int new_deg);

// a == b as far as both are known, i.e. v(a - b) >= min(cap(a), cap(b)).
bool ts_agree(const TruncSeries& a, const TruncSeries& b);
// v(a - b) > bound (congruence "modulo terms of valuation > bound"); throws
// if the caps are too low to decide.
bool ts_congruent_above(const TruncSeries& a, const TruncSeries& b, Rat bound);

std::string ts_to_string(const TruncSeries& a);

// A q-th-power compatible system: the 0-th component plus q-th roots
// materialized on demand (q = p^f). Char-p roots are exact, so the whole
// system is determined by the representative.
struct CompatSystem {
    TruncSeries rep;
    long long f = 1;
    std::vector<TruncSeries> roots;  // roots[j] = q^{-(j+1)}-th root of rep
};

CompatSystem cs_make(TruncSeries rep, long long f);
// The q^{-j}-th root component (j = 0 is the representative itself).
const TruncSeries& cs_component(CompatSystem& x, int j);
// Sum/product/power of systems act on representatives; cached roots are
// invalidated and recomputed lazily.
CompatSystem cs_add(const CompatSystem& x, const CompatSystem& y);
CompatSystem cs_mul(const CompatSystem& x, const CompatSystem& y);
CompatSystem cs_pow(const CompatSystem& x, long long k);

}  // namespace arith
