#pragma once

#include <cstdint>
#include <vector>

#include "arith/cyclo.hpp"
#include "arith/ffield.hpp"
#include "arith/series.hpp"

namespace arith {

// Parameters of an inducing character triple: a (q-1)-st root of unity zeta
// (stored through its residue), a character chi of the residue field's
// multiplicative group (stored as the exponent of its value at a fixed
// generator), and an opaque nonzero scalar c tracked formally -- only the
// token's exponent and an accumulated root-of-unity multiplier are kept.
struct SSCParams {
    FqElem zeta;
    long long chi_exp = 0;
    long long c_unit_exp = 0;
};

// Twist data: a character of the unit group plus its value on the
// uniformizer, trivial on principal units. Carried for table output; the
// evaluations below are stated for the untwisted characters.
struct TwistData {
    long long mu_exp = 0;      // exponent on the (q-1)-st roots of unity
    long long pi_c_exp = 0;    // value on the uniformizer: c-token exponent
    long long pi_unit_exp = 0; // ... and root-of-unity part
    bool trivial_on_u1 = true;
};

// Value of a character: c^{c_exp} * eps^{unit_exp} * (p-th root of unity),
// with eps a fixed primitive (q-1)-st root of unity. The three factors
// never interact, so the formal product is exact.
struct CharValue {
    long long c_exp = 0;
    long long unit_exp = 0;
    CycSum psi;
    bool operator==(const CharValue&) const = default;
};

// An element of the unit group 1 + (radical of the standard order): entries
// are truncated series over the residue field; strictly-lower entries need
// valuation >= 1, diagonal entries are 1 + (positive valuation).
struct MatUnit {
    std::vector<std::vector<TruncSeries>> a;
};

// An element of 1 + (maximal ideal of the division-algebra order), expanded
// along powers of the uniformizing element with coefficients in the degree-n
// unramified extension's residue field (roots of unity or zero).
struct DUnit {
    std::vector<FqElem> d;  // d[j] multiplies the j-th power, j >= 1
};

class CharSystem {
public:
    explicit CharSystem(const ParamSet& ps);

    const ParamSet& params() const { return ps_; }
    const Tower& tower() const { return *tower_; }
    int kdeg() const { return kdeg_; }   // residue field of the base
    int ddeg() const { return ddeg_; }   // residue field of the degree-n algebra
    FqElem generator() const { return gen_; }
    long long dlog(FqElem x) const;      // base `generator()`, x in the base field

    CharValue one() const;
    CharValue mul(const CharValue& x, const CharValue& y) const;
    CharValue chi_value(const SSCParams& par, FqElem xbar) const;
    // The additive character of the base field composed with the residue map;
    // defined on integral elements only.
    CharValue psi_value(FqElem residue) const;

    // Value on the distinguished uniformizing element: (-1)^{n-1} c for the
    // matrix side, c for the division-algebra side.
    CharValue lambda_phi(const SSCParams& par) const;
    CharValue theta_phi(const SSCParams& par) const;

    // Character of the matrix-side inducing subgroup on a factored element
    // (power of the uniformizing matrix) * (Teichmueller unit) * (unit of
    // 1 + radical). The unit part evaluates through
    // psi(tr(phi^{-1}(u - 1)) / n'). Throws VerifyError when u violates the
    // radical's valuation bounds (the trace would leave the integers).
    CharValue lambda_eval(const SSCParams& par, long long phi_pow, FqElem unit,
                          const MatUnit& u) const;

    struct ThetaHr {
        CharValue theta;
        FqElem hr;  // element of the degree-m subfield
    };
    // Division-algebra-side character on a principal unit d, together with
    // the residue-level shift h(g, d) = Tr((Trd(phi^{-1}(d-1)) -
    // tr(phi^{-1}(g-1))) / n') into the degree-m subfield.
    ThetaHr theta_and_hr(const SSCParams& par, const DUnit& d,
                         const MatUnit& g) const;

    MatUnit mat_identity() const;
    MatUnit mat_mul(const MatUnit& x, const MatUnit& y) const;
    MatUnit sample_mat_unit(std::uint64_t seed) const;
    DUnit d_identity() const;
    DUnit d_mul(const DUnit& x, const DUnit& y) const;
    DUnit sample_d_unit(std::uint64_t seed) const;

private:
    TruncSeries entry_or_zero(const MatUnit& u, int i, int j) const;
    FqElem unit_trace_residue(const MatUnit& u, FqElem zeta) const;
    void check_mat_unit(const MatUnit& u) const;

    ParamSet ps_;
    std::unique_ptr<Tower> tower_;
    int kdeg_ = 1, ddeg_ = 1;
    FqElem gen_;
    FqElem inv_nprime_;  // 1/n' in the prime field, embedded in the base
    int dmax_ = 8;       // expansion length of division-algebra units
};

// Hom-space dimension count: direct enumeration of
// p^e * #{ a in the degree-m subfield's unit group : a^n r = zeta } against
// the closed form p^e n_1 [zeta^{(p^m-1)/n_1} = s].
struct HomCountReport {
    long long direct = 0;
    long long closed = 0;
    bool match = false;
};
HomCountReport hom_count(const Tower& T, const ParamSet& ps, FqElem zeta,
                         FqElem r, FqElem s);

// n (q^n - 1)/(q - 1) = [index] * p^e n_1 with
// index = n' (q^n - 1) / (n_1 (q - 1)); all quantities exact integers.
struct DimReport {
    long long dim_rho = 0;   // (q^n - 1)/(q - 1)
    long long dim_tau = 0;   // n
    long long lhs = 0;       // product of the two
    long long index = 0;     // n'(q^n - 1)/(n_1 (q - 1))
    long long multiplicity = 0;  // p^e n_1
    long long rhs = 0;
    bool holds = false;
};
DimReport dim_identity(const ParamSet& ps);

// (zeta, chi, c; a) -> (a^n zeta, chi, chi(a) c) for a in the degree-m
// subfield's unit group.
SSCParams param_normalize(const CharSystem& S, const SSCParams& par, FqElem a);

}  // namespace arith
