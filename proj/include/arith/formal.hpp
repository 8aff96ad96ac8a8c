#pragma once

#include <map>
#include <utility>
#include <vector>

#include "arith/series.hpp"
#include "arith/varieties.hpp"

namespace arith {

// Bivariate polynomial with truncated-series coefficients, kept up to a total
// degree bound. Keys are (degree in X, degree in Y).
struct BiSeries {
    const Tower* T = nullptr;
    int deg = 0;
    int bound = 0;
    std::map<std::pair<int, int>, TruncSeries> terms;
};

BiSeries bi_zero(const Tower& T, int deg, int bound);
void bi_set(BiSeries& F, int dx, int dy, const TruncSeries& c);
TruncSeries bi_coeff(const BiSeries& F, int dx, int dy, Rat cap);
BiSeries bi_add(const BiSeries& a, const BiSeries& b);
BiSeries bi_mul(const BiSeries& a, const BiSeries& b);
BiSeries bi_scale(const BiSeries& a, const TruncSeries& c);
// Substitute concrete series for the two variables.
TruncSeries bi_eval(const BiSeries& F, const TruncSeries& x, const TruncSeries& y);

// One-dimensional formal modules over a Puiseux-series coefficient ring:
//  - base: multiplication-by-uniformizer model pi*X + X^q, log recursion
//    l_i = l_{i-1} / (pi - pi^{q^i});
//  - full_power: logarithm sum_i X^{q^{in}} / t^i;
//  - alt_power: logarithm sum_i (-1)^{(n-1)i} X^{q^i} / t^i.
enum class FormalKind { base, full_power, alt_power };

struct FormalModule {
    FormalKind kind = FormalKind::base;
    const Tower* T = nullptr;
    int deg = 0;
    long long f = 1;  // q = p^f
    long long n = 1;
    TruncSeries pi;   // uniformizer-like element acting on the module
    Rat coeff_cap{12, 1};
};

// For base, pi defaults to t^{1/n}; the other kinds use t itself.
FormalModule make_formal_module(const Tower& T, FormalKind kind, int deg,
                                long long f, long long n,
                                Rat coeff_cap = Rat(12));
FormalModule make_formal_module(const Tower& T, FormalKind kind, int deg,
                                long long f, long long n, TruncSeries pi,
                                Rat coeff_cap = Rat(12));

// Largest admissible truncation degree for the module's addition law.
int formal_max_degree(const FormalModule& M);

// Logarithm/exponential coefficients: entry i multiplies X^{q^{i s}} with
// s = n for full_power and s = 1 otherwise; enough entries for degree_bound.
std::vector<TruncSeries> formal_log_coeffs(const FormalModule& M, int degree_bound);
std::vector<TruncSeries> formal_exp_coeffs(const FormalModule& M, int degree_bound);

// The addition law F(X, Y) = exp(log X + log Y) truncated at total degree
// <= degree_bound, with its structural checks. In residual characteristic p
// with a characteristic-p coefficient ring the law collapses to X + Y; the
// checks verify the weaker layered statement (no mixed terms below the
// threshold q^n for full_power, q otherwise) as well.
struct FormalSumReport {
    BiSeries F;
    bool linear_sections = false;  // F(X,0) = X and F(0,Y) = Y
    bool symmetric = false;
    bool near_additive = false;    // no mixed terms of total degree < threshold
    int threshold = 0;
    int first_mixed_degree = -1;   // -1 when no mixed term survives at all
};
FormalSumReport formal_add(const FormalModule& M, int degree_bound);

// pi*x + x^q (the module's uniformizer action; base kind only).
TruncSeries formal_apply_pi(const FormalModule& M, const TruncSeries& x);

// One term of the alternating q-power determinant: exponent tuple
// (m_1,...,m_n) with sum n(n-1)/2 and pairwise distinct residues mod n,
// signed by the residue permutation.
struct QdetTerm {
    std::vector<long long> m;
    int sign = 1;
};

// All exponent tuples whose term sum_i q^{m_i} * vals_i stays below the
// cutoff; vals_i must be positive so that only finitely many qualify.
std::vector<QdetTerm> qdet_terms(const std::vector<Rat>& vals, long long q,
                                 Rat cutoff,
                                 std::uint64_t budget = kDefaultEnumBudget);

// Alternating q-power determinant: signed sum of prod_i X_i^{q^{m_i}} over
// the full integer index set, truncated at the precision reachable from the
// inputs. The tuples beyond (0,...,n-1) matter: they carry digits below the
// cap that the permutation terms alone would miss.
TruncSeries alt_qdet(const std::vector<TruncSeries>& X, long long f,
                     std::uint64_t budget = kDefaultEnumBudget);

// The same terms folded through the alt_power addition law instead of the
// plain sum, plus the congruence between the two variants.
struct DeltaReport {
    TruncSeries plain;
    TruncSeries folded;
    bool hypotheses_ok = false;  // v(X_i) >= 1/(n q^{i-1}(q-1)) for all i
    bool congruent = false;      // v(plain - folded) > 1/n + 1/(q-1)
    Rat bound{0, 1};
};
DeltaReport delta_eval(const std::vector<TruncSeries>& X, long long f,
                       int degree_bound = 0,
                       std::uint64_t budget = kDefaultEnumBudget);

}  // namespace arith
