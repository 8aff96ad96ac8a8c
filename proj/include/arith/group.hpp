#pragma once

#include <memory>
#include <vector>

#include "arith/cyclo.hpp"
#include "arith/ffield.hpp"
#include "arith/varieties.hpp"

namespace arith {

// g(a, b, c) subject to a^{p^e+1} = 1, b^{p^{2e}} + b = 0,
// c^{p^m} - c + b^{p^e+1} = 0.
struct QElt {
    FqElem a, b, c;
    bool operator==(const QElt&) const = default;
};

// Element of the semidirect product with Z; l acts on coordinates by the
// q^{-l}-power map.
struct QZElt {
    QElt g;
    long long l = 0;
};

inline constexpr long long kMaxZWindow = 64;

class QGroup {
public:
    // Builds its own tower over a field chosen so that the full group of
    // order (p^e+1) p^{2e} p^m is rational; throws BudgetError if no such
    // field fits the size cap.
    explicit QGroup(const ParamSet& ps);

    const ParamSet& params() const { return ps_; }
    const Tower& tower() const { return *tower_; }
    int coord_degree() const { return deg_; }
    long long expected_order() const;

    QElt identity() const;
    // Validates the three membership constraints; reports the violated one.
    QElt validate(FqElem a, FqElem b, FqElem c) const;
    QElt mul(const QElt& x, const QElt& y) const;
    QElt inverse(const QElt& x) const;
    QZElt qz_mul(const QZElt& x, const QZElt& y) const;

    const std::vector<QElt>& elements() const { return elements_; }

    // a^{(p^e+1)/2}: the literal exponent for odd p; for p = 2, p^e+1 is odd,
    // so this is the unique square root of a^{p^e+1} = 1, which is 1.
    FqElem a_half_power(FqElem a) const;

    // The action on points of the variety of kind X. Points are acted on from
    // the right: act(qz_mul(x, y), P) == act(y, act(x, P)). The group
    // coordinates are embedded into the point's field; the image is checked
    // to stay on the variety.
    std::vector<FqElem> act(const QZElt& g, const VarietySpec& spec,
                            const Tower& PT, std::vector<FqElem> P) const;

private:
    ParamSet ps_;
    int deg_ = 0;
    std::unique_ptr<Tower> tower_;
    std::vector<QElt> elements_;
};

// The involution-like automorphism on points of X:
// z += eps1 (y_{n-2}+1); y fixed; y_1 = -sum_{i<=n-3} y_i - 2 y_{n-2} + eps1;
// y_i = y_{i-1} - y_{n-2} + eps1. eps1 = 1 iff p^e = 2.
std::vector<FqElem> frob_automorphism(const Tower& T, const VarietySpec& spec,
                                      std::vector<FqElem> P);

// Determinant of its linear part on (y, y_1..y_{n-2}) as an element of F_p.
FqElem frob_linear_det(const Tower& T, const ParamSet& ps);

long long eps1(const ParamSet& ps);

struct LefschetzReport {
    long long fixed_count = 0;
    int search_deg = 0;
    std::uint64_t points_scanned = 0;
    bool central = false;
    bool has_prediction = false;
    CycSum predicted;   // sum over psi of psi(c) S_k(psi), for central g
    bool match = false;
};

// Fixed points of P -> act(g, Frob_{p^m}^k(P)) over the smallest field that
// contains the group coordinates and all fixed points of the twisted map.
LefschetzReport equivariant_lefschetz(const QGroup& G, const QElt& g,
                                      const VarietySpec& spec, int k,
                                      std::uint64_t budget = kDefaultEnumBudget);

}  // namespace arith
