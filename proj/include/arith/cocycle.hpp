#pragma once

#include <cstdint>
#include <vector>

#include "arith/group.hpp"
#include "arith/series.hpp"
#include "arith/tower.hpp"

namespace arith {

// The three auxiliary elements attached to a chart,
//   alpha^{p^e+1} = -pi^{p^e},
//   beta^{p^{2e}} + beta = -alpha^{-1},
//   gamma^{p^m} - gamma = beta^{p^e+1} + eps0,
// normalized against eta^{p^e/(p^e+1)}, theta^{p^e} eta^{-p^e/(p^e+1)} and
// sum_i (lambda/eta)^{p^{im}} respectively. Galois images of the triple are
// modeled by finite "choice" data (a root of unity, a kernel translate, a
// small-field translate, and a Frobenius twist); evaluating the cocycle
// formulas on a choice produces an element of the finite group Q extended
// by the twist, and composing choices must multiply those images.
//
// beta and gamma have digit exponents accumulating toward 0 from below, so
// their caps sit just above (resp. just below) 0; every cocycle formula is
// arranged so that beta only ever multiplies constants, which keeps the
// residue digits decidable.
class WeilSystem {
public:
    // The chart must outlive the system. `depth` bounds the number of
    // root-iterates used for beta and gamma (also bounded by the global
    // exponent-denominator ceiling).
    explicit WeilSystem(const LocalChart& chart, int depth = 5);

    const LocalChart& chart() const { return chart_; }
    const QGroup& qgroup() const { return qg_; }
    const TruncSeries& alpha() const { return alpha_; }
    const TruncSeries& beta() const { return beta_; }
    const TruncSeries& gamma() const { return gamma_; }
    int beta_terms() const { return beta_terms_; }

    struct Report {
        bool alpha_equation = false;   // alpha^{p^e+1} + pi^{p^e} = 0
        bool alpha_normalized = false; // alpha / eta^{p^e/(p^e+1)} = 1 + small
        bool beta_normalized = false;  // beta / (theta^{p^e} eta^{-p^e/(p^e+1)})
        bool gamma_normalized = false; // gamma = sum (lambda/eta)^{p^{im}} + small
        Rat beta_residual{0, 1};       // valuation of the beta equation defect
        Rat beta_predicted{0, 1};      // v(alpha^{-1}) / p^{2e * terms}
        bool beta_rate_ok = false;
        bool gamma_equation = false;   // defect invisible within the caps
        Rat gamma_window{0, 1};        // cap the gamma defect was checked to
    };
    Report validate() const;

    // Where a Galois element may send the triple: alpha -> omega alpha with
    // omega^{p^e+1} = 1; beta -> omega^{-1} beta + shift with
    // shift^{p^{2e}} + shift = 0; gamma -> gamma + W(omega shift) + kappa with
    // kappa^{p^m} - kappa + (omega shift)^{p^e+1} = 0; plus the q^{-l}-power
    // twist on constants.
    struct Choice {
        FqElem omega, shift, kappa;
        long long l = 0;
    };
    Choice identity() const;
    // All consistent choices with l = 0; their count is the order of Q.
    std::vector<Choice> enumerate_choices() const;
    Choice sample_choice(std::uint64_t seed, long long max_twist = 2) const;
    // The choice realizing "apply s after t"; the gamma-translate of the
    // composite is read off a series identity and the call throws if that
    // identity fails to be constant.
    Choice compose(const Choice& s, const Choice& t) const;

    struct Cocycle {
        TruncSeries a, b, c;  // sigma(alpha)/alpha, a sigma(beta) - beta, ...
        QZElt image;          // residues of (a, b, c) with the twist
    };
    // Evaluates the cocycle formulas on a choice, checking along the way that
    // the chosen images still solve the three defining equations; throws
    // VerifyError for an inconsistent choice or a residue off the group Q.
    Cocycle cocycle(const Choice& s) const;

private:
    TruncSeries chain_poly(FqElem B) const;  // -sum_i (B^{p^e}(beta+B))^{p^{im}}
    FqElem twist(FqElem x, long long l) const;
    TruncSeries constant(FqElem c) const;
    FqElem visible_constant(const TruncSeries& a, const char* what) const;

    const LocalChart& chart_;
    QGroup qg_;
    const Tower* T_ = nullptr;
    int deg_ = 1;
    long long pe_ = 2;
    TruncSeries alpha_, beta_, gamma_;
    TruncSeries alpha_inv_;
    TruncSeries beta_res_;    // beta^{p^{2e}} + beta + alpha^{-1}
    FqElem eps0_;
    int beta_terms_ = 0, gamma_terms_ = 0;
};

}  // namespace arith
