#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "arith/formal.hpp"
#include "arith/series.hpp"

namespace arith {

// Tuning for the series solvers. `levels` is the depth of the torsion ladder,
// `iters` the number of root-iterations per solve. Each root-iteration
// multiplies exponent denominators, so both are bounded by the global
// denominator ceiling rather than by a precision target: the wild equations
// solved here have conjugate roots separated at a fixed positive valuation,
// and iterates converge only up to that separation. Every solver therefore
// caps its output at the distance between its last two iterates.
struct ChartConfig {
    ParamSet ps;
    long long r_index = 1;  // packed value of r in F_q, a (q-1)-st root of unity
    int levels = 4;
    int iters = 6;
    Rat work_cap{3, 1};
};

// Exact series model of the coordinate chart at the distinguished point:
// uniformizer powers, the torsion ladder of the one-dimensional module
// pi*X + X^q, the limit point coordinates, the auxiliary elements solving
// the wild equations, and the refined point used as the affinoid center.
class LocalChart {
public:
    explicit LocalChart(const ChartConfig& cfg);

    const ChartConfig& config() const { return cfg_; }
    const ParamSet& params() const { return cfg_.ps; }
    const Tower& tower() const { return *tower_; }
    int coeff_deg() const { return cdeg_; }

    const TruncSeries& pi() const { return phi_; }      // v = 1/n
    const TruncSeries& torsion(int j) const;            // j = 1..levels
    const TruncSeries& limit_coord(int i) const;        // i = 1..n
    const TruncSeries& eta() const { return eta_; }     // v = 1/n
    const TruncSeries& target() const { return target_; }  // det at the point
    const TruncSeries& theta() const { return theta_; }
    const TruncSeries& lambda() const { return lambda_; }
    const TruncSeries& shifted_coord(int i) const;      // i = 1..n
    const TruncSeries& center_coord(int i) const;       // refined n-th coord
    const TruncSeries& eta_sqrt() const { return eta_sqrt_; }
    const TruncSeries& eta_root_e1() const { return eta_root_e1_; }

    // Every valuation formula and congruence the construction promises.
    struct Report {
        bool torsion_valuations = false;   // v(t_j) = 1/(n q^{j-1}(q-1))
        bool torsion_residuals = false;    // pi*t_j + t_j^q - t_{j-1} unknown-zero
        bool limit_valuations = false;     // v(xi_i) = 1/(n q^{i-1}(q-1))
        bool limit_coherence = false;      // xi_i = xi_{i+1}^q as stored
        bool limit_stable = false;         // last two ladder levels agree
        bool eta_valuation = false;        // v = 1/n
        bool target_valuation = false;     // v = 1/(q-1)
        bool theta_valuation = false;      // (p^e-1)/(n p^{2e})
        bool lambda_valuation = false;     // (1/n)(1 - 1/(q p^e))
        bool theta_residual = false;
        bool lambda_residual = false;
        bool det_congruence = false;       // det(shifted) = target above 1/n + 1/(q-1)
        Rat det_achieved{0, 1};            // precision the difference was checked to
        bool center_congruence = false;    // refined vs shifted n-th coordinate
        Rat center_achieved{0, 1};
        bool center_residual = false;      // det(center) = target within caps
        Rat center_bound{0, 1};
    };
    Report validate() const;

    // A point of the chart, given by its n raw coordinates.
    struct Point {
        std::vector<TruncSeries> X;
    };
    Point base_point() const;
    // Pseudo-random point satisfying the membership inequalities.
    Point sample_point(std::uint64_t seed) const;
    // The two-line system of valuation inequalities cutting out the affinoid.
    bool member(const Point& P) const;

    // Derived coordinates along the chain s_i -> Y_i -> S -> z -> Y -> y.
    // Throws VerifyError when the membership inequalities are visibly
    // violated, so a malformed point never produces a quiet record.
    struct CoordRecord {
        std::vector<TruncSeries> s;       // s_1..s_{n-1}
        std::vector<TruncSeries> Ycap;    // Y_1..Y_{n-1}
        TruncSeries S, z, Ybig, y;
        std::vector<TruncSeries> y_small; // y_1..y_{n-2}
        std::vector<long long> chain_m, chain_q;  // Euclidean chain and quotients
        int chain_N = 0;
        bool y_congruent = false;  // v(Ybig - Y_{n-1}) > 1/(n(p^e+1))
        bool z_nonneg = false;     // v(z) >= 0
    };
    CoordRecord coords(const Point& P) const;

    // z^{p^m} - z - eta^{-1}(Y_{n-1}^{p^e+1} - (1/n') sum_{i<=j} Y_i Y_j):
    // its valuation must be positive, and the reduced coordinates must land
    // on the affine variety z^{p^m} - z = y^{p^e+1} - (1/n') sum y_i y_j.
    struct ReductionReport {
        Rat residual_valuation{0, 1};
        bool residual_positive = false;
        FqElem zbar, ybar;
        std::vector<FqElem> ybar_small;
        bool on_variety = false;
    };
    ReductionReport reduce(const Point& P) const;

private:
    TruncSeries solve_root_fixed(int root_exp,
                                 const std::function<TruncSeries(const TruncSeries&)>& rhs,
                                 TruncSeries x0, int max_iters) const;
    TruncSeries kth_root_unit(const TruncSeries& a, long long k) const;
    TruncSeries capped(TruncSeries a) const;

    ChartConfig cfg_;
    std::shared_ptr<Tower> tower_;
    int cdeg_ = 1;
    TruncSeries phi_;
    std::vector<TruncSeries> torsion_;   // 1-based semantics, torsion_[j-1]
    std::vector<TruncSeries> limit_;     // limit_[i-1], i = 1..n
    std::vector<TruncSeries> limit_prev_;
    TruncSeries eta_, target_, theta_, lambda_;
    std::vector<TruncSeries> shifted_;   // shifted_[i-1]
    TruncSeries center_n_;               // refined n-th coordinate
    TruncSeries center_resid_;           // det(center) minus the target
    TruncSeries eta_sqrt_, eta_root_e1_;
    Rat center_bound_{0, 1};
};

}  // namespace arith
