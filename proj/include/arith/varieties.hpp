#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "arith/cyclo.hpp"
#include "arith/ffield.hpp"

namespace arith {

inline constexpr std::uint64_t kDefaultEnumBudget = 1ull << 26;

// The two affine hypersurfaces under study.
//   kind X: z^{p^m} - z = y^{p^e+1} - (1/n') * sum_{1<=i<=j<=n-2} y_i y_j
//           (coordinates z, y, y_1..y_{n-2})
//   kind Y: z^{2^m} - z = sum_{1<=i<=j<=n-2} y_i y_j  (p = 2, n >= 4 even;
//           coordinates z, y_1..y_{n-2})
struct VarietySpec {
    enum class Kind { X, Y };
    ParamSet params;
    Kind kind = Kind::X;

    static VarietySpec makeX(const ParamSet& ps);
    static VarietySpec makeY(const ParamSet& ps);

    // number of non-z coordinates enumerated by the counting fold
    int y_arity() const;
};

// Right-hand side of the defining equation as a function of the non-z
// coordinates. y_coords has length y_arity() and a common field.
FqElem phi_eval(const Tower& T, const VarietySpec& spec,
                const std::vector<FqElem>& y_coords);

// Membership test for a full point (z first, then the y block).
bool on_variety(const Tower& T, const VarietySpec& spec,
                const std::vector<FqElem>& coords);

struct TraceProfile {
    // counts[v] = #{y-tuples over F_{p^{mk}} : Tr_{F_{p^{mk}}/F_{p^m}}(Phi) = v}
    // indexed by the packed value of the trace in F_{p^m}
    std::vector<long long> counts;
    std::uint64_t tuples = 0;
    int field_deg = 0;
    double seconds = 0;
};

// The enumeration kernel shared by count_points and exp_sum. `parallel`
// selects the OpenMP kernel; the serial path is the reference implementation
// and both must produce identical profiles.
TraceProfile variety_trace_profile(const VarietySpec& spec, int k,
                                   std::uint64_t budget = kDefaultEnumBudget,
                                   bool parallel = true);

long long count_points(const VarietySpec& spec, int k,
                       std::uint64_t budget = kDefaultEnumBudget,
                       bool parallel = true);

// S_k(psi) for psi the additive character of F_{p^m} with the given twisting
// scalar (packed value; 0 is the trivial character).
CycSum exp_sum(const VarietySpec& spec, int k, std::uint64_t psi_scale_index,
               std::uint64_t budget = kDefaultEnumBudget, bool parallel = true);

struct EigenReport {
    int degree = 0;                      // minimal recurrence degree
    std::vector<CycSum> sums;            // S_1..S_{k_max} (scaled to integers)
    std::vector<std::complex<long double>> roots;
    std::vector<long double> magnitudes;
    long double expected_magnitude = 0;  // p^{m(n-1)/2}
    bool degree_ok = false;              // degree <= p^e
    bool magnitudes_ok = false;          // all |root| within 1e-6 of expected
};

EigenReport recurrence_eigendata(const VarietySpec& spec,
                                 std::uint64_t psi_scale_index, int k_max,
                                 std::uint64_t budget = kDefaultEnumBudget);

}  // namespace arith
