#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace arith {

// Global configuration tuple. q = p^f, n = p^e * nprime, m = gcd(e, f),
// n1 = gcd(n, p^m - 1).
struct ParamSet {
    long long p = 2, f = 1, e = 1, nprime = 1;
    long long q = 2, n = 2, m = 1, n1 = 1;

    static ParamSet make(long long p, long long f, long long e, long long nprime);
};

bool is_prime(long long v);
long long ipow(long long base, long long exp);

// An element of F_{p^deg}. `v` packs the polynomial coordinates
// (c_0, ..., c_{deg-1}) over F_p as sum c_i p^i. Elements never mix fields
// implicitly; every operation goes through the owning Tower.
struct FqElem {
    int deg = 0;
    std::uint32_t v = 0;

    bool operator==(const FqElem&) const = default;
};

// A compatible family of fields F_{p^s} for every divisor s of the lcm of the
// requested degrees. Embeddings are fixed at construction by mapping each
// field's generator to the lexicographically least root of its defining
// polynomial inside the ambient (top-degree) field; pairwise embeddings factor
// through the ambient field, which makes them commute.
class Tower {
public:
    Tower(long long p, std::vector<int> degrees);

    long long p() const { return p_; }
    int ambient_degree() const { return ambient_; }
    bool has_field(int deg) const { return fields_.count(deg) != 0; }
    std::uint64_t field_size(int deg) const { return field(deg).size; }
    const std::vector<int>& degrees() const { return degree_list_; }
    const std::vector<int>& defining_poly(int deg) const { return field(deg).poly; }

    FqElem zero(int deg) const { check_deg(deg); return {deg, 0}; }
    FqElem one(int deg) const { check_deg(deg); return {deg, 1}; }
    // The class of the integer c (coordinates (c mod p, 0, ...)).
    FqElem scalar(int deg, long long c) const;
    // Element with packed coordinate value v (also the enumeration order).
    FqElem from_index(int deg, std::uint64_t v) const;

    FqElem add(FqElem a, FqElem b) const;
    FqElem sub(FqElem a, FqElem b) const;
    FqElem neg(FqElem a) const;
    FqElem mul(FqElem a, FqElem b) const;
    FqElem inv(FqElem a) const;
    FqElem pow(FqElem a, long long k) const;
    // x -> x^(p^i)
    FqElem frob(FqElem a, long long i = 1) const;

    bool is_zero(FqElem a) const { return a.v == 0; }

    // Embed into a field whose degree is a multiple of a.deg.
    FqElem embed(FqElem a, int target_deg) const;
    // Inverse of embed; throws if a is not in the image.
    FqElem project(FqElem a, int target_deg) const;
    bool in_subfield(FqElem a, int sub_deg) const;

    // Tr_{F_{p^a.deg} / F_{p^target_deg}}; result lives in the target field.
    FqElem trace(FqElem a, int target_deg) const;
    // Norm to the target subfield.
    FqElem norm(FqElem a, int target_deg) const;

    // All z in a's field with z^{p^m} - z = t.  Size is p^m or 0.
    std::vector<FqElem> solve_artin_schreier(FqElem t, int m) const;

    // All x in the field with x^k = a (k >= 1), in enumeration order.
    std::vector<FqElem> roots_of_unity_times(FqElem a, long long k) const;

    std::string to_string(FqElem a) const;
    std::string describe_json() const;

    // Coordinates of a over F_p, length a.deg.
    std::vector<int> coords(FqElem a) const;

    // Raw discrete-log tables, exposed for the enumeration kernels.
    const std::vector<std::uint32_t>& exp_table(int deg) const {
        return field(deg).exp;
    }
    const std::vector<std::uint32_t>& log_table(int deg) const {
        return field(deg).log;
    }

private:
    struct Field {
        int deg = 0;
        std::uint64_t size = 0;
        std::vector<int> poly;          // defining polynomial, length deg+1, monic
        std::vector<std::uint32_t> exp; // exp[i] = g^i, i in [0, size-1)
        std::vector<std::uint32_t> log; // log[v] for v != 0
    };

    const Field& field(int deg) const;
    void check_deg(int deg) const;
    void check_same(FqElem a, FqElem b) const;

    std::uint32_t raw_add(const Field& F, std::uint32_t a, std::uint32_t b) const;
    std::uint32_t raw_neg(const Field& F, std::uint32_t a) const;
    std::uint32_t raw_mul_poly(const Field& F, std::uint32_t a, std::uint32_t b) const;
    std::uint32_t raw_mul(const Field& F, std::uint32_t a, std::uint32_t b) const;
    std::uint32_t raw_pow(const Field& F, std::uint32_t a, unsigned long long k) const;
    std::uint32_t eval_at(const Field& F, const std::vector<int>& poly_fp,
                          std::uint32_t x) const;

    void build_field(int deg);
    void build_embeddings();

    long long p_;
    int ambient_ = 1;
    std::vector<int> degree_list_;
    std::unordered_map<int, Field> fields_;
    // generator image of field a inside field b, keyed by a*4096+b (a | b)
    std::unordered_map<int, std::uint32_t> gen_image_;
    // reverse lookup: for a | b, map from embedded value in b to value in a
    std::unordered_map<int, std::unordered_map<std::uint32_t, std::uint32_t>> reverse_;
};

// Lexicographically least monic irreducible polynomial of degree `deg` over
// F_p, as coefficients c_0..c_deg (c_deg = 1). Order: packed value of
// (c_0, ..., c_{deg-1}) in base p.
std::vector<int> least_irreducible_poly(long long p, int deg);

}  // namespace arith
