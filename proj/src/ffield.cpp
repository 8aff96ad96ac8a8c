#include "arith/ffield.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "arith/errors.hpp"

namespace arith {

namespace {

constexpr std::uint64_t kMaxFieldSize = 1ull << 24;

long long llgcd(long long a, long long b) { return std::gcd(a, b); }

std::vector<long long> prime_factors(long long v) {
    std::vector<long long> out;
    for (long long d = 2; d * d <= v; ++d) {
        if (v % d == 0) {
            out.push_back(d);
            while (v % d == 0) v /= d;
        }
    }
    if (v > 1) out.push_back(v);
    return out;
}

// ---- dense polynomial helpers over F_p (coefficient vectors, low first) ----

void trim(std::vector<int>& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

std::vector<int> poly_mulmod(const std::vector<int>& a, const std::vector<int>& b,
                             const std::vector<int>& mod, long long p) {
    std::vector<int> c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (size_t j = 0; j < b.size(); ++j)
            c[i + j] = int((c[i + j] + (long long)a[i] * b[j]) % p);
    }
    int d = int(mod.size()) - 1;
    for (int i = int(c.size()) - 1; i >= d; --i) {
        if (!c[i]) continue;
        int lead = c[i];
        for (int j = 0; j <= d; ++j) {
            long long t = c[i - d + j] - (long long)lead * mod[j];
            c[i - d + j] = int(((t % p) + p) % p);
        }
    }
    c.resize(d, 0);
    if ((int)c.size() < d) c.resize(d, 0);
    return c;
}

std::vector<int> poly_powmod(std::vector<int> base, unsigned long long k,
                             const std::vector<int>& mod, long long p) {
    int d = int(mod.size()) - 1;
    std::vector<int> r(d, 0);
    r[0] = 1;
    base.resize(std::max<size_t>(base.size(), d), 0);
    while (k) {
        if (k & 1) r = poly_mulmod(r, base, mod, p);
        base = poly_mulmod(base, base, mod, p);
        k >>= 1;
    }
    return r;
}

std::vector<int> poly_gcd(std::vector<int> a, std::vector<int> b, long long p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        // a mod b
        while (a.size() >= b.size() && !a.empty()) {
            long long lead = a.back();
            // multiply by inverse of b's leading coefficient
            long long binv = 1, base = b.back(), k = p - 2;
            while (k) {
                if (k & 1) binv = binv * base % p;
                base = base * base % p;
                k >>= 1;
            }
            long long c = lead * binv % p;
            size_t off = a.size() - b.size();
            for (size_t i = 0; i < b.size(); ++i) {
                long long t = a[off + i] - c * b[i];
                a[off + i] = int(((t % p) + p) % p);
            }
            trim(a);
        }
        std::swap(a, b);
    }
    return a;
}

bool is_irreducible(const std::vector<int>& f, long long p) {
    int d = int(f.size()) - 1;
    std::vector<int> x = {0, 1};
    // x^{p^d} == x mod f
    unsigned long long pd = 1;
    for (int i = 0; i < d; ++i) pd *= (unsigned long long)p;
    auto xpd = poly_powmod(x, pd, f, p);
    std::vector<int> xv(f.size() - 1, 0);
    if (xv.size() > 1) xv[1] = 1;
    else if (d == 1) { /* x reduces mod degree-1 f */
        xv[0] = int(((-(long long)f[0]) % p + p) % p);
    }
    if (xpd != xv) return false;
    for (long long l : prime_factors(d)) {
        unsigned long long e = 1;
        for (int i = 0; i < d / l; ++i) e *= (unsigned long long)p;
        auto xe = poly_powmod(x, e, f, p);
        // gcd(x^{p^{d/l}} - x, f) must be constant
        std::vector<int> diff = xe;
        diff.resize(std::max<size_t>(diff.size(), 2), 0);
        diff[1] = int(((diff[1] - 1) % p + p) % p);
        auto g = poly_gcd(diff, f, p);
        if (g.size() > 1) return false;
    }
    return true;
}

int key_of(int a, int b) { return a * 4096 + b; }

}  // namespace

bool is_prime(long long v) {
    if (v < 2) return false;
    for (long long d = 2; d * d <= v; ++d)
        if (v % d == 0) return false;
    return true;
}

long long ipow(long long base, long long exp) {
    long long r = 1;
    for (long long i = 0; i < exp; ++i) r *= base;
    return r;
}

ParamSet ParamSet::make(long long p, long long f, long long e, long long nprime) {
    if (!is_prime(p)) throw std::invalid_argument("p must be prime");
    if (f < 1 || e < 1 || nprime < 1)
        throw std::invalid_argument("f, e, nprime must be positive");
    if (llgcd(nprime, p) != 1)
        throw std::invalid_argument("nprime must be coprime to p");
    ParamSet ps;
    ps.p = p;
    ps.f = f;
    ps.e = e;
    ps.nprime = nprime;
    ps.q = ipow(p, f);
    ps.n = ipow(p, e) * nprime;
    ps.m = llgcd(e, f);
    ps.n1 = llgcd(ps.n, ipow(p, ps.m) - 1);
    if (ps.n % p != 0) throw std::invalid_argument("p must divide n");
    return ps;
}

std::vector<int> least_irreducible_poly(long long p, int deg) {
    std::uint64_t count = 1;
    for (int i = 0; i < deg; ++i) count *= (std::uint64_t)p;
    for (std::uint64_t v = 0; v < count; ++v) {
        std::vector<int> f(deg + 1, 0);
        std::uint64_t t = v;
        for (int i = 0; i < deg; ++i) {
            f[i] = int(t % p);
            t /= p;
        }
        f[deg] = 1;
        if (is_irreducible(f, p)) return f;
    }
    throw std::logic_error("no irreducible polynomial found");
}

Tower::Tower(long long p, std::vector<int> degrees) : p_(p) {
    if (!is_prime(p)) throw std::invalid_argument("p must be prime");
    if (degrees.empty()) degrees = {1};
    long long L = 1;
    for (int d : degrees) {
        if (d < 1) throw std::invalid_argument("degrees must be positive");
        L = std::lcm(L, (long long)d);
    }
    if (L >= 4096) throw std::invalid_argument("tower degree too large");
    ambient_ = int(L);
    std::uint64_t size = 1;
    for (int i = 0; i < ambient_; ++i) {
        size *= (std::uint64_t)p;
        if (size > kMaxFieldSize)
            throw BudgetError("ambient field exceeds size budget");
    }
    for (int d = 1; d <= ambient_; ++d)
        if (ambient_ % d == 0) degree_list_.push_back(d);
    for (int d : degree_list_) build_field(d);
    build_embeddings();
}

void Tower::build_field(int deg) {
    Field F;
    F.deg = deg;
    F.size = 1;
    for (int i = 0; i < deg; ++i) F.size *= (std::uint64_t)p_;
    F.poly = least_irreducible_poly(p_, deg);

    // discrete-log tables from a primitive element
    std::uint64_t ord = F.size - 1;
    auto factors = prime_factors((long long)ord);
    std::uint32_t gen = 0;
    for (std::uint64_t cand = 1; cand < F.size; ++cand) {
        auto g = std::uint32_t(cand);
        bool ok = g != 0;
        for (long long l : factors) {
            if (raw_pow(F, g, ord / (std::uint64_t)l) == 1u) {
                ok = false;
                break;
            }
        }
        if (ok) {
            gen = g;
            break;
        }
    }
    if (ord > 0 && gen == 0) throw std::logic_error("no primitive element");
    F.exp.resize(ord ? ord : 1);
    F.log.assign(F.size, 0);
    std::uint32_t cur = 1;
    for (std::uint64_t i = 0; i < ord; ++i) {
        F.exp[i] = cur;
        F.log[cur] = std::uint32_t(i);
        cur = raw_mul_poly(F, cur, gen);
    }
    fields_[deg] = std::move(F);
}

void Tower::build_embeddings() {
    const Field& A = field(ambient_);
    // generator image of each field inside the ambient field: least root of
    // its defining polynomial (the ambient generator maps to itself)
    std::unordered_map<int, std::uint32_t> img_in_ambient;
    for (int d : degree_list_) {
        const Field& F = field(d);
        if (d == ambient_) {
            img_in_ambient[d] =
                ambient_ == 1
                    ? std::uint32_t((((-(long long)F.poly[0]) % p_) + p_) % p_)
                    : std::uint32_t(p_);
            continue;
        }
        bool found = false;
        for (std::uint64_t v = 0; v < A.size; ++v) {
            if (eval_at(A, F.poly, std::uint32_t(v)) == 0) {
                img_in_ambient[d] = std::uint32_t(v);
                found = true;
                break;
            }
        }
        if (!found) throw std::logic_error("no root in ambient field");
    }
    auto to_ambient = [&](int d, std::uint64_t v) {
        std::uint32_t acc = 0;
        std::vector<int> cs(field(d).deg);
        std::uint64_t t = v;
        for (size_t i = 0; i < cs.size(); ++i) {
            cs[i] = int(t % p_);
            t /= std::uint64_t(p_);
        }
        for (int i = int(cs.size()) - 1; i >= 0; --i) {
            acc = raw_mul(A, acc, img_in_ambient[d]);
            acc = raw_add(A, acc, std::uint32_t(cs[i]));
        }
        return acc;
    };
    std::unordered_map<int, std::unordered_map<std::uint32_t, std::uint32_t>>
        rev_from_ambient;
    for (int d : degree_list_) {
        auto& rev = rev_from_ambient[d];
        rev.reserve(size_t(field(d).size));
        for (std::uint64_t v = 0; v < field(d).size; ++v)
            rev[to_ambient(d, v)] = std::uint32_t(v);
    }
    for (int a : degree_list_) {
        for (int b : degree_list_) {
            if (b % a != 0) continue;
            // a's generator is the class of x (or the root of its linear
            // polynomial when a = 1)
            std::uint64_t gen_a =
                a == 1 ? std::uint64_t(
                             (((-(long long)field(1).poly[0]) % p_) + p_) % p_)
                       : std::uint64_t(p_);
            gen_image_[key_of(a, b)] = rev_from_ambient[b].at(to_ambient(a, gen_a));
        }
    }
    // build reverse maps for every pair a | b by direct enumeration
    for (int a : degree_list_) {
        for (int b : degree_list_) {
            if (b % a != 0) continue;
            const Field& Fa = field(a);
            const Field& Fb = field(b);
            std::uint32_t g = gen_image_[key_of(a, b)];
            auto& rev = reverse_[key_of(a, b)];
            rev.reserve(size_t(Fa.size));
            for (std::uint64_t v = 0; v < Fa.size; ++v) {
                std::uint32_t acc = 0;
                std::uint64_t t = v;
                std::vector<int> cs(Fa.deg);
                for (int i = 0; i < Fa.deg; ++i) {
                    cs[i] = int(t % p_);
                    t /= p_;
                }
                for (int i = Fa.deg - 1; i >= 0; --i) {
                    acc = raw_mul(Fb, acc, g);
                    acc = raw_add(Fb, acc, std::uint32_t(cs[i]));
                }
                rev[acc] = std::uint32_t(v);
            }
        }
    }
}

const Tower::Field& Tower::field(int deg) const {
    auto it = fields_.find(deg);
    if (it == fields_.end())
        throw std::invalid_argument("field of degree " + std::to_string(deg) +
                                    " not registered");
    return it->second;
}

void Tower::check_deg(int deg) const { field(deg); }

void Tower::check_same(FqElem a, FqElem b) const {
    if (a.deg != b.deg)
        throw std::invalid_argument(
            "cross-field arithmetic without explicit embedding");
    check_deg(a.deg);
}

std::uint32_t Tower::raw_add(const Field& F, std::uint32_t a, std::uint32_t b) const {
    if (p_ == 2) return a ^ b;
    std::uint32_t r = 0, mul = 1;
    for (int i = 0; i < F.deg; ++i) {
        std::uint32_t da = a % p_, db = b % p_;
        a /= std::uint32_t(p_);
        b /= std::uint32_t(p_);
        r += ((da + db) % p_) * mul;
        mul *= std::uint32_t(p_);
    }
    return r;
}

std::uint32_t Tower::raw_neg(const Field& F, std::uint32_t a) const {
    if (p_ == 2) return a;
    std::uint32_t r = 0, mul = 1;
    for (int i = 0; i < F.deg; ++i) {
        std::uint32_t da = a % p_;
        a /= std::uint32_t(p_);
        r += ((p_ - da) % p_) * mul;
        mul *= std::uint32_t(p_);
    }
    return r;
}

std::uint32_t Tower::raw_mul_poly(const Field& F, std::uint32_t a,
                                  std::uint32_t b) const {
    std::vector<int> ca(F.deg, 0), cb(F.deg, 0);
    std::uint32_t t = a;
    for (int i = 0; i < F.deg; ++i) {
        ca[i] = int(t % p_);
        t /= std::uint32_t(p_);
    }
    t = b;
    for (int i = 0; i < F.deg; ++i) {
        cb[i] = int(t % p_);
        t /= std::uint32_t(p_);
    }
    auto c = poly_mulmod(ca, cb, F.poly, p_);
    std::uint32_t r = 0, mul = 1;
    for (int i = 0; i < F.deg; ++i) {
        r += std::uint32_t(c[i]) * mul;
        mul *= std::uint32_t(p_);
    }
    return r;
}

std::uint32_t Tower::raw_mul(const Field& F, std::uint32_t a, std::uint32_t b) const {
    if (a == 0 || b == 0) return 0;
    if (!F.exp.empty() && F.size > 1) {
        std::uint64_t ord = F.size - 1;
        std::uint64_t s = (std::uint64_t)F.log[a] + F.log[b];
        if (s >= ord) s -= ord;
        return F.exp[s];
    }
    return raw_mul_poly(F, a, b);
}

std::uint32_t Tower::raw_pow(const Field& F, std::uint32_t a,
                             unsigned long long k) const {
    std::uint32_t r = 1;
    while (k) {
        if (k & 1) r = raw_mul_poly(F, r, a);
        a = raw_mul_poly(F, a, a);
        k >>= 1;
    }
    return r;
}

std::uint32_t Tower::eval_at(const Field& F, const std::vector<int>& poly_fp,
                             std::uint32_t x) const {
    std::uint32_t acc = 0;
    for (int i = int(poly_fp.size()) - 1; i >= 0; --i) {
        acc = raw_mul(F, acc, x);
        acc = raw_add(F, acc, std::uint32_t(((poly_fp[i] % p_) + p_) % p_));
    }
    return acc;
}

FqElem Tower::scalar(int deg, long long c) const {
    check_deg(deg);
    return {deg, std::uint32_t(((c % p_) + p_) % p_)};
}

FqElem Tower::from_index(int deg, std::uint64_t v) const {
    const Field& F = field(deg);
    if (v >= F.size) throw std::invalid_argument("element index out of range");
    return {deg, std::uint32_t(v)};
}

FqElem Tower::add(FqElem a, FqElem b) const {
    check_same(a, b);
    return {a.deg, raw_add(field(a.deg), a.v, b.v)};
}

FqElem Tower::sub(FqElem a, FqElem b) const {
    check_same(a, b);
    return {a.deg, raw_add(field(a.deg), a.v, raw_neg(field(a.deg), b.v))};
}

FqElem Tower::neg(FqElem a) const {
    check_deg(a.deg);
    return {a.deg, raw_neg(field(a.deg), a.v)};
}

FqElem Tower::mul(FqElem a, FqElem b) const {
    check_same(a, b);
    return {a.deg, raw_mul(field(a.deg), a.v, b.v)};
}

FqElem Tower::inv(FqElem a) const {
    const Field& F = field(a.deg);
    if (a.v == 0) throw std::domain_error("inverse of zero");
    std::uint64_t ord = F.size - 1;
    return {a.deg, F.exp[(ord - F.log[a.v]) % ord]};
}

FqElem Tower::pow(FqElem a, long long k) const {
    const Field& F = field(a.deg);
    if (a.v == 0) {
        if (k > 0) return {a.deg, 0};
        if (k == 0) return {a.deg, 1};
        throw std::domain_error("negative power of zero");
    }
    long long ord = (long long)(F.size - 1);
    if (ord == 0) return {a.deg, a.v};
    long long kk = ((k % ord) + ord) % ord;
    std::uint64_t s = ((std::uint64_t)F.log[a.v] * (std::uint64_t)kk) % (std::uint64_t)ord;
    return {a.deg, F.exp[s]};
}

FqElem Tower::frob(FqElem a, long long i) const {
    const Field& F = field(a.deg);
    if (a.v == 0) return a;
    long long ord = (long long)(F.size - 1);
    std::uint64_t mult = 1;
    for (long long j = 0; j < ((i % F.deg) + F.deg) % F.deg; ++j)
        mult = (mult * (std::uint64_t)p_) % (std::uint64_t)ord;
    std::uint64_t s = ((std::uint64_t)F.log[a.v] * mult) % (std::uint64_t)ord;
    return {a.deg, F.exp[s]};
}

FqElem Tower::embed(FqElem a, int target_deg) const {
    if (target_deg == a.deg) return a;
    if (target_deg % a.deg != 0)
        throw std::invalid_argument("embed target is not an extension");
    const Field& Fb = field(target_deg);
    auto it = gen_image_.find(key_of(a.deg, target_deg));
    if (it == gen_image_.end())
        throw std::invalid_argument("embedding not registered");
    std::uint32_t g = it->second, acc = 0;
    std::uint64_t t = a.v;
    std::vector<int> cs(a.deg);
    for (int i = 0; i < a.deg; ++i) {
        cs[i] = int(t % p_);
        t /= std::uint64_t(p_);
    }
    for (int i = a.deg - 1; i >= 0; --i) {
        acc = raw_mul(Fb, acc, g);
        acc = raw_add(Fb, acc, std::uint32_t(cs[i]));
    }
    return {target_deg, acc};
}

FqElem Tower::project(FqElem a, int target_deg) const {
    if (target_deg == a.deg) return a;
    if (a.deg % target_deg != 0)
        throw std::invalid_argument("project target is not a subfield");
    auto it = reverse_.find(key_of(target_deg, a.deg));
    if (it == reverse_.end())
        throw std::invalid_argument("embedding not registered");
    auto jt = it->second.find(a.v);
    if (jt == it->second.end())
        throw std::domain_error("element is not in the subfield");
    return {target_deg, jt->second};
}

bool Tower::in_subfield(FqElem a, int sub_deg) const {
    if (sub_deg == a.deg) return true;
    if (a.deg % sub_deg != 0) return false;
    auto it = reverse_.find(key_of(sub_deg, a.deg));
    if (it == reverse_.end()) return false;
    return it->second.count(a.v) != 0;
}

FqElem Tower::trace(FqElem a, int target_deg) const {
    if (a.deg % target_deg != 0)
        throw std::invalid_argument("trace target is not a subfield");
    FqElem s = zero(a.deg);
    for (int i = 0; i < a.deg / target_deg; ++i)
        s = add(s, frob(a, (long long)target_deg * i));
    return project(s, target_deg);
}

FqElem Tower::norm(FqElem a, int target_deg) const {
    if (a.deg % target_deg != 0)
        throw std::invalid_argument("norm target is not a subfield");
    FqElem s = one(a.deg);
    for (int i = 0; i < a.deg / target_deg; ++i)
        s = mul(s, frob(a, (long long)target_deg * i));
    return project(s, target_deg);
}

std::vector<FqElem> Tower::solve_artin_schreier(FqElem t, int m) const {
    const Field& F = field(t.deg);
    if (t.deg % m != 0)
        throw std::invalid_argument("field does not contain F_{p^m}");
    std::vector<FqElem> out;
    for (std::uint64_t v = 0; v < F.size; ++v) {
        FqElem z{t.deg, std::uint32_t(v)};
        FqElem lhs = sub(frob(z, m), z);
        if (lhs == t) out.push_back(z);
    }
    return out;
}

std::vector<FqElem> Tower::roots_of_unity_times(FqElem a, long long k) const {
    const Field& F = field(a.deg);
    std::vector<FqElem> out;
    for (std::uint64_t v = 0; v < F.size; ++v) {
        FqElem x{a.deg, std::uint32_t(v)};
        if (pow(x, k) == a || (x.v == 0 && a.v == 0 && k > 0)) {
            if (x.v == 0 && a.v != 0) continue;
            out.push_back(x);
        }
    }
    return out;
}

std::vector<int> Tower::coords(FqElem a) const {
    std::vector<int> cs(a.deg);
    std::uint64_t t = a.v;
    for (int i = 0; i < a.deg; ++i) {
        cs[i] = int(t % p_);
        t /= std::uint64_t(p_);
    }
    return cs;
}

std::string Tower::to_string(FqElem a) const {
    std::ostringstream os;
    os << "[" << a.deg << ":";
    auto cs = coords(a);
    for (size_t i = 0; i < cs.size(); ++i) os << (i ? "," : "") << cs[i];
    os << "]";
    return os.str();
}

std::string Tower::describe_json() const {
    nlohmann::json j;
    j["p"] = p_;
    j["degrees"] = degree_list_;
    nlohmann::json polys = nlohmann::json::object();
    for (int d : degree_list_) polys[std::to_string(d)] = field(d).poly;
    j["polynomials"] = polys;
    return j.dump();
}

}  // namespace arith
