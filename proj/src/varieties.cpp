#include "arith/varieties.hpp"

#include <chrono>
#include <cmath>

#include <boost/rational.hpp>

#include "arith/errors.hpp"

#ifdef ARITH_HAVE_OPENMP
#include <omp.h>
#endif

namespace arith {

namespace {

using Rat = boost::rational<BigInt>;

// Q(zeta_p) element in the power basis, used only by the recurrence solver.
struct CycRat {
    long long p = 2;
    std::vector<Rat> c;

    static CycRat zero(long long p) {
        CycRat r;
        r.p = p;
        r.c.assign(size_t(p - 1), Rat(0));
        return r;
    }
    static CycRat from(const CycSum& s) {
        CycRat r = zero(s.p);
        for (size_t i = 0; i < s.c.size(); ++i) r.c[i] = Rat(s.c[i]);
        return r;
    }
    bool is_zero() const {
        for (const auto& x : c)
            if (x != Rat(0)) return false;
        return true;
    }
};

CycRat cr_add(const CycRat& a, const CycRat& b) {
    CycRat r = a;
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] += b.c[i];
    return r;
}

CycRat cr_sub(const CycRat& a, const CycRat& b) {
    CycRat r = a;
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] -= b.c[i];
    return r;
}

CycRat cr_mul(const CycRat& a, const CycRat& b) {
    std::vector<Rat> raw(a.c.size() + b.c.size() - 1, Rat(0));
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == Rat(0)) continue;
        for (size_t j = 0; j < b.c.size(); ++j) raw[i + j] += a.c[i] * b.c[j];
    }
    CycRat r = CycRat::zero(a.p);
    for (size_t j = 0; j < raw.size(); ++j) {
        if (raw[j] == Rat(0)) continue;
        long long k = (long long)(j % (size_t)a.p);
        if (k <= a.p - 2)
            r.c[size_t(k)] += raw[j];
        else
            for (auto& x : r.c) x -= raw[j];
    }
    return r;
}

CycRat cr_inv(const CycRat& a) {
    // solve (mult-by-a matrix) x = e0 over Q
    long long d = a.p - 1;
    std::vector<std::vector<Rat>> M(size_t(d), std::vector<Rat>(size_t(d + 1), Rat(0)));
    for (long long j = 0; j < d; ++j) {
        CycRat base = CycRat::zero(a.p);
        base.c[size_t(j)] = Rat(1);
        CycRat col = cr_mul(a, base);
        for (long long i = 0; i < d; ++i) M[size_t(i)][size_t(j)] = col.c[size_t(i)];
    }
    M[0][size_t(d)] = Rat(1);
    // gaussian elimination
    long long row = 0;
    for (long long col = 0; col < d && row < d; ++col) {
        long long piv = -1;
        for (long long i = row; i < d; ++i)
            if (M[size_t(i)][size_t(col)] != Rat(0)) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(M[size_t(row)], M[size_t(piv)]);
        Rat lead = M[size_t(row)][size_t(col)];
        for (auto& x : M[size_t(row)]) x /= lead;
        for (long long i = 0; i < d; ++i) {
            if (i == row) continue;
            Rat f = M[size_t(i)][size_t(col)];
            if (f == Rat(0)) continue;
            for (long long jj = 0; jj <= d; ++jj)
                M[size_t(i)][size_t(jj)] -= f * M[size_t(row)][size_t(jj)];
        }
        ++row;
    }
    if (row < d) throw std::domain_error("cyclotomic element not invertible");
    CycRat r = CycRat::zero(a.p);
    for (long long i = 0; i < d; ++i) r.c[size_t(i)] = M[size_t(i)][size_t(d)];
    return r;
}

long double rat_to_ld(const Rat& r) {
    return r.numerator().convert_to<long double>() /
           r.denominator().convert_to<long double>();
}

std::complex<long double> cr_embed(const CycRat& a) {
    const long double pi = 3.14159265358979323846264338327950288L;
    std::complex<long double> acc(0.0L, 0.0L);
    for (size_t k = 0; k < a.c.size(); ++k) {
        if (a.c[k] == Rat(0)) continue;
        long double ang = 2.0L * pi * (long double)k / (long double)a.p;
        acc += rat_to_ld(a.c[k]) *
               std::complex<long double>(std::cos(ang), std::sin(ang));
    }
    return acc;
}

// Solve the (rows x cols) system A x = b over Q(zeta_p); returns true and the
// solution if the system is consistent.
bool cr_solve(std::vector<std::vector<CycRat>> aug, int cols,
              std::vector<CycRat>& sol, long long p) {
    int rows = int(aug.size());
    std::vector<int> pivot_col(size_t(rows), -1);
    int row = 0;
    for (int col = 0; col < cols && row < rows; ++col) {
        int piv = -1;
        for (int i = row; i < rows; ++i)
            if (!aug[size_t(i)][size_t(col)].is_zero()) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(aug[size_t(row)], aug[size_t(piv)]);
        CycRat lead = cr_inv(aug[size_t(row)][size_t(col)]);
        for (auto& x : aug[size_t(row)]) x = cr_mul(x, lead);
        for (int i = 0; i < rows; ++i) {
            if (i == row) continue;
            CycRat f = aug[size_t(i)][size_t(col)];
            if (f.is_zero()) continue;
            for (int j = 0; j <= cols; ++j)
                aug[size_t(i)][size_t(j)] = cr_sub(
                    aug[size_t(i)][size_t(j)],
                    cr_mul(f, aug[size_t(row)][size_t(j)]));
        }
        pivot_col[size_t(row)] = col;
        ++row;
    }
    for (int i = row; i < rows; ++i)
        if (!aug[size_t(i)][size_t(cols)].is_zero()) return false;
    sol.assign(size_t(cols), CycRat::zero(p));
    for (int i = 0; i < row; ++i)
        if (pivot_col[size_t(i)] >= 0)
            sol[size_t(pivot_col[size_t(i)])] = aug[size_t(i)][size_t(cols)];
    return true;
}

std::vector<std::complex<long double>> poly_roots(
    const std::vector<std::complex<long double>>& coeffs) {
    // coeffs: monic polynomial, coeffs[i] multiplies x^i, degree = size-1
    int d = int(coeffs.size()) - 1;
    std::vector<std::complex<long double>> r(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i)
        r[size_t(i)] = std::pow(std::complex<long double>(0.4L, 0.9L),
                                (long double)i);
    for (int iter = 0; iter < 500; ++iter) {
        long double delta = 0;
        for (int i = 0; i < d; ++i) {
            std::complex<long double> val = coeffs[size_t(d)];
            for (int j = d - 1; j >= 0; --j)
                val = val * r[size_t(i)] + coeffs[size_t(j)];
            std::complex<long double> den(1.0L, 0.0L);
            for (int j = 0; j < d; ++j)
                if (j != i) den *= r[size_t(i)] - r[size_t(j)];
            auto step = val / den;
            r[size_t(i)] -= step;
            delta = std::max(delta, std::abs(step));
        }
        if (delta < 1e-15L) break;
    }
    return r;
}

std::uint32_t padd(long long p, int deg, std::uint32_t a, std::uint32_t b) {
    if (p == 2) return a ^ b;
    std::uint32_t r = 0, mul = 1;
    for (int i = 0; i < deg; ++i) {
        r += std::uint32_t((a % p + b % p) % p) * mul;
        a /= std::uint32_t(p);
        b /= std::uint32_t(p);
        mul *= std::uint32_t(p);
    }
    return r;
}

std::uint32_t pneg(long long p, int deg, std::uint32_t a) {
    if (p == 2) return a;
    std::uint32_t r = 0, mul = 1;
    for (int i = 0; i < deg; ++i) {
        r += std::uint32_t((p - a % p) % p) * mul;
        a /= std::uint32_t(p);
        mul *= std::uint32_t(p);
    }
    return r;
}

}  // namespace

VarietySpec VarietySpec::makeX(const ParamSet& ps) {
    VarietySpec s;
    s.params = ps;
    s.kind = Kind::X;
    return s;
}

VarietySpec VarietySpec::makeY(const ParamSet& ps) {
    if (ps.p != 2) throw std::invalid_argument("kind Y requires p = 2");
    if (ps.n < 4 || ps.n % 2 != 0)
        throw std::invalid_argument("kind Y requires even n >= 4");
    VarietySpec s;
    s.params = ps;
    s.kind = Kind::Y;
    return s;
}

int VarietySpec::y_arity() const {
    return kind == Kind::X ? int(params.n) - 1 : int(params.n) - 2;
}

FqElem phi_eval(const Tower& T, const VarietySpec& spec,
                const std::vector<FqElem>& y) {
    if ((int)y.size() != spec.y_arity())
        throw std::invalid_argument("wrong number of coordinates");
    int deg = y.empty() ? int(spec.params.m) : y[0].deg;
    for (auto& c : y)
        if (c.deg != deg) throw std::invalid_argument("mixed coordinate fields");
    if (deg % spec.params.m != 0)
        throw std::invalid_argument("field does not contain F_{p^m}");
    const ParamSet& ps = spec.params;
    size_t qstart = spec.kind == VarietySpec::Kind::X ? 1 : 0;
    FqElem quad = T.zero(deg);
    for (size_t i = qstart; i < y.size(); ++i)
        for (size_t j = i; j < y.size(); ++j)
            quad = T.add(quad, T.mul(y[i], y[j]));
    if (spec.kind == VarietySpec::Kind::Y) return quad;
    FqElem head = T.pow(y[0], ipow(ps.p, ps.e) + 1);
    FqElem ninv = T.inv(T.scalar(deg, ps.nprime));
    return T.sub(head, T.mul(ninv, quad));
}

bool on_variety(const Tower& T, const VarietySpec& spec,
                const std::vector<FqElem>& coords) {
    if (coords.empty()) throw std::invalid_argument("empty point");
    FqElem z = coords[0];
    std::vector<FqElem> y(coords.begin() + 1, coords.end());
    FqElem lhs = T.sub(T.frob(z, spec.params.m), z);
    return lhs == phi_eval(T, spec, y);
}

TraceProfile variety_trace_profile(const VarietySpec& spec, int k,
                                   std::uint64_t budget, bool parallel) {
    const ParamSet& ps = spec.params;
    if (k < 1) throw std::invalid_argument("k must be positive");
    int mk = int(ps.m) * k;
    int yc = spec.y_arity();
    Tower T(ps.p, {int(ps.m), mk});
    std::uint64_t fsize = T.field_size(mk);
    std::uint64_t tuples = 1;
    for (int i = 0; i < yc; ++i) {
        if (tuples > budget / (fsize ? fsize : 1) + 1) tuples = budget + 1;
        else tuples *= fsize;
        if (tuples > budget)
            throw BudgetError("enumeration budget exceeded");
    }
    std::uint64_t pm = T.field_size(int(ps.m));

    auto t0 = std::chrono::steady_clock::now();

    // precomputed per-element tables
    std::vector<std::uint32_t> trace_tab(fsize);
    for (std::uint64_t v = 0; v < fsize; ++v)
        trace_tab[v] = T.trace(T.from_index(mk, v), int(ps.m)).v;
    std::vector<std::uint32_t> pow_tab;
    std::uint32_t ninv_v = 0;
    bool isX = spec.kind == VarietySpec::Kind::X;
    if (isX) {
        pow_tab.resize(fsize);
        long long ex = ipow(ps.p, ps.e) + 1;
        for (std::uint64_t v = 0; v < fsize; ++v)
            pow_tab[v] = T.pow(T.from_index(mk, v), ex).v;
        ninv_v = T.inv(T.scalar(mk, ps.nprime)).v;
    }
    const auto& exps = T.exp_table(mk);
    const auto& logs = T.log_table(mk);
    std::uint64_t ord = fsize - 1;
    long long p = ps.p;

    auto body = [&](std::uint64_t idx, std::vector<long long>& prof) {
        std::uint32_t y[32];
        std::uint64_t t = idx;
        for (int i = 0; i < yc; ++i) {
            y[i] = std::uint32_t(t % fsize);
            t /= fsize;
        }
        int qstart = isX ? 1 : 0;
        std::uint32_t quad = 0;
        for (int i = qstart; i < yc; ++i)
            for (int j = i; j < yc; ++j) {
                std::uint32_t a = y[i], b = y[j];
                if (a && b) {
                    std::uint64_t s = (std::uint64_t)logs[a] + logs[b];
                    if (s >= ord) s -= ord;
                    quad = padd(p, mk, quad, exps[s]);
                }
            }
        std::uint32_t phi;
        if (isX) {
            std::uint32_t scaled = 0;
            if (quad && ninv_v) {
                std::uint64_t s = (std::uint64_t)logs[quad] + logs[ninv_v];
                if (s >= ord) s -= ord;
                scaled = exps[s];
            }
            phi = padd(p, mk, pow_tab[y[0]], pneg(p, mk, scaled));
        } else {
            phi = quad;
        }
        ++prof[trace_tab[phi]];
    };

    TraceProfile out;
    out.tuples = tuples;
    out.field_deg = mk;
    out.counts.assign(size_t(pm), 0);

#ifdef ARITH_HAVE_OPENMP
    if (parallel) {
        int nt = omp_get_max_threads();
        std::vector<std::vector<long long>> profs(
            size_t(nt), std::vector<long long>(size_t(pm), 0));
#pragma omp parallel
        {
            auto& pr = profs[size_t(omp_get_thread_num())];
#pragma omp for schedule(static)
            for (long long idx = 0; idx < (long long)tuples; ++idx)
                body(std::uint64_t(idx), pr);
        }
        for (auto& pr : profs)
            for (size_t v = 0; v < size_t(pm); ++v) out.counts[v] += pr[v];
    } else
#endif
    {
        (void)parallel;
        for (std::uint64_t idx = 0; idx < tuples; ++idx) body(idx, out.counts);
    }

    out.seconds = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    return out;
}

long long count_points(const VarietySpec& spec, int k, std::uint64_t budget,
                       bool parallel) {
    auto prof = variety_trace_profile(spec, k, budget, parallel);
    return (long long)ipow(spec.params.p, spec.params.m) * prof.counts[0];
}

CycSum exp_sum(const VarietySpec& spec, int k, std::uint64_t psi_scale_index,
               std::uint64_t budget, bool parallel) {
    auto prof = variety_trace_profile(spec, k, budget, parallel);
    const ParamSet& ps = spec.params;
    Tower T(ps.p, {int(ps.m)});
    AdditiveCharacter psi(T, int(ps.m), T.from_index(int(ps.m), psi_scale_index));
    CycSum s = CycSum::zero(ps.p);
    for (size_t v = 0; v < prof.counts.size(); ++v) {
        if (!prof.counts[v]) continue;
        auto term = cyc_mul(CycSum::integer(ps.p, prof.counts[v]),
                            psi.eval(T.from_index(int(ps.m), v)));
        s = cyc_add(s, term);
    }
    return s;
}

EigenReport recurrence_eigendata(const VarietySpec& spec,
                                 std::uint64_t psi_scale_index, int k_max,
                                 std::uint64_t budget) {
    const ParamSet& ps = spec.params;
    if (psi_scale_index == 0)
        throw std::invalid_argument("recurrence eigendata needs nontrivial psi");
    long long pe = ipow(ps.p, ps.e);
    if (k_max < 2 * pe + 2)
        throw std::invalid_argument("k_max must be at least 2 p^e + 2");

    EigenReport rep;
    for (int k = 1; k <= k_max; ++k)
        rep.sums.push_back(exp_sum(spec, k, psi_scale_index, budget));

    std::vector<CycRat> s;
    for (const auto& v : rep.sums) s.push_back(CycRat::from(v));

    int K = k_max;
    std::vector<CycRat> coeffs;
    int found = -1;
    for (int d = 0; d <= K / 2 && found < 0; ++d) {
        if (d == 0) {
            bool all0 = true;
            for (auto& x : s) all0 = all0 && x.is_zero();
            if (all0) found = 0;
            continue;
        }
        // rows: s_{k} = sum_i c_i s_{k-i}, k = d+1..K  (1-based s_k = s[k-1])
        std::vector<std::vector<CycRat>> aug;
        for (int k = d + 1; k <= K; ++k) {
            std::vector<CycRat> row;
            for (int i = 1; i <= d; ++i) row.push_back(s[size_t(k - i - 1)]);
            row.push_back(s[size_t(k - 1)]);
            aug.push_back(std::move(row));
        }
        std::vector<CycRat> sol;
        if (cr_solve(std::move(aug), d, sol, ps.p)) {
            coeffs = std::move(sol);
            found = d;
        }
    }
    if (found < 0)
        throw VerifyError("no linear recurrence of degree <= k_max/2 found");
    rep.degree = found;
    rep.degree_ok = found <= pe && found > 0;

    rep.expected_magnitude =
        std::pow((long double)ps.p, (long double)(ps.m * (ps.n - 1)) / 2.0L);
    if (found > 0) {
        // monic characteristic polynomial x^d - c_1 x^{d-1} - ... - c_d
        std::vector<std::complex<long double>> poly(size_t(found + 1));
        poly[size_t(found)] = 1.0L;
        for (int i = 1; i <= found; ++i)
            poly[size_t(found - i)] = -cr_embed(coeffs[size_t(i - 1)]);
        rep.roots = poly_roots(poly);
        rep.magnitudes_ok = true;
        for (auto& r : rep.roots) {
            rep.magnitudes.push_back(std::abs(r));
            if (std::abs(std::abs(r) - rep.expected_magnitude) > 1e-6L)
                rep.magnitudes_ok = false;
        }
    }
    return rep;
}

}  // namespace arith
