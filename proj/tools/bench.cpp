#include <chrono>
#include <cstdio>

#include "arith/varieties.hpp"

using namespace arith;

// Compares the OpenMP enumeration kernel against the serial reference on a
// few growing workloads and checks that the profiles agree exactly.
int main(int argc, char** argv) {
    long long budget = argc > 1 ? atoll(argv[1]) : (1ll << 26);
    struct Job {
        long long p, f, e, np;
        int k;
    };
    Job jobs[] = {
        {2, 1, 1, 1, 20}, {2, 1, 2, 1, 8}, {2, 1, 1, 3, 4},
        {3, 1, 1, 2, 3},
    };
    printf("%-14s %-3s %12s %10s %10s %8s %s\n", "params", "k", "tuples",
           "serial_s", "openmp_s", "speedup", "agree");
    bool all = true;
    for (const Job& j : jobs) {
        auto ps = ParamSet::make(j.p, j.f, j.e, j.np);
        auto spec = VarietySpec::makeX(ps);
        auto t0 = std::chrono::steady_clock::now();
        auto ser = variety_trace_profile(spec, j.k, (std::uint64_t)budget, false);
        auto t1 = std::chrono::steady_clock::now();
        auto par = variety_trace_profile(spec, j.k, (std::uint64_t)budget, true);
        auto t2 = std::chrono::steady_clock::now();
        double ts = std::chrono::duration<double>(t1 - t0).count();
        double tp = std::chrono::duration<double>(t2 - t1).count();
        bool agree = ser.counts == par.counts && ser.tuples == par.tuples;
        all = all && agree;
        char name[32];
        snprintf(name, sizeof name, "%lld,%lld,%lld,%lld", j.p, j.f, j.e, j.np);
        printf("%-14s %-3d %12llu %10.3f %10.3f %7.2fx %s\n", name, j.k,
               (unsigned long long)ser.tuples, ts, tp, tp > 0 ? ts / tp : 0.0,
               agree ? "yes" : "NO");
    }
    return all ? 0 : 1;
}
