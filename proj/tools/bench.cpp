// Throughput comparison between the serial reference implementations and
// the OpenMP / sweep kernels. Not a correctness gate (the test suite
// cross-checks results); this reports numbers.

#include "setpart/harness.hpp"
#include "setpart/partition.hpp"
#include "setpart/sampler.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <chrono>
#include <cstdio>
#include <cstring>
#include <vector>

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

int hardware_threads() {
#ifdef _OPENMP
    return omp_get_num_procs();
#else
    return 1;
#endif
}

void set_threads(int t) {
#ifdef _OPENMP
    omp_set_num_threads(t);
#else
    (void)t;
#endif
}

void bench_crossings(int n, int draws) {
    const setpart::MuSampler mu(n);
    std::vector<setpart::SetPartition> partitions;
    partitions.reserve(draws);
    for (int i = 0; i < draws; ++i) {
        auto rng = setpart::Xoshiro256pp::substream(7, i);
        partitions.push_back(setpart::stam_sample(mu, rng).partition);
    }

    long long sum_ref = 0;
    auto t0 = Clock::now();
    for (const auto& p : partitions) sum_ref += setpart::crossings_ref(p);
    const double ref_s = seconds_since(t0);

    long long sum_fast = 0;
    t0 = Clock::now();
    for (const auto& p : partitions) sum_fast += setpart::crossings(p);
    const double fast_s = seconds_since(t0);

    std::printf("crossings        n=%-6d draws=%-8d quadratic %8.1f/s   sweep %10.1f/s   x%.1f  %s\n",
                n, draws, draws / ref_s, draws / fast_s, ref_s / fast_s,
                sum_ref == sum_fast ? "(equal)" : "(MISMATCH)");
}

void bench_experiment(int n, long long samples) {
    setpart::ExperimentConfig cfg;
    cfg.n = n;
    cfg.statistic = setpart::Stat::dimension;
    cfg.sample_count = samples;
    cfg.seed = 99;
    cfg.normalization = setpart::Normalization::asymptotic;

    set_threads(1);
    auto t0 = Clock::now();
    const auto serial = setpart::run_experiment(cfg);
    const double serial_s = seconds_since(t0);

    set_threads(hardware_threads());
    t0 = Clock::now();
    const auto parallel = setpart::run_experiment(cfg);
    const double parallel_s = seconds_since(t0);

    std::printf("clt experiment   n=%-6d samples=%-6lld 1 thread %8.0f/s   %d threads %8.0f/s   x%.2f  %s\n",
                n, samples, samples / serial_s, hardware_threads(), samples / parallel_s,
                serial_s / parallel_s,
                serial.ks_distance == parallel.ks_distance ? "(identical)" : "(MISMATCH)");
}

void bench_balls(long long n, long long trials) {
    const long long m = setpart::concentration_experiment(100, 1, 0).m; // warm up alpha path
    (void)m;
    set_threads(1);
    auto t0 = Clock::now();
    const auto serial = setpart::concentration_experiment(n, trials, 5);
    const double serial_s = seconds_since(t0);

    set_threads(hardware_threads());
    t0 = Clock::now();
    const auto parallel = setpart::concentration_experiment(n, trials, 5);
    const double parallel_s = seconds_since(t0);

    std::printf("balls process    n=%-6lld trials=%-7lld 1 thread %8.1f/s   %d threads %8.1f/s   x%.2f  %s\n",
                n, trials, trials / serial_s, hardware_threads(), trials / parallel_s,
                serial_s / parallel_s,
                serial.p95 == parallel.p95 ? "(identical)" : "(MISMATCH)");
}

} // namespace

int main(int argc, char** argv) {
    const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
    std::printf("serial reference vs kernels (%d hardware threads)\n", hardware_threads());
    if (quick) {
        bench_crossings(200, 200);
        bench_experiment(50, 2000);
        bench_balls(2000, 200);
    } else {
        bench_crossings(1000, 2000);
        bench_experiment(300, 100000);
        bench_balls(100000, 500);
    }
    return 0;
}
