// Ingestion throughput: serial reference vs OpenMP-sharded states merged
// at the end. The merged counters are checked against the serial ones, so
// this doubles as a large linearity exercise.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "recsketch/parallel.hpp"
#include "recsketch/stream_io.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

bool tables_equal(const recsketch::RecursiveFk& a, const recsketch::RecursiveFk& b) {
    if (a.level_sketches().size() != b.level_sketches().size()) return false;
    for (std::size_t j = 0; j < a.level_sketches().size(); ++j) {
        auto ta = a.level_sketches()[j].table();
        auto tb = b.level_sketches()[j].table();
        if (!std::equal(ta.begin(), ta.end(), tb.begin())) return false;
    }
    return a.base_counts() == b.base_counts();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"serial vs sharded ingestion benchmark"};
    std::uint64_t n = 1 << 16;
    std::uint64_t m = 1 << 21;
    std::uint64_t seed = 1;
    double k = 3.0, epsilon = 0.2;
    unsigned nesting = 1;
    int max_threads = 0;
    int repeats = 3;
    app.add_option("--n", n, "universe size");
    app.add_option("--m", m, "stream length");
    app.add_option("--seed", seed, "seed");
    app.add_option("--k", k, "moment order");
    app.add_option("--epsilon", epsilon, "target error");
    app.add_option("--t", nesting, "depth-reduction stages");
    app.add_option("--threads", max_threads, "max shard count (0 = hardware)");
    app.add_option("--repeats", repeats, "timed repetitions per mode");
    CLI11_PARSE(app, argc, argv);

    recsketch::GenSpec spec;
    spec.dist = recsketch::StreamDist::kZipf;
    spec.zipf_exponent = 1.2;
    spec.universe_size = n;
    spec.length = m;
    spec.seed = seed;
    std::printf("generating zipf stream: n=%llu m=%llu\n",
                static_cast<unsigned long long>(n), static_cast<unsigned long long>(m));
    recsketch::StreamData data = recsketch::generate_stream(spec);

    recsketch::FkConfig cfg;
    cfg.k = k;
    cfg.epsilon = epsilon;
    cfg.nesting = nesting;
    cfg.seed = seed;

    double serial_best = 1e100;
    recsketch::RecursiveFk serial =
        recsketch::ingest_serial(cfg, n, data.items.size(), data.items);
    for (int r = 0; r < repeats; ++r) {
        double t0 = now_seconds();
        auto state = recsketch::ingest_serial(cfg, n, data.items.size(), data.items);
        serial_best = std::min(serial_best, now_seconds() - t0);
    }
    double serial_rate = static_cast<double>(m) / serial_best / 1e6;
    std::printf("%-10s %8s %12s %10s\n", "mode", "threads", "Mitems/s", "speedup");
    std::printf("%-10s %8d %12.2f %10.2f\n", "serial", 1, serial_rate, 1.0);

#ifdef _OPENMP
    int hw = max_threads > 0 ? max_threads : omp_get_max_threads();
#else
    int hw = 1;
#endif
    for (int threads = 2; threads <= hw * 2 && threads <= 16; threads *= 2) {
        double best = 1e100;
        recsketch::RecursiveFk merged =
            recsketch::ingest_parallel(cfg, n, data.items.size(), data.items, threads);
        for (int r = 0; r < repeats; ++r) {
            double t0 = now_seconds();
            auto state =
                recsketch::ingest_parallel(cfg, n, data.items.size(), data.items, threads);
            best = std::min(best, now_seconds() - t0);
        }
        double rate = static_cast<double>(m) / best / 1e6;
        std::printf("%-10s %8d %12.2f %10.2f", "sharded", threads, rate, serial_best / best);
        std::printf("  counters %s\n", tables_equal(serial, merged) ? "match" : "MISMATCH");
    }

    auto est = serial.estimate();
    std::printf("estimate=%.6g overflowed=%d\n", est.value, est.overflowed ? 1 : 0);
    return 0;
}
