#include "recsketch/parallel.hpp"

#include <memory>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace recsketch {

namespace {

int resolve_threads(int requested) {
#ifdef _OPENMP
    if (requested > 0) return requested;
    return omp_get_max_threads();
#else
    (void)requested;
    return 1;
#endif
}

}  // namespace

CountSketch sketch_stream_serial(const CsConfig& config, std::span<const std::uint64_t> stream) {
    CountSketch sketch(config);
    for (std::uint64_t item : stream) sketch.update(item, +1);
    return sketch;
}

CountSketch sketch_stream_parallel(const CsConfig& config, std::span<const std::uint64_t> stream,
                                   int num_threads) {
    int threads = resolve_threads(num_threads);
    if (threads <= 1 || stream.size() < 2)
        return sketch_stream_serial(config, stream);
    std::vector<std::unique_ptr<CountSketch>> shards(threads);
#ifdef _OPENMP
#pragma omp parallel num_threads(threads)
    {
        int tid = omp_get_thread_num();
        std::size_t begin = stream.size() * tid / threads;
        std::size_t end = stream.size() * (tid + 1) / threads;
        auto local = std::make_unique<CountSketch>(config);
        for (std::size_t t = begin; t < end; ++t) local->update(stream[t], +1);
        shards[tid] = std::move(local);
    }
#else
    shards[0] = std::make_unique<CountSketch>(sketch_stream_serial(config, stream));
#endif
    CountSketch merged = std::move(*shards[0]);
    for (int s = 1; s < threads; ++s)
        if (shards[s]) merged = merge(merged, *shards[s]);
    return merged;
}

RecursiveFk ingest_serial(const FkConfig& config, std::uint64_t universe_size,
                          std::uint64_t m_hint, std::span<const std::uint64_t> stream) {
    RecursiveFk state(config, universe_size, m_hint);
    for (std::uint64_t item : stream) state.update(item);
    return state;
}

RecursiveFk ingest_parallel(const FkConfig& config, std::uint64_t universe_size,
                            std::uint64_t m_hint, std::span<const std::uint64_t> stream,
                            int num_threads) {
    int threads = resolve_threads(num_threads);
    if (threads <= 1 || stream.size() < 2)
        return ingest_serial(config, universe_size, m_hint, stream);
    std::vector<std::unique_ptr<RecursiveFk>> shards(threads);
#ifdef _OPENMP
#pragma omp parallel num_threads(threads)
    {
        int tid = omp_get_thread_num();
        std::size_t begin = stream.size() * tid / threads;
        std::size_t end = stream.size() * (tid + 1) / threads;
        auto local = std::make_unique<RecursiveFk>(config, universe_size, m_hint);
        for (std::size_t t = begin; t < end; ++t) local->update(stream[t]);
        shards[tid] = std::move(local);
    }
#else
    shards[0] = std::make_unique<RecursiveFk>(ingest_serial(config, universe_size, m_hint, stream));
#endif
    RecursiveFk merged = std::move(*shards[0]);
    for (int s = 1; s < threads; ++s)
        if (shards[s]) merged = merge(merged, *shards[s]);
    return merged;
}

}  // namespace recsketch
