#pragma once

#include <cstdint>
#include <span>

#include "recsketch/count_sketch.hpp"
#include "recsketch/fk_estimator.hpp"

// Sharded ingestion. Both sketch types are linear in the stream, so
// feeding each shard into its own same-seed state and merging produces the
// same counters as the serial pass, bit for bit; the serial functions are
// the reference the parallel ones are tested against.

namespace recsketch {

CountSketch sketch_stream_serial(const CsConfig& config, std::span<const std::uint64_t> stream);
CountSketch sketch_stream_parallel(const CsConfig& config, std::span<const std::uint64_t> stream,
                                   int num_threads = 0);

RecursiveFk ingest_serial(const FkConfig& config, std::uint64_t universe_size,
                          std::uint64_t m_hint, std::span<const std::uint64_t> stream);
RecursiveFk ingest_parallel(const FkConfig& config, std::uint64_t universe_size,
                            std::uint64_t m_hint, std::span<const std::uint64_t> stream,
                            int num_threads = 0);

}  // namespace recsketch
