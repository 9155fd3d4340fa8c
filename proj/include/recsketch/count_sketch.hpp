#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <vector>

#include "recsketch/cover.hpp"
#include "recsketch/hash_family.hpp"

namespace recsketch {

// Row count: d = ceil(c_d * ln(m_hint / delta)).
inline constexpr double kDefaultRowConstant = 3.0;
// Bucket constant for the plain top-t sizing w = ceil(c_w * t / eps^2).
inline constexpr double kDefaultTopKBucketConstant = 8.0;
// Bucket constant for the power-cover sizing
// w = ceil(c_w * alpha^{-2/k} * n^{1-2/k} / eps_f^2). The closed form's
// theory constant allocates thousands of times more than desk machines
// hold, so the default is calibrated to the measured accuracy of the
// acceptance experiments and stays configurable.
inline constexpr double kDefaultPowerBucketConstant = 1.0 / 64.0;

struct CsConfig {
    std::uint64_t universe_size = 0;  // n; updates outside [1, n] are rejected
    std::size_t rows = 0;             // d
    std::size_t buckets = 0;          // w
    std::size_t tracker_capacity = 0; // t
    std::uint64_t seed = 0;

    // Sizing for a plain top-t sketch with per-frequency error epsilon and
    // failure probability delta over streams of about m_hint updates.
    static CsConfig top_k(std::size_t t, double epsilon, double delta, std::uint64_t n,
                          std::uint64_t seed, std::uint64_t m_hint = 1'000'000,
                          double c_w = kDefaultTopKBucketConstant,
                          double c_d = kDefaultRowConstant);

    // Sizing for covers of the power vector (f_i^k): buckets chosen so an
    // index that is alpha-major in the power vector is estimated within
    // (1 +/- eps_freq) of its frequency; tracker holds ceil(1/alpha) pairs.
    // distinct_hint bounds the distinct items this sketch will see (the
    // thinned universe on deep levels); 0 means n.
    static CsConfig power_cover(std::uint64_t n, double k, double alpha, double eps_freq,
                                double delta, std::uint64_t seed,
                                std::uint64_t m_hint = 1'000'000,
                                std::uint64_t distinct_hint = 0,
                                double c_w = kDefaultPowerBucketConstant,
                                double c_d = kDefaultRowConstant);

    void validate() const;
    std::uint64_t table_words() const { return static_cast<std::uint64_t>(rows) * buckets; }
    std::uint64_t tracker_words() const { return 2 * static_cast<std::uint64_t>(tracker_capacity); }
    std::uint64_t hash_words() const { return 8 * static_cast<std::uint64_t>(rows); }
};

// Signed-counter sketch with median-of-rows point queries and a bounded
// top-t candidate tracker, refreshed on every update. The table is a
// linear function of the input stream, so sketches built with one seed
// merge by counter addition.
//
// Concurrency: one writer at a time; reads are safe between updates.
// Parallel ingestion shards the stream across same-seed sketches and merges.
class CountSketch {
  public:
    explicit CountSketch(const CsConfig& config);

    void update(std::uint64_t i, std::int64_t count);

    // Median over rows of sign * counter; signed, 0 on a fresh sketch.
    std::int64_t query(std::uint64_t i) const;

    // Tracked candidates as a cover: sorted by index, weights re-queried at
    // emission time and clamped at 0.
    Cover top() const;

    const CsConfig& config() const { return config_; }
    std::span<const std::int64_t> table() const { return table_; }
    std::uint64_t total_updates() const { return total_updates_; }
    std::size_t tracked_count() const { return tracked_.size(); }
    bool same_layout(const CountSketch& other) const;

    friend CountSketch merge(const CountSketch& a, const CountSketch& b);

  private:
    void refresh_tracker(std::uint64_t i, std::int64_t estimate);
    std::size_t bucket_of(std::size_t row, std::uint64_t i) const {
        return static_cast<std::size_t>(bucket_hash_[row].eval(i));
    }

    CsConfig config_;
    std::vector<std::int64_t> table_;  // rows * buckets
    std::vector<FourwiseHash> bucket_hash_;
    std::vector<FourwiseHash> sign_hash_;
    // Tracker: estimate per tracked index plus an eviction order where
    // begin() is the worst entry (lowest estimate, then largest index).
    std::map<std::uint64_t, std::int64_t> tracked_;
    struct WorstFirst {
        bool operator()(const std::pair<std::int64_t, std::uint64_t>& a,
                        const std::pair<std::int64_t, std::uint64_t>& b) const {
            if (a.first != b.first) return a.first < b.first;
            return a.second > b.second;
        }
    };
    std::set<std::pair<std::int64_t, std::uint64_t>, WorstFirst> eviction_;
    std::uint64_t total_updates_ = 0;
};

CountSketch merge(const CountSketch& a, const CountSketch& b);

}  // namespace recsketch
