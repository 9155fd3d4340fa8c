#include "recsketch/count_sketch.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace recsketch {

namespace {

std::size_t rows_for(double c_d, std::uint64_t m_hint, double delta) {
    double d = c_d * std::log(static_cast<double>(m_hint) / delta);
    return static_cast<std::size_t>(std::max(1.0, std::ceil(d)));
}

}  // namespace

CsConfig CsConfig::top_k(std::size_t t, double epsilon, double delta, std::uint64_t n,
                         std::uint64_t seed, std::uint64_t m_hint, double c_w, double c_d) {
    if (t < 1) throw std::invalid_argument("CsConfig::top_k: t must be >= 1");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("CsConfig::top_k: epsilon must lie in (0, 1)");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("CsConfig::top_k: delta must lie in (0, 1)");
    if (n < 1 || m_hint < 1) throw std::invalid_argument("CsConfig::top_k: n, m_hint must be >= 1");
    CsConfig cfg;
    cfg.universe_size = n;
    cfg.rows = rows_for(c_d, m_hint, delta);
    cfg.buckets = static_cast<std::size_t>(
        std::max(2.0, std::ceil(c_w * static_cast<double>(t) / (epsilon * epsilon))));
    cfg.tracker_capacity = t;
    cfg.seed = seed;
    return cfg;
}

CsConfig CsConfig::power_cover(std::uint64_t n, double k, double alpha, double eps_freq,
                               double delta, std::uint64_t seed, std::uint64_t m_hint,
                               std::uint64_t distinct_hint, double c_w, double c_d) {
    if (n < 1 || m_hint < 1)
        throw std::invalid_argument("CsConfig::power_cover: n, m_hint must be >= 1");
    if (!(k >= 1.0)) throw std::invalid_argument("CsConfig::power_cover: k must be >= 1");
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("CsConfig::power_cover: alpha must lie in (0, 1]");
    if (!(eps_freq > 0.0 && eps_freq < 1.0))
        throw std::invalid_argument("CsConfig::power_cover: eps_freq must lie in (0, 1)");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("CsConfig::power_cover: delta must lie in (0, 1)");
    if (distinct_hint == 0 || distinct_hint > n) distinct_hint = n;
    CsConfig cfg;
    cfg.universe_size = n;
    cfg.rows = rows_for(c_d, m_hint, delta);
    double w = c_w * std::pow(alpha, -2.0 / k) *
               std::pow(static_cast<double>(distinct_hint), 1.0 - 2.0 / k) /
               (eps_freq * eps_freq);
    cfg.buckets = static_cast<std::size_t>(std::max(16.0, std::ceil(w)));
    double pairs = std::ceil(1.0 / alpha);
    cfg.tracker_capacity = static_cast<std::size_t>(
        std::min(static_cast<double>(distinct_hint), std::max(1.0, pairs)));
    cfg.seed = seed;
    return cfg;
}

void CsConfig::validate() const {
    if (universe_size < 1) throw std::invalid_argument("CsConfig: universe must be >= 1");
    if (rows < 1) throw std::invalid_argument("CsConfig: rows must be >= 1");
    if (buckets < 1) throw std::invalid_argument("CsConfig: buckets must be >= 1");
    if (tracker_capacity < 1) throw std::invalid_argument("CsConfig: tracker must hold >= 1");
}

CountSketch::CountSketch(const CsConfig& config) : config_(config) {
    config_.validate();
    table_.assign(config_.rows * config_.buckets, 0);
    bucket_hash_.reserve(config_.rows);
    sign_hash_.reserve(config_.rows);
    for (std::size_t r = 0; r < config_.rows; ++r) {
        bucket_hash_.push_back(FourwiseHash::from_seed(
            derive_seed(config_.seed, SeedDomain::kBucketHash, r), config_.buckets));
        sign_hash_.push_back(
            FourwiseHash::from_seed(derive_seed(config_.seed, SeedDomain::kSignHash, r), 2));
    }
}

void CountSketch::update(std::uint64_t i, std::int64_t count) {
    if (i < 1 || i > config_.universe_size)
        throw std::out_of_range("CountSketch::update: index " + std::to_string(i) +
                                " outside [1, " + std::to_string(config_.universe_size) + "]");
    for (std::size_t r = 0; r < config_.rows; ++r)
        table_[r * config_.buckets + bucket_of(r, i)] += sign_hash_[r].sign(i) * count;
    ++total_updates_;
    refresh_tracker(i, query(i));
}

std::int64_t CountSketch::query(std::uint64_t i) const {
    // Queried on every update; scratch avoids an allocation per call.
    static thread_local std::vector<std::int64_t> row_estimates;
    row_estimates.resize(config_.rows);
    for (std::size_t r = 0; r < config_.rows; ++r)
        row_estimates[r] =
            sign_hash_[r].sign(i) * table_[r * config_.buckets + bucket_of(r, i)];
    std::size_t mid = (config_.rows - 1) / 2;  // lower middle when rows is even
    std::nth_element(row_estimates.begin(), row_estimates.begin() + mid, row_estimates.end());
    return row_estimates[mid];
}

void CountSketch::refresh_tracker(std::uint64_t i, std::int64_t estimate) {
    auto it = tracked_.find(i);
    if (it != tracked_.end()) {
        eviction_.erase({it->second, i});
        it->second = estimate;
        eviction_.insert({estimate, i});
        return;
    }
    if (tracked_.size() < config_.tracker_capacity) {
        tracked_.emplace(i, estimate);
        eviction_.insert({estimate, i});
        return;
    }
    auto worst = *eviction_.begin();
    bool better = estimate > worst.first || (estimate == worst.first && i < worst.second);
    if (!better) return;
    eviction_.erase(eviction_.begin());
    tracked_.erase(worst.second);
    tracked_.emplace(i, estimate);
    eviction_.insert({estimate, i});
}

Cover CountSketch::top() const {
    Cover q;
    q.entries.reserve(tracked_.size());
    for (const auto& [i, stale] : tracked_) {
        std::int64_t est = query(i);
        q.entries.push_back({i, est > 0 ? static_cast<double>(est) : 0.0});
    }
    return q;  // map iteration is already index-ascending
}

bool CountSketch::same_layout(const CountSketch& other) const {
    return config_.universe_size == other.config_.universe_size &&
           config_.rows == other.config_.rows && config_.buckets == other.config_.buckets &&
           config_.tracker_capacity == other.config_.tracker_capacity &&
           config_.seed == other.config_.seed;
}

CountSketch merge(const CountSketch& a, const CountSketch& b) {
    if (!a.same_layout(b))
        throw std::invalid_argument("merge(CountSketch): mismatched configuration");
    CountSketch out(a.config_);
    for (std::size_t idx = 0; idx < out.table_.size(); ++idx)
        out.table_[idx] = a.table_[idx] + b.table_[idx];
    out.total_updates_ = a.total_updates_ + b.total_updates_;
    // Rebuild the tracker by re-querying the union of both candidate sets
    // against the merged table.
    for (const auto& source : {&a.tracked_, &b.tracked_}) {
        for (const auto& [i, stale] : *source) {
            if (out.tracked_.contains(i)) continue;
            out.refresh_tracker(i, out.query(i));
        }
    }
    return out;
}

}  // namespace recsketch
