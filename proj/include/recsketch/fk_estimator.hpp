#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "recsketch/count_sketch.hpp"
#include "recsketch/recursive_core.hpp"

// Single-pass (1 +/- epsilon) estimation of F_k = sum f_i^k for k > 2.
//
// The recursive driver runs over the implicit power vector (f_i^k), which
// is separable: filtering the stream by a zero-one hash multiplies the
// power vector by the same hash. Each level's cover comes from a
// Count-Sketch whose per-frequency error epsilon/(2k) turns into a
// (1 +/- epsilon) error on k-th powers, with buckets sized so anything
// alpha-major in the power vector is L2-visible (the Hoelder bridge).
// After the shallow level chain the surviving substream is thin enough to
// count exactly, so the base value is the exact F_k of the deepest level.

namespace recsketch {

struct FkConfig {
    double k = 3.0;
    double epsilon = 0.2;
    unsigned nesting = 1;  // t: 0 = full log(n) depth, 1 = log log(n) levels,
                           // >= 2 nests another stage at the base
    std::uint64_t seed = 0;
    std::size_t base_capacity = std::size_t{1} << 16;  // distinct survivors
    double c_w = kDefaultPowerBucketConstant;
    double c_d = kDefaultRowConstant;
    double alpha_scale = 1.0;  // multiplies the epsilon^2/depth^3 heaviness

    void validate() const;
};

struct SpaceReport {
    std::uint64_t table_words = 0;
    std::uint64_t tracker_words = 0;
    std::uint64_t base_words = 0;
    std::uint64_t hash_words = 0;

    std::uint64_t total() const {
        return table_words + tracker_words + base_words + hash_words;
    }
    SpaceReport& operator+=(const SpaceReport& other);
    // Flat key=value lines: one component per line plus the total.
    std::string to_kv() const;
};

struct FkEstimate {
    double value = 0.0;
    bool overflowed = false;  // base capacity exceeded somewhere; value is 0
};

class RecursiveFk {
  public:
    RecursiveFk(const FkConfig& config, std::uint64_t universe_size, std::uint64_t m_hint);

    // One stream occurrence of i. Updates every level sketch i survives to
    // and, when i reaches the deepest level, the base counter.
    void update(std::uint64_t i);

    FkEstimate estimate() const;

    // Words of 64-bit state the configuration commits to, independent of
    // the data; equals plan_space for the same arguments.
    SpaceReport space_report() const;
    static SpaceReport plan_space(const FkConfig& config, std::uint64_t universe_size,
                                  std::uint64_t m_hint);

    // Depth schedule: nesting 0 gives ceil(log2 n); each further stage
    // takes floor(log2 .) of the previous depth (floored at 2, capped by
    // the full depth).
    static std::size_t depth_for(unsigned nesting, std::uint64_t universe_size);

    const FkConfig& config() const { return config_; }
    std::uint64_t universe_size() const { return universe_; }
    std::uint64_t m_hint() const { return m_hint_; }
    std::size_t depth() const { return plan_.depth; }
    const LevelPlan& plan() const { return plan_; }
    const HashChain& chain() const { return plan_.chain; }
    const std::vector<CountSketch>& level_sketches() const { return level_sketches_; }
    const std::map<std::uint64_t, std::uint64_t>& base_counts() const { return base_counts_; }
    const RecursiveFk* nested() const { return nested_.get(); }
    bool overflowed() const;
    std::uint64_t total_updates() const { return total_updates_; }

    bool same_layout(const RecursiveFk& other) const;
    friend RecursiveFk merge(const RecursiveFk& a, const RecursiveFk& b);

  private:
    // sizing_universe: expected distinct-item bound used for bucket and
    // depth sizing; the full universe for the outermost stage, thinned for
    // nested ones.
    RecursiveFk(const FkConfig& config, std::uint64_t universe_size, std::uint64_t m_hint,
                std::uint64_t sizing_universe);

    FkConfig config_;
    std::uint64_t universe_;
    std::uint64_t m_hint_;
    std::uint64_t sizing_universe_;
    LevelPlan plan_;
    double alpha_ = 0.0;      // power-vector heaviness fed to the sketches
    double eps_freq_ = 0.0;   // per-frequency sketch error epsilon/(2k)
    double delta_level_ = 0.0;
    std::vector<CountSketch> level_sketches_;
    std::map<std::uint64_t, std::uint64_t> base_counts_;
    std::unique_ptr<RecursiveFk> nested_;  // used instead of base_counts_ when nesting >= 2
    bool base_overflowed_ = false;
    std::uint64_t total_updates_ = 0;
};

RecursiveFk merge(const RecursiveFk& a, const RecursiveFk& b);

}  // namespace recsketch
