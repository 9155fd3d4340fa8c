#include "recsketch/fk_estimator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace recsketch {

namespace {

std::size_t ceil_log2(std::uint64_t n) {
    if (n <= 1) return 0;
    return static_cast<std::size_t>(std::bit_width(n - 1));
}

std::uint64_t thinned(std::uint64_t value, std::size_t shift, std::uint64_t floor_at) {
    std::uint64_t shifted = shift >= 64 ? 0 : (value >> shift);
    return std::max(shifted, floor_at);
}

// Everything plan_space and the constructor must agree on.
struct Layout {
    std::size_t depth = 0;
    double alpha = 1.0;
    double eps_freq = 0.0;
    double delta_level = 0.01;
    std::vector<CsConfig> sketches;
    bool has_nested = false;
    FkConfig nested_config;
    std::uint64_t nested_m_hint = 1;
    std::uint64_t nested_sizing = 1;
};

Layout make_layout(const FkConfig& config, std::uint64_t universe, std::uint64_t m_hint,
                   std::uint64_t sizing_universe) {
    config.validate();
    if (universe < 1) throw std::invalid_argument("RecursiveFk: universe must be >= 1");
    Layout lay;
    lay.depth = RecursiveFk::depth_for(config.nesting, sizing_universe);
    lay.eps_freq = config.epsilon / (2.0 * config.k);
    if (lay.depth > 0) {
        double phi = static_cast<double>(lay.depth);
        lay.alpha = std::min(1.0, config.alpha_scale * config.epsilon * config.epsilon /
                                      (phi * phi * phi));
        lay.delta_level = 1.0 / (100.0 * phi);
        lay.sketches.reserve(lay.depth);
        for (std::size_t j = 0; j < lay.depth; ++j) {
            lay.sketches.push_back(CsConfig::power_cover(
                universe, config.k, lay.alpha, lay.eps_freq, lay.delta_level,
                derive_seed(config.seed, SeedDomain::kLevelSketch, j),
                thinned(m_hint, j, 2), thinned(sizing_universe, j, 2), config.c_w,
                config.c_d));
        }
    }
    if (config.nesting >= 2 && lay.depth > 0) {
        lay.has_nested = true;
        lay.nested_config = config;
        lay.nested_config.nesting = config.nesting - 1;
        lay.nested_config.seed = derive_seed(config.seed, SeedDomain::kNestedBase, 0);
        lay.nested_m_hint = thinned(m_hint, lay.depth, 1);
        lay.nested_sizing = thinned(sizing_universe, lay.depth, 4);
    }
    return lay;
}

SpaceReport report_from(const Layout& lay, const FkConfig& config, std::uint64_t universe) {
    SpaceReport report;
    for (const CsConfig& cs : lay.sketches) {
        report.table_words += cs.table_words();
        report.tracker_words += cs.tracker_words();
        report.hash_words += cs.hash_words();
    }
    report.hash_words += 2 * static_cast<std::uint64_t>(lay.depth);  // chain (a, b) pairs
    if (lay.has_nested) {
        Layout inner =
            make_layout(lay.nested_config, universe, lay.nested_m_hint, lay.nested_sizing);
        report += report_from(inner, lay.nested_config, universe);
    } else {
        report.base_words += 2 * static_cast<std::uint64_t>(config.base_capacity);
    }
    return report;
}

LevelPlan fk_plan(double epsilon, std::uint64_t universe, const Layout& lay,
                  std::uint64_t seed) {
    double levels = static_cast<double>(lay.depth + 1);
    return LevelPlan{.depth = lay.depth,
                     .chain = HashChain(seed, lay.depth, universe),
                     .alpha = lay.alpha,
                     .epsilon_inner = epsilon / (30.0 * levels),
                     .delta_inner = lay.delta_level,
                     .gamma = epsilon,
                     .c_alpha = lay.alpha * levels * levels * levels / (epsilon * epsilon),
                     .c_delta = lay.delta_level * levels};
}

}  // namespace

void FkConfig::validate() const {
    if (!(k >= 2.0)) throw std::invalid_argument("FkConfig: k must be >= 2");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("FkConfig: epsilon must lie in (0, 1)");
    if (base_capacity < 1) throw std::invalid_argument("FkConfig: base_capacity must be >= 1");
    if (!(c_w > 0.0) || !(c_d > 0.0) || !(alpha_scale > 0.0))
        throw std::invalid_argument("FkConfig: constants must be positive");
}

SpaceReport& SpaceReport::operator+=(const SpaceReport& other) {
    table_words += other.table_words;
    tracker_words += other.tracker_words;
    base_words += other.base_words;
    hash_words += other.hash_words;
    return *this;
}

std::string SpaceReport::to_kv() const {
    std::ostringstream out;
    out << "tables=" << table_words << "\n"
        << "trackers=" << tracker_words << "\n"
        << "base=" << base_words << "\n"
        << "hashes=" << hash_words << "\n"
        << "total=" << total() << "\n";
    return out.str();
}

std::size_t RecursiveFk::depth_for(unsigned nesting, std::uint64_t universe_size) {
    std::size_t full = ceil_log2(universe_size);
    std::size_t depth = full;
    for (unsigned stage = 0; stage < nesting; ++stage) {
        if (depth <= 1) break;
        std::size_t reduced = static_cast<std::size_t>(
            std::floor(std::log2(static_cast<double>(depth))));
        depth = std::min(full, std::max<std::size_t>(2, reduced));
    }
    return depth;
}

RecursiveFk::RecursiveFk(const FkConfig& config, std::uint64_t universe_size,
                         std::uint64_t m_hint)
    : RecursiveFk(config, universe_size, std::max<std::uint64_t>(1, m_hint), universe_size) {}

RecursiveFk::RecursiveFk(const FkConfig& config, std::uint64_t universe_size,
                         std::uint64_t m_hint, std::uint64_t sizing_universe)
    : config_(config),
      universe_(universe_size),
      m_hint_(std::max<std::uint64_t>(1, m_hint)),
      sizing_universe_(sizing_universe),
      plan_([&] {
          Layout lay = make_layout(config, universe_size, std::max<std::uint64_t>(1, m_hint),
                                   sizing_universe);
          return fk_plan(config.epsilon, universe_size, lay, config.seed);
      }()) {
    Layout lay = make_layout(config_, universe_, m_hint_, sizing_universe_);
    alpha_ = lay.alpha;
    eps_freq_ = lay.eps_freq;
    delta_level_ = lay.delta_level;
    level_sketches_.reserve(lay.sketches.size());
    for (const CsConfig& cs : lay.sketches) level_sketches_.emplace_back(cs);
    if (lay.has_nested) {
        nested_.reset(new RecursiveFk(lay.nested_config, universe_, lay.nested_m_hint,
                                      lay.nested_sizing));
    }
}

void RecursiveFk::update(std::uint64_t i) {
    if (i < 1 || i > universe_)
        throw std::out_of_range("RecursiveFk::update: index outside [1, n]");
    ++total_updates_;
    std::size_t deepest = plan_.chain.deepest_level(i);
    for (std::size_t j = 0; j < plan_.depth && j <= deepest; ++j)
        level_sketches_[j].update(i, +1);
    if (deepest < plan_.depth) return;
    if (nested_) {
        nested_->update(i);
        return;
    }
    auto it = base_counts_.find(i);
    if (it != base_counts_.end()) {
        ++it->second;
    } else if (base_counts_.size() < config_.base_capacity) {
        base_counts_.emplace(i, 1);
    } else {
        base_overflowed_ = true;
    }
}

bool RecursiveFk::overflowed() const {
    if (base_overflowed_) return true;
    return nested_ && nested_->overflowed();
}

FkEstimate RecursiveFk::estimate() const {
    if (overflowed()) return FkEstimate{.value = 0.0, .overflowed = true};
    LevelOutputs outputs;
    outputs.covers.reserve(plan_.depth);
    for (const CountSketch& sketch : level_sketches_)
        outputs.covers.push_back(cover_powers(sketch.top(), config_.k, config_.epsilon));
    if (nested_) {
        FkEstimate inner = nested_->estimate();
        outputs.base = BaseEstimate{.value = inner.value, .exact = false};
    } else {
        double fk = 0.0;
        for (const auto& [i, count] : base_counts_)
            fk += std::pow(static_cast<double>(count), config_.k);
        outputs.base = BaseEstimate{.value = fk, .exact = true};
    }
    double y = y_backsolve(outputs, plan_.chain);
    return FkEstimate{.value = std::max(0.0, y), .overflowed = false};
}

SpaceReport RecursiveFk::space_report() const {
    SpaceReport report;
    for (const CountSketch& sketch : level_sketches_) {
        report.table_words += sketch.config().table_words();
        report.tracker_words += sketch.config().tracker_words();
        report.hash_words += sketch.config().hash_words();
    }
    report.hash_words += 2 * static_cast<std::uint64_t>(plan_.depth);
    if (nested_) {
        report += nested_->space_report();
    } else {
        report.base_words += 2 * static_cast<std::uint64_t>(config_.base_capacity);
    }
    return report;
}

SpaceReport RecursiveFk::plan_space(const FkConfig& config, std::uint64_t universe_size,
                                    std::uint64_t m_hint) {
    m_hint = std::max<std::uint64_t>(1, m_hint);
    Layout lay = make_layout(config, universe_size, m_hint, universe_size);
    return report_from(lay, config, universe_size);
}

bool RecursiveFk::same_layout(const RecursiveFk& other) const {
    return universe_ == other.universe_ && m_hint_ == other.m_hint_ &&
           config_.k == other.config_.k && config_.epsilon == other.config_.epsilon &&
           config_.nesting == other.config_.nesting && config_.seed == other.config_.seed &&
           config_.base_capacity == other.config_.base_capacity &&
           config_.c_w == other.config_.c_w && config_.c_d == other.config_.c_d &&
           config_.alpha_scale == other.config_.alpha_scale;
}

RecursiveFk merge(const RecursiveFk& a, const RecursiveFk& b) {
    if (!a.same_layout(b)) throw std::invalid_argument("merge(RecursiveFk): config mismatch");
    RecursiveFk out(a.config_, a.universe_, a.m_hint_, a.sizing_universe_);
    out.level_sketches_.clear();
    for (std::size_t j = 0; j < a.level_sketches_.size(); ++j)
        out.level_sketches_.push_back(merge(a.level_sketches_[j], b.level_sketches_[j]));
    out.base_counts_ = a.base_counts_;
    for (const auto& [i, count] : b.base_counts_) {
        auto it = out.base_counts_.find(i);
        if (it != out.base_counts_.end()) {
            it->second += count;
        } else if (out.base_counts_.size() < out.config_.base_capacity) {
            out.base_counts_.emplace(i, count);
        } else {
            out.base_overflowed_ = true;
        }
    }
    out.base_overflowed_ = out.base_overflowed_ || a.base_overflowed_ || b.base_overflowed_;
    if (a.nested_) *out.nested_ = merge(*a.nested_, *b.nested_);
    out.total_updates_ = a.total_updates_ + b.total_updates_;
    return out;
}

}  // namespace recsketch
