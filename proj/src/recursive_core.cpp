#include "recsketch/recursive_core.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace recsketch {

namespace {

std::size_t ceil_log2(std::uint64_t n) {
    if (n <= 1) return 0;
    return static_cast<std::size_t>(std::bit_width(n - 1));
}

LevelPlan build_plan(double gamma, std::uint64_t universe_size, std::size_t depth,
                     std::uint64_t seed, double c_alpha, double c_delta) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("LevelPlan: gamma must lie in (0, 1)");
    if (universe_size < 1) throw std::invalid_argument("LevelPlan: universe must be >= 1");
    if (!(c_alpha > 0.0) || !(c_delta > 0.0))
        throw std::invalid_argument("LevelPlan: constants must be positive");
    LevelPlan plan{.depth = depth,
                   .chain = HashChain(seed, depth, universe_size),
                   .alpha = 0.0,
                   .epsilon_inner = 0.0,
                   .delta_inner = 0.0,
                   .gamma = gamma,
                   .c_alpha = c_alpha,
                   .c_delta = c_delta};
    double levels = static_cast<double>(depth + 1);
    plan.alpha = c_alpha * gamma * gamma / (levels * levels * levels);
    plan.epsilon_inner = gamma / (30.0 * levels);
    plan.delta_inner = c_delta / levels;
    return plan;
}

}  // namespace

LevelPlan LevelPlan::for_l1(double gamma, std::uint64_t universe_size, std::uint64_t seed,
                            double c_alpha, double c_delta) {
    return build_plan(gamma, universe_size, ceil_log2(universe_size), seed, c_alpha, c_delta);
}

LevelPlan LevelPlan::with_depth(double gamma, std::uint64_t universe_size, std::size_t depth,
                                std::uint64_t seed, double c_alpha, double c_delta) {
    return build_plan(gamma, universe_size, depth, seed, c_alpha, c_delta);
}

std::vector<std::string> validate_plan(const LevelPlan& plan) {
    std::vector<std::string> issues;
    double levels = static_cast<double>(plan.depth + 1);
    auto close = [](double a, double b) {
        return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
    };
    if (!(plan.gamma > 0.0 && plan.gamma < 1.0))
        issues.push_back("gamma outside (0, 1)");
    double want_alpha = plan.c_alpha * plan.gamma * plan.gamma / (levels * levels * levels);
    if (!close(plan.alpha, want_alpha))
        issues.push_back("alpha != c_alpha * gamma^2 / (depth+1)^3");
    double want_eps = plan.gamma / (30.0 * levels);
    if (!close(plan.epsilon_inner, want_eps))
        issues.push_back("epsilon_inner != gamma / (30 * (depth+1))");
    if (plan.delta_inner > plan.c_delta / levels + 1e-15)
        issues.push_back("delta_inner > c_delta / (depth+1)");
    if (plan.chain.depth() != plan.depth)
        issues.push_back("chain depth does not match plan depth");
    return issues;
}

double x_statistic(std::span<const double> values, const IndexSet& core,
                   std::span<const std::uint8_t> sampled_bits) {
    if (values.size() != sampled_bits.size())
        throw std::invalid_argument("x_statistic: values and bits disagree on dimension");
    double kept = 0.0;
    double sampled = 0.0;
    for (std::size_t t = 0; t < values.size(); ++t) {
        std::uint64_t index = static_cast<std::uint64_t>(t) + 1;
        if (core.contains(index))
            kept += values[t];
        else if (sampled_bits[t])
            sampled += values[t];
    }
    return kept + 2.0 * sampled;
}

double y_backsolve(const LevelOutputs& outputs, std::size_t depth, const LevelBit& bit) {
    if (outputs.covers.size() != depth)
        throw std::invalid_argument("y_backsolve: expected one cover per level");
    double y = outputs.base.value;
    for (std::size_t j = depth; j-- > 0;) {
        double correction = 0.0;
        for (const auto& entry : outputs.covers[j].entries) {
            // h_i^{j+1}: the hash that split V_j into V_{j+1}.
            double h = bit(j + 1, entry.index) ? 1.0 : 0.0;
            correction += (1.0 - 2.0 * h) * entry.weight;
        }
        y = 2.0 * y + correction;
    }
    return y;
}

double y_backsolve(const LevelOutputs& outputs, const HashChain& chain) {
    return y_backsolve(outputs, chain.depth(), [&chain](std::size_t level, std::uint64_t index) {
        return chain.level(level).bit(index) == 1;
    });
}

void ExactL1Base::update(std::uint64_t index, std::int64_t count) {
    auto it = counts_.find(index);
    if (it == counts_.end()) {
        if (counts_.size() >= capacity_) {
            overflowed_ = true;
            return;
        }
        counts_.emplace(index, static_cast<double>(count));
    } else {
        it->second += static_cast<double>(count);
    }
}

BaseEstimate ExactL1Base::finalize() {
    double total = 0.0;
    for (const auto& [index, count] : counts_) total += count;
    return BaseEstimate{.value = total, .exact = !overflowed_};
}

L1Result estimate_l1(std::span<const std::uint64_t> stream, const LevelPlan& plan,
                     const OracleFactory& make_oracle, const BaseFactory& make_base) {
    std::vector<std::unique_ptr<CoverOracle>> oracles;
    oracles.reserve(plan.depth);
    for (std::size_t j = 0; j < plan.depth; ++j) oracles.push_back(make_oracle(j, plan));
    std::unique_ptr<BaseEstimator> base = make_base(plan);

    for (std::uint64_t item : stream) {
        std::size_t deepest = plan.chain.deepest_level(item);
        for (std::size_t j = 0; j < plan.depth && j <= deepest; ++j)
            oracles[j]->update(item, +1);
        if (deepest == plan.depth) base->update(item, +1);
    }

    LevelOutputs outputs;
    outputs.covers.reserve(plan.depth);
    for (auto& oracle : oracles) outputs.covers.push_back(oracle->finalize());
    outputs.base = base->finalize();

    if (base->overflowed()) return L1Result{.value = 0.0, .overflowed = true};
    return L1Result{.value = y_backsolve(outputs, plan.chain), .overflowed = false};
}

}  // namespace recsketch
