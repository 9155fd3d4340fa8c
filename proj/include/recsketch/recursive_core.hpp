#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "recsketch/cover.hpp"
#include "recsketch/hash_family.hpp"

// Recursive estimation of |V| (the L1 mass) of an implicit non-negative
// vector that is only reachable through a heavy-hitter oracle.
//
// The stream is split into nested substreams D_0 = D, D_j = elements whose
// first j chain bits are all 1, so V_j is the Hadamard product of V with
// H_1..H_j and E|V_j| = 2^-j |V|. Each level's oracle returns a cover Q_j
// of V_j; the deepest level is summed exactly. Estimates then unwind as
//
//   Y_phi = base,   Y_j = 2 Y_{j+1} + sum_{i in Ind(Q_j)} (1 - 2 h_i^{j+1}) w_{Q_j}(i)
//
// which telescopes to |V| exactly whenever covers carry the full surviving
// support with exact weights, and to (1 +/- gamma)|V| with constant
// probability under the plan's alpha/epsilon/delta scaling.

namespace recsketch {

struct BaseEstimate {
    double value = 0.0;
    bool exact = false;
};

struct LevelOutputs {
    std::vector<Cover> covers;  // Q_0 .. Q_{depth-1}
    BaseEstimate base;          // level-depth estimate
};

// Per-level parameter schedule. alpha shrinks as gamma^2 / (depth+1)^3 so
// that the per-level Chebyshev failure terms stay summable across levels,
// epsilon_inner is the per-level accuracy budget and delta_inner the
// per-level oracle failure budget.
struct LevelPlan {
    std::size_t depth = 0;
    HashChain chain;
    double alpha = 0.0;
    double epsilon_inner = 0.0;
    double delta_inner = 0.0;
    double gamma = 0.0;
    double c_alpha = 0.01;
    double c_delta = 0.01;

    // Generic driver plan: depth = ceil(log2 n).
    static LevelPlan for_l1(double gamma, std::uint64_t universe_size, std::uint64_t seed,
                            double c_alpha = 0.01, double c_delta = 0.01);
    // Same schedule at an explicit depth.
    static LevelPlan with_depth(double gamma, std::uint64_t universe_size, std::size_t depth,
                                std::uint64_t seed, double c_alpha = 0.01, double c_delta = 0.01);
};

// Diagnostics naming every scaling relation the plan violates; empty for
// plans built by the constructors above. Never mutates.
std::vector<std::string> validate_plan(const LevelPlan& plan);

using IndexSet = std::unordered_set<std::uint64_t>;

// X = sum_{i in core} v_i + 2 sum_{i not in core} h_i v_i for an explicit
// vector. values[t] and sampled_bits[t] belong to index t+1; core holds
// 1-based indices. E_h[X] = |V| and Var_h(X) = sum_{i not in core} v_i^2.
double x_statistic(std::span<const double> values, const IndexSet& core,
                   std::span<const std::uint8_t> sampled_bits);

// Bit accessor abstraction so tests can enumerate explicit hash outcomes;
// level is 1-based.
using LevelBit = std::function<bool(std::size_t level, std::uint64_t index)>;

// Unwinds level outputs into Y_0. covers.size() must equal depth.
double y_backsolve(const LevelOutputs& outputs, std::size_t depth, const LevelBit& bit);
double y_backsolve(const LevelOutputs& outputs, const HashChain& chain);

// Streaming consumer contracts. A cover oracle ingests one level's
// substream and emits a cover of that level's implicit vector; a base
// estimator ingests the deepest substream and emits its mass.
class CoverOracle {
  public:
    virtual ~CoverOracle() = default;
    virtual void update(std::uint64_t index, std::int64_t count) = 0;
    virtual Cover finalize() = 0;
};

class BaseEstimator {
  public:
    virtual ~BaseEstimator() = default;
    virtual void update(std::uint64_t index, std::int64_t count) = 0;
    virtual BaseEstimate finalize() = 0;
    virtual bool overflowed() const { return false; }
};

// Exact L1 base: per-index counts with a distinct-key capacity. Exceeding
// capacity sets a sticky overflow flag instead of silently truncating.
class ExactL1Base : public BaseEstimator {
  public:
    explicit ExactL1Base(std::size_t capacity) : capacity_(capacity) {}

    void update(std::uint64_t index, std::int64_t count) override;
    BaseEstimate finalize() override;
    bool overflowed() const override { return overflowed_; }
    std::size_t distinct() const { return counts_.size(); }

  private:
    std::map<std::uint64_t, double> counts_;
    std::size_t capacity_;
    bool overflowed_ = false;
};

struct L1Result {
    double value = 0.0;
    bool overflowed = false;  // base capacity exceeded; value forced to 0
};

using OracleFactory =
    std::function<std::unique_ptr<CoverOracle>(std::size_t level, const LevelPlan& plan)>;
using BaseFactory = std::function<std::unique_ptr<BaseEstimator>(const LevelPlan& plan)>;

// Runs the depth+1 level consumers over the stream (each element feeds
// levels 0..deepest) and back-solves. Items are counting updates (+1 per
// occurrence). Requires a separable implicit vector, which frequency
// vectors and their powers are.
L1Result estimate_l1(std::span<const std::uint64_t> stream, const LevelPlan& plan,
                     const OracleFactory& make_oracle, const BaseFactory& make_base);

}  // namespace recsketch
