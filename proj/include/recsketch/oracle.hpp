#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "recsketch/cover.hpp"
#include "recsketch/recursive_core.hpp"

// Ground truth for tests and experiments: exact frequency tables, exact
// moments, exact major sets and an idealized (0-good) heavy-hitter oracle.
// Everything here uses O(n) space on purpose.

namespace recsketch {

class FrequencyVector {
  public:
    explicit FrequencyVector(std::uint64_t universe_size);

    static FrequencyVector from_stream(std::span<const std::uint64_t> stream,
                                       std::uint64_t universe_size);

    // Adds delta to entry i; the resulting entry must stay non-negative.
    void add(std::uint64_t i, double delta = 1.0);

    double count(std::uint64_t i) const;
    double mass() const { return mass_; }  // |V|, the L1 norm
    std::uint64_t universe_size() const { return n_; }
    std::size_t support_size() const { return counts_.size(); }
    const std::map<std::uint64_t, double>& counts() const { return counts_; }

    // Entry-wise k-th power vector (f_i^k).
    FrequencyVector powers(double k) const;

  private:
    std::map<std::uint64_t, double> counts_;
    std::uint64_t n_;
    double mass_ = 0.0;
};

// Sum of f_i^k with 0^k = 0; k >= 0.
double exact_fk(const FrequencyVector& fv, double k);

// Indices with f_i >= alpha * |V| (inclusive), ascending. 0 < alpha <= 1.
std::vector<std::uint64_t> exact_major(const FrequencyVector& fv, double alpha);

// Both cover clauses: listed weights within (1 +/- epsilon) of the true
// entries, and every alpha-major index listed.
bool is_cover(const Cover& q, const FrequencyVector& fv, double alpha, double epsilon);

// The Hoelder bridge from F_k-heaviness to L2-heaviness: requires
// f_i^k >= alpha * F_k and reports whether
// f_i^2 >= 0.5 * alpha^{2/k} * n0^{2/k - 1} * sum_{j != i} f_j^2.
bool fact51_check(const FrequencyVector& fv, std::uint64_t i, double alpha, double k);

// Exactly the alpha-major indices with exact weights: a 0-good cover.
Cover exact_cover(const FrequencyVector& fv, double alpha);

// Streaming plug-ins for the recursive driver.
class ExactCoverOracle : public CoverOracle {
  public:
    ExactCoverOracle(std::uint64_t universe_size, double alpha);
    void update(std::uint64_t index, std::int64_t count) override;
    Cover finalize() override;

  private:
    FrequencyVector fv_;
    double alpha_;
};

// Covers of the implicit power vector (f_i^k): exact weights f_i^k for all
// indices that are alpha-major with respect to (f_i^k).
class ExactPowerCoverOracle : public CoverOracle {
  public:
    ExactPowerCoverOracle(std::uint64_t universe_size, double alpha, double k);
    void update(std::uint64_t index, std::int64_t count) override;
    Cover finalize() override;

  private:
    FrequencyVector fv_;
    double alpha_;
    double k_;
};

}  // namespace recsketch
