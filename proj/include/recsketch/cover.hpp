#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace recsketch {

struct CoverEntry {
    std::uint64_t index;  // 1-based item index
    double weight;        // non-negative approximate mass
};

// A set of (index, weight) pairs, strictly increasing by index. This is
// what heavy-hitter oracles hand to the recursive estimator: ideally the
// entries list every alpha-major index with (1 +/- eps)-accurate weight.
struct Cover {
    std::vector<CoverEntry> entries;

    static Cover from_unsorted(std::vector<std::pair<std::uint64_t, double>> pairs);

    bool well_formed() const;
    bool contains(std::uint64_t index) const;
    // 0 for indices not listed.
    double weight_of(std::uint64_t index) const;
    std::size_t size() const { return entries.size(); }
    bool empty() const { return entries.empty(); }
};

// Lifts a cover of a frequency vector to a cover of its k-th power vector:
// each (i, w) becomes (i, w^k). If the input weights are (1 +/- eps')
// accurate with eps' <= epsilon/(2k), the outputs are (1 +/- epsilon)
// accurate for f_i^k. Throws on negative input weight.
Cover cover_powers(const Cover& q, double k, double epsilon);

}  // namespace recsketch
