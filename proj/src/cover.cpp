#include "recsketch/cover.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace recsketch {

Cover Cover::from_unsorted(std::vector<std::pair<std::uint64_t, double>> pairs) {
    std::sort(pairs.begin(), pairs.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    Cover q;
    q.entries.reserve(pairs.size());
    for (const auto& [i, w] : pairs) {
        if (!q.entries.empty() && q.entries.back().index == i)
            throw std::invalid_argument("Cover: duplicate index");
        if (w < 0.0) throw std::invalid_argument("Cover: negative weight");
        q.entries.push_back({i, w});
    }
    return q;
}

bool Cover::well_formed() const {
    for (std::size_t t = 0; t < entries.size(); ++t) {
        if (entries[t].weight < 0.0) return false;
        if (t > 0 && entries[t].index <= entries[t - 1].index) return false;
    }
    return true;
}

bool Cover::contains(std::uint64_t index) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), index,
                               [](const CoverEntry& e, std::uint64_t i) { return e.index < i; });
    return it != entries.end() && it->index == index;
}

double Cover::weight_of(std::uint64_t index) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), index,
                               [](const CoverEntry& e, std::uint64_t i) { return e.index < i; });
    return (it != entries.end() && it->index == index) ? it->weight : 0.0;
}

Cover cover_powers(const Cover& q, double k, double epsilon) {
    if (!(k >= 1.0)) throw std::invalid_argument("cover_powers: k must be >= 1");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("cover_powers: epsilon must lie in (0, 1)");
    Cover out;
    out.entries.reserve(q.entries.size());
    for (const auto& e : q.entries) {
        if (e.weight < 0.0) throw std::invalid_argument("cover_powers: negative weight");
        out.entries.push_back({e.index, std::pow(e.weight, k)});
    }
    return out;
}

}  // namespace recsketch
