#include "recsketch/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace recsketch {

FrequencyVector::FrequencyVector(std::uint64_t universe_size) : n_(universe_size) {
    if (n_ < 1) throw std::invalid_argument("FrequencyVector: universe must be >= 1");
}

FrequencyVector FrequencyVector::from_stream(std::span<const std::uint64_t> stream,
                                             std::uint64_t universe_size) {
    FrequencyVector fv(universe_size);
    for (std::uint64_t item : stream) fv.add(item);
    return fv;
}

void FrequencyVector::add(std::uint64_t i, double delta) {
    if (i < 1 || i > n_)
        throw std::out_of_range("FrequencyVector::add: index " + std::to_string(i) +
                                " outside [1, " + std::to_string(n_) + "]");
    auto [it, inserted] = counts_.try_emplace(i, 0.0);
    double next = it->second + delta;
    if (next < 0.0)
        throw std::invalid_argument("FrequencyVector::add: entry would become negative");
    mass_ += delta;
    if (next == 0.0)
        counts_.erase(it);
    else
        it->second = next;
}

double FrequencyVector::count(std::uint64_t i) const {
    auto it = counts_.find(i);
    return it == counts_.end() ? 0.0 : it->second;
}

FrequencyVector FrequencyVector::powers(double k) const {
    FrequencyVector out(n_);
    for (const auto& [i, f] : counts_) out.add(i, std::pow(f, k));
    return out;
}

double exact_fk(const FrequencyVector& fv, double k) {
    if (k < 0.0) throw std::invalid_argument("exact_fk: k must be >= 0");
    double total = 0.0;
    for (const auto& [i, f] : fv.counts())
        if (f > 0.0) total += std::pow(f, k);
    return total;
}

std::vector<std::uint64_t> exact_major(const FrequencyVector& fv, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("exact_major: alpha must lie in (0, 1]");
    std::vector<std::uint64_t> majors;
    double threshold = alpha * fv.mass();
    for (const auto& [i, f] : fv.counts())
        if (f >= threshold) majors.push_back(i);
    return majors;
}

bool is_cover(const Cover& q, const FrequencyVector& fv, double alpha, double epsilon) {
    for (const auto& e : q.entries) {
        double f = fv.count(e.index);
        if (e.weight < (1.0 - epsilon) * f || e.weight > (1.0 + epsilon) * f) return false;
    }
    for (std::uint64_t i : exact_major(fv, alpha))
        if (!q.contains(i)) return false;
    return true;
}

bool fact51_check(const FrequencyVector& fv, std::uint64_t i, double alpha, double k) {
    double fi = fv.count(i);
    double fk = exact_fk(fv, k);
    if (std::pow(fi, k) < alpha * fk)
        throw std::invalid_argument("fact51_check: index is not alpha-heavy in the power vector");
    double n0 = static_cast<double>(fv.support_size());
    double rest = 0.0;
    for (const auto& [j, f] : fv.counts())
        if (j != i) rest += f * f;
    double bound = 0.5 * std::pow(alpha, 2.0 / k) * std::pow(n0, 2.0 / k - 1.0) * rest;
    return fi * fi >= bound * (1.0 - 1e-12);
}

Cover exact_cover(const FrequencyVector& fv, double alpha) {
    std::vector<std::pair<std::uint64_t, double>> pairs;
    for (std::uint64_t i : exact_major(fv, alpha)) pairs.emplace_back(i, fv.count(i));
    return Cover::from_unsorted(std::move(pairs));
}

ExactCoverOracle::ExactCoverOracle(std::uint64_t universe_size, double alpha)
    : fv_(universe_size), alpha_(alpha) {}

void ExactCoverOracle::update(std::uint64_t index, std::int64_t count) {
    fv_.add(index, static_cast<double>(count));
}

Cover ExactCoverOracle::finalize() { return exact_cover(fv_, alpha_); }

ExactPowerCoverOracle::ExactPowerCoverOracle(std::uint64_t universe_size, double alpha, double k)
    : fv_(universe_size), alpha_(alpha), k_(k) {}

void ExactPowerCoverOracle::update(std::uint64_t index, std::int64_t count) {
    fv_.add(index, static_cast<double>(count));
}

Cover ExactPowerCoverOracle::finalize() { return exact_cover(fv_.powers(k_), alpha_); }

}  // namespace recsketch
