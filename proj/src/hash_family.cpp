#include "recsketch/hash_family.hpp"

#include <stdexcept>
#include <string>

namespace recsketch {

namespace {

std::uint64_t draw_below_prime(std::mt19937_64& rng, std::uint64_t prime) {
    // Mask to 61 bits and reject >= p; rejection probability is 2^-61.
    for (;;) {
        std::uint64_t x = rng() & kMersenne61;
        if (x < prime) return x;
    }
}

}  // namespace

PairwiseBitHash::PairwiseBitHash(std::uint64_t coeff_a, std::uint64_t coeff_b,
                                 std::uint64_t prime_modulus, std::uint64_t universe_size)
    : coeff_a_(coeff_a), coeff_b_(coeff_b), prime_(prime_modulus), universe_(universe_size) {
    if (prime_ < 2) throw std::invalid_argument("PairwiseBitHash: prime must be >= 2");
    if (prime_ % 2 == 0) throw std::invalid_argument("PairwiseBitHash: prime must be odd");
    if (universe_ < 1) throw std::invalid_argument("PairwiseBitHash: universe must be >= 1");
    if (prime_ <= universe_)
        throw std::invalid_argument("PairwiseBitHash: prime must exceed universe size");
    if (coeff_a_ >= prime_ || coeff_b_ >= prime_)
        throw std::invalid_argument("PairwiseBitHash: coefficients must lie in [0, prime)");
}

int PairwiseBitHash::bit(std::uint64_t i) const {
    if (i < 1 || i > universe_)
        throw std::out_of_range("PairwiseBitHash::bit: index " + std::to_string(i) +
                                " outside [1, " + std::to_string(universe_) + "]");
    std::uint64_t v;
    if (prime_ == kMersenne61) {
        v = add_mod61(mul_mod61(coeff_a_, i), coeff_b_);
    } else {
        // Small custom primes are allowed so tests can pin exact values.
        unsigned __int128 acc = static_cast<unsigned __int128>(coeff_a_) * i + coeff_b_;
        v = static_cast<std::uint64_t>(acc % prime_);
    }
    return static_cast<int>(v & 1);
}

PairwiseBitHash make_pairwise(std::uint64_t seed, std::uint64_t universe_size) {
    std::mt19937_64 rng(seed);
    std::uint64_t a = draw_below_prime(rng, kMersenne61);
    std::uint64_t b = draw_below_prime(rng, kMersenne61);
    return PairwiseBitHash(a, b, kMersenne61, universe_size);
}

FourwiseHash::FourwiseHash(const std::uint64_t coeffs[4], std::uint64_t range)
    : range_(range) {
    if (range_ < 1) throw std::invalid_argument("FourwiseHash: range must be >= 1");
    for (int i = 0; i < 4; ++i) {
        if (coeffs[i] >= kMersenne61)
            throw std::invalid_argument("FourwiseHash: coefficients must lie in [0, prime)");
        coeffs_[i] = coeffs[i];
    }
}

FourwiseHash FourwiseHash::from_seed(std::uint64_t seed, std::uint64_t range) {
    std::mt19937_64 rng(seed);
    std::uint64_t c[4];
    for (auto& ci : c) ci = draw_below_prime(rng, kMersenne61);
    return FourwiseHash(c, range);
}

HashChain::HashChain(std::uint64_t seed, std::size_t depth, std::uint64_t universe_size)
    : universe_(universe_size), seed_(seed) {
    levels_.reserve(depth);
    for (std::size_t j = 1; j <= depth; ++j)
        levels_.push_back(make_pairwise(derive_seed(seed, SeedDomain::kLevelHash, j), universe_size));
}

const PairwiseBitHash& HashChain::level(std::size_t j) const {
    if (j < 1 || j > levels_.size())
        throw std::out_of_range("HashChain::level: level " + std::to_string(j) +
                                " outside [1, " + std::to_string(levels_.size()) + "]");
    return levels_[j - 1];
}

bool HashChain::level_member(std::size_t j, std::uint64_t i) const {
    if (j > levels_.size())
        throw std::out_of_range("HashChain::level_member: level " + std::to_string(j) +
                                " exceeds depth " + std::to_string(levels_.size()));
    for (std::size_t t = 0; t < j; ++t)
        if (levels_[t].bit(i) == 0) return false;
    return true;
}

std::size_t HashChain::deepest_level(std::uint64_t i) const {
    std::size_t j = 0;
    while (j < levels_.size() && levels_[j].bit(i) == 1) ++j;
    return j;
}

bool HashChain::same_layout(const HashChain& other) const {
    if (universe_ != other.universe_ || seed_ != other.seed_ ||
        levels_.size() != other.levels_.size())
        return false;
    for (std::size_t t = 0; t < levels_.size(); ++t) {
        if (levels_[t].coeff_a() != other.levels_[t].coeff_a() ||
            levels_[t].coeff_b() != other.levels_[t].coeff_b())
            return false;
    }
    return true;
}

}  // namespace recsketch
