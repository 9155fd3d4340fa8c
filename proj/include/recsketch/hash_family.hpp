#pragma once

#include <cstdint>
#include <vector>

#include "recsketch/field61.hpp"

namespace recsketch {

// Pairwise-independent zero-one hash over indices 1..n:
//   bit(i) = ((a*i + b) mod p) mod 2
// For i != j the pair (a*i+b, a*j+b) is uniform over GF(p)^2, so the bit
// pair is uniform on {0,1}^2 up to O(1/p) bias; with p = 2^61-1 that bias
// is far below anything observable at desk scale.
class PairwiseBitHash {
  public:
    PairwiseBitHash(std::uint64_t coeff_a, std::uint64_t coeff_b,
                    std::uint64_t prime_modulus, std::uint64_t universe_size);

    // 1 <= i <= n; throws std::out_of_range otherwise.
    int bit(std::uint64_t i) const;

    std::uint64_t coeff_a() const { return coeff_a_; }
    std::uint64_t coeff_b() const { return coeff_b_; }
    std::uint64_t prime_modulus() const { return prime_; }
    std::uint64_t universe_size() const { return universe_; }

  private:
    std::uint64_t coeff_a_;
    std::uint64_t coeff_b_;
    std::uint64_t prime_;
    std::uint64_t universe_;
};

// Fresh pairwise hash over [1, n]; deterministic function of the seed.
PairwiseBitHash make_pairwise(std::uint64_t seed, std::uint64_t universe_size);

// 4-wise independent hash: degree-3 polynomial over GF(2^61-1) reduced to
// [0, range). range = 2 gives the sign hash, range = w the bucket hash.
class FourwiseHash {
  public:
    FourwiseHash(const std::uint64_t coeffs[4], std::uint64_t range);

    static FourwiseHash from_seed(std::uint64_t seed, std::uint64_t range);

    std::uint64_t eval(std::uint64_t x) const {
        std::uint64_t acc = coeffs_[3];
        std::uint64_t xm = x >= kMersenne61 ? mod61(x) : x;
        acc = add_mod61(mul_mod61(acc, xm), coeffs_[2]);
        acc = add_mod61(mul_mod61(acc, xm), coeffs_[1]);
        acc = add_mod61(mul_mod61(acc, xm), coeffs_[0]);
        return acc % range_;
    }

    // +1 / -1; meaningful when range == 2.
    int sign(std::uint64_t x) const { return eval(x) ? +1 : -1; }

    std::uint64_t range() const { return range_; }
    std::uint64_t coeff(int i) const { return coeffs_[i]; }

  private:
    std::uint64_t coeffs_[4];
    std::uint64_t range_;
};

// The substream chain H_1..H_phi. An index belongs to level j when its bit
// is 1 under every one of the first j hashes, so level 0 is the whole
// stream and expected survivorship halves per level. Levels are seeded
// independently (derive_seed with the level number), so there is no
// cross-level correlation by construction.
class HashChain {
  public:
    HashChain(std::uint64_t seed, std::size_t depth, std::uint64_t universe_size);

    std::size_t depth() const { return levels_.size(); }
    std::uint64_t universe_size() const { return universe_; }
    std::uint64_t seed() const { return seed_; }

    // Hash for level j, 1-based, j in [1, depth].
    const PairwiseBitHash& level(std::size_t j) const;

    // True iff i survives to level j (all of H_1..H_j set); j = 0 always
    // holds. Throws std::out_of_range for j > depth.
    bool level_member(std::size_t j, std::uint64_t i) const;

    // Deepest level i survives to, in [0, depth]; used by ingestion so
    // each element costs O(expected 2) bit evaluations.
    std::size_t deepest_level(std::uint64_t i) const;

    bool same_layout(const HashChain& other) const;

  private:
    std::vector<PairwiseBitHash> levels_;
    std::uint64_t universe_;
    std::uint64_t seed_;
};

}  // namespace recsketch
