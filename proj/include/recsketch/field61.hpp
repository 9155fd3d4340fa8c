#pragma once

#include <cstdint>
#include <random>

// Arithmetic over the Mersenne prime field GF(2^61 - 1) plus the
// counter-based seed derivation used everywhere in the library.
//
// One fixed prime covers every universe the library accepts (n < 2^61 - 1,
// designed for n <= 2^32), so no per-universe prime search is needed and
// reduction is two shift-adds instead of a division.

namespace recsketch {

inline constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;

// Reduces x < 2^62 into [0, p).
constexpr std::uint64_t mod61(std::uint64_t x) {
    std::uint64_t r = (x & kMersenne61) + (x >> 61);
    return r >= kMersenne61 ? r - kMersenne61 : r;
}

constexpr std::uint64_t add_mod61(std::uint64_t a, std::uint64_t b) {
    return mod61(a + b);  // a, b < p, sum < 2^62
}

// (a * b) mod p for a, b < p via one 128-bit product.
inline std::uint64_t mul_mod61(std::uint64_t a, std::uint64_t b) {
    unsigned __int128 prod = static_cast<unsigned __int128>(a) * b;
    std::uint64_t lo = static_cast<std::uint64_t>(prod & kMersenne61);
    std::uint64_t hi = static_cast<std::uint64_t>(prod >> 61);
    return mod61(lo + mod61(hi));
}

// splitmix64 finalizer; full-period bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Seed namespaces. A single root seed expands into per-component seeds via
// derive_seed(root, domain, index); shards that must agree on hash choices
// share the root and therefore every derived seed.
enum class SeedDomain : std::uint64_t {
    kLevelHash = 1,    // index = chain level (1-based)
    kBucketHash = 2,   // index = sketch row
    kSignHash = 3,     // index = sketch row
    kLevelSketch = 4,  // index = level (0-based)
    kRun = 5,          // index = run number inside estimate
    kNestedBase = 6,   // nested recursive state
    kGenerator = 7,    // synthetic stream generation
};

constexpr std::uint64_t derive_seed(std::uint64_t root, SeedDomain domain,
                                    std::uint64_t index) {
    std::uint64_t z = root + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(domain) + 1) +
                      0xbf58476d1ce4e5b9ULL * (index + 1);
    return mix64(mix64(z));
}

// Uniform draw in [0, bound) by mask-and-reject; avoids
// std::uniform_int_distribution, whose output is implementation-defined.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    if (bound <= 1) return 0;
    int bits = 64 - __builtin_clzll(bound - 1);
    std::uint64_t mask = (bits >= 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << bits) - 1);
    for (;;) {
        std::uint64_t x = rng() & mask;
        if (x < bound) return x;
    }
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace recsketch
