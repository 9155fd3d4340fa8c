#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace recsketch {

// Text stream format: optional first line "# n=<int> m=<int>", then one
// decimal item per line, each in [1, n]. A declared m must match the body
// length. Without a header, n is the largest item seen.
struct StreamData {
    std::uint64_t universe_size = 0;   // n
    std::vector<std::uint64_t> items;  // length m

    std::uint64_t length() const { return items.size(); }
};

StreamData read_stream(std::istream& in);
StreamData read_stream_file(const std::string& path);
void write_stream(std::ostream& out, const StreamData& stream);
void write_stream_file(const std::string& path, const StreamData& stream);

enum class StreamDist {
    kUniform,
    kZipf,         // P(item = r) proportional to r^-s
    kSingleHeavy,  // item 1 carries round(ratio * m), the rest is uniform
};

struct GenSpec {
    StreamDist dist = StreamDist::kZipf;
    double zipf_exponent = 1.2;
    double heavy_ratio = 0.5;
    std::uint64_t universe_size = 1;
    std::uint64_t length = 1;
    std::uint64_t seed = 0;
};

// Deterministic function of the spec (including the seed).
StreamData generate_stream(const GenSpec& spec);

}  // namespace recsketch
