#include "recsketch/stream_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "recsketch/field61.hpp"

namespace recsketch {

namespace {

bool parse_u64(const std::string& text, std::uint64_t& out) {
    if (text.empty()) return false;
    std::uint64_t value = 0;
    for (char c : text) {
        if (c < '0' || c > '9') return false;
        if (value > (~std::uint64_t{0} - (c - '0')) / 10) return false;
        value = value * 10 + static_cast<std::uint64_t>(c - '0');
    }
    out = value;
    return true;
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

StreamData read_stream(std::istream& in) {
    StreamData stream;
    std::string line;
    bool have_header = false;
    std::uint64_t declared_m = 0;
    bool first = true;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);
        if (line.empty()) continue;
        if (first && line[0] == '#') {
            first = false;
            std::istringstream hs(line.substr(1));
            std::string token;
            while (hs >> token) {
                if (token.rfind("n=", 0) == 0) {
                    if (!parse_u64(token.substr(2), stream.universe_size))
                        throw std::runtime_error("stream header: bad n");
                    have_header = true;
                } else if (token.rfind("m=", 0) == 0) {
                    if (!parse_u64(token.substr(2), declared_m))
                        throw std::runtime_error("stream header: bad m");
                }
            }
            continue;
        }
        first = false;
        std::uint64_t item = 0;
        if (!parse_u64(line, item) || item == 0)
            throw std::runtime_error("stream line " + std::to_string(line_no) +
                                     ": expected a positive integer, got \"" + line + "\"");
        stream.items.push_back(item);
    }
    std::uint64_t max_item = 0;
    for (std::uint64_t item : stream.items) max_item = std::max(max_item, item);
    if (!have_header) {
        stream.universe_size = std::max<std::uint64_t>(1, max_item);
    } else {
        if (max_item > stream.universe_size)
            throw std::runtime_error("stream: item " + std::to_string(max_item) +
                                     " exceeds declared n=" + std::to_string(stream.universe_size));
        if (declared_m != 0 && declared_m != stream.items.size())
            throw std::runtime_error("stream: declared m=" + std::to_string(declared_m) +
                                     " but body has " + std::to_string(stream.items.size()) +
                                     " items");
    }
    return stream;
}

StreamData read_stream_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open stream file: " + path);
    return read_stream(in);
}

void write_stream(std::ostream& out, const StreamData& stream) {
    out << "# n=" << stream.universe_size << " m=" << stream.items.size() << "\n";
    for (std::uint64_t item : stream.items) out << item << "\n";
}

void write_stream_file(const std::string& path, const StreamData& stream) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    write_stream(out, stream);
    if (!out) throw std::runtime_error("failed writing stream file: " + path);
}

StreamData generate_stream(const GenSpec& spec) {
    if (spec.universe_size < 1 || spec.length < 1)
        throw std::invalid_argument("generate_stream: n and m must be >= 1");
    StreamData stream;
    stream.universe_size = spec.universe_size;
    stream.items.reserve(spec.length);
    std::mt19937_64 rng(derive_seed(spec.seed, SeedDomain::kGenerator, 0));

    switch (spec.dist) {
        case StreamDist::kUniform: {
            for (std::uint64_t t = 0; t < spec.length; ++t)
                stream.items.push_back(1 + uniform_below(rng, spec.universe_size));
            break;
        }
        case StreamDist::kZipf: {
            if (!(spec.zipf_exponent > 0.0))
                throw std::invalid_argument("generate_stream: zipf exponent must be > 0");
            std::vector<double> cdf(spec.universe_size);
            double acc = 0.0;
            for (std::uint64_t r = 1; r <= spec.universe_size; ++r) {
                acc += std::pow(static_cast<double>(r), -spec.zipf_exponent);
                cdf[r - 1] = acc;
            }
            for (std::uint64_t t = 0; t < spec.length; ++t) {
                double u = uniform_unit(rng) * acc;
                auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
                std::uint64_t rank = static_cast<std::uint64_t>(it - cdf.begin()) + 1;
                stream.items.push_back(std::min(rank, spec.universe_size));
            }
            break;
        }
        case StreamDist::kSingleHeavy: {
            if (!(spec.heavy_ratio > 0.0 && spec.heavy_ratio <= 1.0))
                throw std::invalid_argument("generate_stream: heavy ratio must lie in (0, 1]");
            std::uint64_t heavy = std::max<std::uint64_t>(
                1, static_cast<std::uint64_t>(
                       std::llround(spec.heavy_ratio * static_cast<double>(spec.length))));
            heavy = std::min(heavy, spec.length);
            for (std::uint64_t t = 0; t < heavy; ++t) stream.items.push_back(1);
            for (std::uint64_t t = heavy; t < spec.length; ++t) {
                if (spec.universe_size == 1)
                    stream.items.push_back(1);
                else
                    stream.items.push_back(2 + uniform_below(rng, spec.universe_size - 1));
            }
            // Deterministic Fisher-Yates so the heavy item is interleaved.
            for (std::uint64_t t = spec.length; t > 1; --t) {
                std::uint64_t r = uniform_below(rng, t);
                std::swap(stream.items[t - 1], stream.items[r]);
            }
            break;
        }
    }
    return stream;
}

}  // namespace recsketch
