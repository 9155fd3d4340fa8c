#include <stdexcept>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "recsketch/experiment.hpp"
#include "recsketch/oracle.hpp"
#include "recsketch/parallel.hpp"
#include "recsketch/stream_io.hpp"

using namespace recsketch;

namespace {

StreamData make_stream(std::uint64_t seed) {
    GenSpec spec;
    spec.dist = StreamDist::kZipf;
    spec.zipf_exponent = 1.1;
    spec.universe_size = 700;
    spec.length = 6000;
    spec.seed = seed;
    return generate_stream(spec);
}

}  // namespace

TEST_CASE("sharded count-sketch ingestion matches the serial reference bit for bit") {
    StreamData data = make_stream(1);
    CsConfig cfg = CsConfig::top_k(8, 0.25, 0.05, data.universe_size, 5, data.items.size());
    CountSketch serial = sketch_stream_serial(cfg, data.items);
    for (int threads : {1, 2, 3, 7}) {
        CountSketch parallel = sketch_stream_parallel(cfg, data.items, threads);
        auto st = serial.table();
        auto pt = parallel.table();
        CHECK(std::equal(st.begin(), st.end(), pt.begin()));
        CHECK(parallel.total_updates() == serial.total_updates());
    }
}

TEST_CASE("sharded recursive ingestion matches the serial reference bit for bit") {
    StreamData data = make_stream(2);
    FkConfig cfg;
    cfg.seed = 44;
    RecursiveFk serial = ingest_serial(cfg, data.universe_size, data.items.size(), data.items);
    for (int threads : {1, 2, 4}) {
        RecursiveFk parallel =
            ingest_parallel(cfg, data.universe_size, data.items.size(), data.items, threads);
        REQUIRE(parallel.level_sketches().size() == serial.level_sketches().size());
        for (std::size_t j = 0; j < serial.level_sketches().size(); ++j) {
            auto st = serial.level_sketches()[j].table();
            auto pt = parallel.level_sketches()[j].table();
            CHECK(std::equal(st.begin(), st.end(), pt.begin()));
        }
        CHECK(parallel.base_counts() == serial.base_counts());
        CHECK(parallel.overflowed() == serial.overflowed());
        CHECK(parallel.estimate().value == serial.estimate().value);
    }
}

TEST_CASE("trial rows are deterministic and ordered") {
    StreamData data = make_stream(3);
    double exact = exact_fk(FrequencyVector::from_stream(data.items, data.universe_size), 3.0);
    FkConfig cfg;
    cfg.seed = 900;
    auto rows1 = run_fk_trials(data.items, data.universe_size, cfg, 6, exact);
    auto rows2 = run_fk_trials(data.items, data.universe_size, cfg, 6, exact);
    REQUIRE(rows1.size() == 6);
    for (std::size_t r = 0; r < rows1.size(); ++r) {
        CHECK(rows1[r].trial == r);
        CHECK(rows1[r].estimate == rows2[r].estimate);
        CHECK(rows1[r].failed == (std::abs(rows1[r].rel_error) > cfg.epsilon));
    }
    // Trial seeds are root + r, so a shifted root reproduces the suffix.
    FkConfig shifted = cfg;
    shifted.seed = cfg.seed + 2;
    auto suffix = run_fk_trials(data.items, data.universe_size, shifted, 4, exact);
    for (std::size_t r = 0; r < suffix.size(); ++r)
        CHECK(suffix[r].estimate == rows1[r + 2].estimate);
}

TEST_CASE("experiment csv has the fixed schema and a summary footer") {
    StreamData data = make_stream(4);
    double exact = exact_fk(FrequencyVector::from_stream(data.items, data.universe_size), 3.0);
    FkConfig cfg;
    cfg.seed = 11;
    auto rows = run_fk_trials(data.items, data.universe_size, cfg, 3, exact);
    std::ostringstream out;
    write_experiment_csv(out, rows);
    std::string text = out.str();
    CHECK(text.rfind("trial,estimate,exact,rel_error,failed,words\n", 0) == 0);
    CHECK(text.find("# failure_fraction=") != std::string::npos);
    std::ostringstream again;
    write_experiment_csv(again, rows);
    CHECK(text == again.str());
}

TEST_CASE("median of runs reduces to the single estimate at runs = 1") {
    StreamData data = make_stream(5);
    FkConfig cfg;
    cfg.seed = 606;
    RunReport report = median_of_runs(data.items, data.universe_size, cfg, 1);
    REQUIRE(report.runs.size() == 1);
    CHECK(report.median == report.runs[0].value);
    CHECK_THROWS_AS(median_of_runs(data.items, data.universe_size, cfg, 2),
                    std::invalid_argument);
}

TEST_CASE("median of five runs is the middle run value") {
    StreamData data = make_stream(6);
    FkConfig cfg;
    cfg.seed = 607;
    RunReport report = median_of_runs(data.items, data.universe_size, cfg, 5);
    REQUIRE(report.runs.size() == 5);
    std::vector<double> values;
    for (const auto& est : report.runs) values.push_back(est.value);
    std::sort(values.begin(), values.end());
    CHECK(report.median == values[2]);
}
