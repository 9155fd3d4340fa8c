#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "recsketch/fk_estimator.hpp"

// Repeated-trial machinery shared by the CLI and the acceptance suite.
// Trials are independent (trial r runs with seed root_seed + r) and may
// execute in parallel; rows always come back in trial order.

namespace recsketch {

struct TrialRow {
    std::uint64_t trial = 0;
    double estimate = 0.0;
    double exact = 0.0;
    double rel_error = 0.0;
    bool failed = false;  // |rel_error| > epsilon
    std::uint64_t words = 0;
    bool overflowed = false;
};

struct ExperimentSummary {
    double failure_fraction = 0.0;
    double mean_abs_rel_error = 0.0;
};

std::vector<TrialRow> run_fk_trials(std::span<const std::uint64_t> stream,
                                    std::uint64_t universe_size, const FkConfig& base_config,
                                    std::uint64_t trials, double exact_fk_value);

ExperimentSummary summarize(const std::vector<TrialRow>& rows);

// CSV with the fixed column order trial,estimate,exact,rel_error,failed,words
// plus a comment footer carrying the summary.
void write_experiment_csv(std::ostream& out, const std::vector<TrialRow>& rows);

// Median estimate over an odd number of runs with derived seeds.
struct RunReport {
    std::vector<FkEstimate> runs;
    double median = 0.0;
    bool any_overflow = false;
    SpaceReport space;
};
RunReport median_of_runs(std::span<const std::uint64_t> stream, std::uint64_t universe_size,
                         const FkConfig& base_config, unsigned runs);

}  // namespace recsketch
