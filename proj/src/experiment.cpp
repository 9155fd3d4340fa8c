#include "recsketch/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "recsketch/field61.hpp"

namespace recsketch {

namespace {

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

}  // namespace

std::vector<TrialRow> run_fk_trials(std::span<const std::uint64_t> stream,
                                    std::uint64_t universe_size, const FkConfig& base_config,
                                    std::uint64_t trials, double exact_fk_value) {
    std::vector<TrialRow> rows(trials);
    std::int64_t count = static_cast<std::int64_t>(trials);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::int64_t r = 0; r < count; ++r) {
        FkConfig cfg = base_config;
        cfg.seed = base_config.seed + static_cast<std::uint64_t>(r);
        RecursiveFk state(cfg, universe_size, stream.size());
        for (std::uint64_t item : stream) state.update(item);
        FkEstimate est = state.estimate();
        TrialRow row;
        row.trial = static_cast<std::uint64_t>(r);
        row.estimate = est.value;
        row.exact = exact_fk_value;
        row.rel_error = exact_fk_value != 0.0
                            ? (est.value - exact_fk_value) / exact_fk_value
                            : (est.value == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
        row.failed = std::abs(row.rel_error) > base_config.epsilon;
        row.words = state.space_report().total();
        row.overflowed = est.overflowed;
        rows[static_cast<std::size_t>(r)] = row;
    }
    return rows;
}

ExperimentSummary summarize(const std::vector<TrialRow>& rows) {
    ExperimentSummary summary;
    if (rows.empty()) return summary;
    std::size_t failures = 0;
    double abs_err = 0.0;
    for (const TrialRow& row : rows) {
        failures += row.failed ? 1 : 0;
        abs_err += std::abs(row.rel_error);
    }
    summary.failure_fraction = static_cast<double>(failures) / static_cast<double>(rows.size());
    summary.mean_abs_rel_error = abs_err / static_cast<double>(rows.size());
    return summary;
}

void write_experiment_csv(std::ostream& out, const std::vector<TrialRow>& rows) {
    out << "trial,estimate,exact,rel_error,failed,words\n";
    for (const TrialRow& row : rows) {
        out << row.trial << ',' << format_double(row.estimate) << ','
            << format_double(row.exact) << ',' << format_double(row.rel_error) << ','
            << (row.failed ? 1 : 0) << ',' << row.words << "\n";
    }
    ExperimentSummary summary = summarize(rows);
    out << "# failure_fraction=" << format_double(summary.failure_fraction)
        << " mean_abs_rel_error=" << format_double(summary.mean_abs_rel_error) << "\n";
}

RunReport median_of_runs(std::span<const std::uint64_t> stream, std::uint64_t universe_size,
                         const FkConfig& base_config, unsigned runs) {
    if (runs < 1 || runs % 2 == 0)
        throw std::invalid_argument("median_of_runs: runs must be odd and >= 1");
    RunReport report;
    report.runs.resize(runs);
    std::int64_t count = static_cast<std::int64_t>(runs);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::int64_t q = 0; q < count; ++q) {
        FkConfig cfg = base_config;
        cfg.seed = derive_seed(base_config.seed, SeedDomain::kRun, static_cast<std::uint64_t>(q));
        RecursiveFk state(cfg, universe_size, stream.size());
        for (std::uint64_t item : stream) state.update(item);
        report.runs[static_cast<std::size_t>(q)] = state.estimate();
    }
    for (const FkEstimate& est : report.runs) report.any_overflow |= est.overflowed;
    std::vector<double> values;
    values.reserve(runs);
    for (const FkEstimate& est : report.runs) values.push_back(est.value);
    std::nth_element(values.begin(), values.begin() + runs / 2, values.end());
    report.median = values[runs / 2];
    report.space = RecursiveFk::plan_space(base_config, universe_size,
                                           std::max<std::uint64_t>(1, stream.size()));
    return report;
}

}  // namespace recsketch
