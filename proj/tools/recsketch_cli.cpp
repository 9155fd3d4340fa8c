// Command-line surface: synthetic stream generation, exact moments,
// single-shot estimation with median-of-runs amplification, and repeated
// trial experiments with CSV output.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "recsketch/experiment.hpp"
#include "recsketch/fk_estimator.hpp"
#include "recsketch/oracle.hpp"
#include "recsketch/stream_io.hpp"

namespace {

using namespace recsketch;

std::string fmt(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

StreamData load_stream(const std::string& path) {
    if (path == "-") return read_stream(std::cin);
    return read_stream_file(path);
}

struct FkFlags {
    double k = 3.0;
    double epsilon = 0.2;
    unsigned nesting = 1;
    std::uint64_t seed = 0;
    std::size_t base_capacity = std::size_t{1} << 16;
    double c_w = kDefaultPowerBucketConstant;
    double c_d = kDefaultRowConstant;
    double c_alpha = 1.0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--k", k, "moment order (k >= 2)");
        cmd->add_option("--epsilon", epsilon, "target relative error in (0, 1)");
        cmd->add_option("--t", nesting, "depth-reduction stages (0 = full depth)");
        cmd->add_option("--seed", seed, "root seed");
        cmd->add_option("--base-capacity", base_capacity, "distinct survivors at the base");
        cmd->add_option("--cw", c_w, "bucket sizing constant");
        cmd->add_option("--cd", c_d, "row sizing constant");
        cmd->add_option("--calpha", c_alpha, "heaviness scaling constant");
    }

    FkConfig config() const {
        FkConfig cfg;
        cfg.k = k;
        cfg.epsilon = epsilon;
        cfg.nesting = nesting;
        cfg.seed = seed;
        cfg.base_capacity = base_capacity;
        cfg.c_w = c_w;
        cfg.c_d = c_d;
        cfg.alpha_scale = c_alpha;
        cfg.validate();
        return cfg;
    }
};

int cmd_gen(const std::string& dist, double zipf_s, double heavy_ratio, std::uint64_t n,
            std::uint64_t m, std::uint64_t seed, const std::string& out_path) {
    GenSpec spec;
    if (dist == "zipf")
        spec.dist = StreamDist::kZipf;
    else if (dist == "uniform")
        spec.dist = StreamDist::kUniform;
    else if (dist == "single_heavy")
        spec.dist = StreamDist::kSingleHeavy;
    else
        throw std::invalid_argument("unknown distribution: " + dist);
    spec.zipf_exponent = zipf_s;
    spec.heavy_ratio = heavy_ratio;
    spec.universe_size = n;
    spec.length = m;
    spec.seed = seed;
    StreamData stream = generate_stream(spec);
    if (out_path == "-") {
        write_stream(std::cout, stream);
    } else {
        write_stream_file(out_path, stream);
    }
    return 0;
}

int cmd_exact(const std::string& in_path, double k) {
    StreamData data = load_stream(in_path);
    auto fv = FrequencyVector::from_stream(data.items, data.universe_size);
    std::cout << fmt(exact_fk(fv, k)) << "\n";
    return 0;
}

int cmd_estimate(const std::string& in_path, const FkFlags& flags, unsigned runs) {
    StreamData data = load_stream(in_path);
    FkConfig cfg = flags.config();
    RunReport report = median_of_runs(data.items, data.universe_size, cfg, runs);
    for (std::size_t q = 0; q < report.runs.size(); ++q)
        std::cout << "run=" << q << " estimate=" << fmt(report.runs[q].value)
                  << " overflowed=" << (report.runs[q].overflowed ? 1 : 0) << "\n";
    std::cout << "median=" << fmt(report.median) << "\n"
              << "overflowed_any=" << (report.any_overflow ? 1 : 0) << "\n"
              << report.space.to_kv();
    return 0;
}

int cmd_experiment(const std::string& in_path, const FkFlags& flags, std::uint64_t trials,
                   const std::string& out_path) {
    StreamData data = load_stream(in_path);
    FkConfig cfg = flags.config();
    auto fv = FrequencyVector::from_stream(data.items, data.universe_size);
    double exact = exact_fk(fv, cfg.k);  // one oracle pass shared by all trials
    auto rows = run_fk_trials(data.items, data.universe_size, cfg, trials, exact);
    if (out_path == "-") {
        write_experiment_csv(std::cout, rows);
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot open output file: " + out_path);
        write_experiment_csv(out, rows);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"recursive sketching for frequency moments"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("gen", "generate a synthetic stream file");
    std::string dist = "zipf";
    double zipf_s = 1.2, heavy_ratio = 0.5;
    std::uint64_t gen_n = 10000, gen_m = 100000, gen_seed = 0;
    std::string gen_out = "-";
    gen->add_option("--dist", dist, "zipf | uniform | single_heavy");
    gen->add_option("--s", zipf_s, "zipf exponent");
    gen->add_option("--ratio", heavy_ratio, "single_heavy mass fraction");
    gen->add_option("--n", gen_n, "universe size");
    gen->add_option("--m", gen_m, "stream length");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--out", gen_out, "output path (- for stdout)");

    auto* exact = app.add_subcommand("exact", "exact F_k of a stream file");
    std::string exact_in = "-";
    double exact_k = 3.0;
    exact->add_option("--in", exact_in, "input path (- for stdin)");
    exact->add_option("--k", exact_k, "moment order (k >= 0)");

    auto* estimate = app.add_subcommand("estimate", "median-of-runs F_k estimate");
    std::string est_in = "-";
    unsigned runs = 1;
    FkFlags est_flags;
    estimate->add_option("--in", est_in, "input path (- for stdin)");
    estimate->add_option("--runs", runs, "odd number of independent runs");
    est_flags.attach(estimate);

    auto* experiment = app.add_subcommand("experiment", "repeated-trial CSV experiment");
    std::string exp_in = "-";
    std::string exp_out = "-";
    std::uint64_t trials = 1;
    FkFlags exp_flags;
    experiment->add_option("--in", exp_in, "input path (- for stdin)");
    experiment->add_option("--trials", trials, "number of trials");
    experiment->add_option("--out", exp_out, "output path (- for stdout)");
    exp_flags.attach(experiment);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return cmd_gen(dist, zipf_s, heavy_ratio, gen_n, gen_m, gen_seed, gen_out);
        if (exact->parsed()) return cmd_exact(exact_in, exact_k);
        if (estimate->parsed()) return cmd_estimate(est_in, est_flags, runs);
        if (experiment->parsed()) return cmd_experiment(exp_in, exp_flags, trials, exp_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
