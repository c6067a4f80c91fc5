#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shiftmix/adapt.hpp"
#include "shiftmix/baselines.hpp"
#include "shiftmix/data.hpp"
#include "shiftmix/select_k.hpp"

namespace shiftmix {

struct BenchConfig {
    std::string data_path;        // empty -> synthetic source
    std::string target_column = "y";
    std::string protocol = "synth";  // shift | holdout | synth
    std::vector<std::string> methods = {"shiftmix", "offline", "ogd"};
    int trials = 30;
    std::uint64_t seed = 1;
    std::string out_dir = "bench_out";
    bool trace = false;
    bool drop_na = true;
    long synth_len = 6000;        // source length for shift/holdout on synthetic data
    long synth_train = 3000;      // protocol=synth sizes
    long synth_test = 1000;

    EmConfig em;
    AdaptConfig adapt;
    BaselineConfig baseline;
    SelectKOptions select;
};

// key = value lines, '#' comments; unknown keys raise naming the key.
// CLI flags are applied on top of the parsed file.
BenchConfig parse_config_file(const std::string& path);

struct DataSource {
    std::optional<Dataset> loaded;  // CSV, normalized once up front
    SynthSpec synth;                // used when no CSV is given
};

struct TrialReport {
    std::string method;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    double cumulative_loss = 0.0;
    int chosen_k = 0;  // pipeline only
    double fit_seconds = 0.0;
    double adapt_seconds = 0.0;
    std::vector<double> step_losses;
};

struct MethodAggregate {
    std::string method;
    double mean = 0.0;
    double stddev = 0.0;  // sample (n-1); 0 when fewer than two trials
    int trials = 0;
    int failures = 0;
};

struct BenchmarkReport {
    std::vector<MethodAggregate> aggregates;
    std::vector<TrialReport> trials;
    bool has_gain = false;
    double gain_percent = 0.0;  // (ours - best baseline) / best baseline * 100
};

// All per-trial randomness derives from the single seed; the data draw and
// split depend on the seed only, so every method sees the same block.
TrialReport run_trial(const DataSource& source, const std::string& method,
                      const std::string& protocol, std::uint64_t seed,
                      const BenchConfig& config);

// trial seeds are seed + trial_index; methods are paired per seed
BenchmarkReport run_benchmark(const BenchConfig& config);

double gain_percent(double ours_mean, double best_baseline_mean);

// summary.csv (method, mean, std, gain_percent, trials), trials.json and,
// when enabled, one per-step trace CSV per successful trial
void emit_report(const BenchmarkReport& report, const std::string& out_dir, bool traces = false);

}  // namespace shiftmix
