#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shiftmix/numeric.hpp"
#include "shiftmix/rng.hpp"

namespace shiftmix {

struct Sample {
    long t = 0;  // 1-based time index, strictly increasing within a Dataset
    Vec x;
    double y = 0.0;
};

struct NormStats {
    Vec x_mean, x_std;  // constant features get std 1
    double y_mean = 0.0, y_std = 1.0;
};

struct Dataset {
    std::vector<Sample> samples;
    NormStats stats;

    long size() const { return static_cast<long>(samples.size()); }
    int dim() const { return samples.empty() ? 0 : static_cast<int>(samples.front().x.size()); }
};

// feature matrix (N x d) / target vector for batch kernels
Mat feature_matrix(const Dataset& data);
Vec target_vector(const Dataset& data);

NormStats compute_norm_stats(const std::vector<Sample>& samples);
void apply_normalization(std::vector<Sample>& samples, const NormStats& stats);
Vec denormalize_x(const NormStats& stats, const Vec& x);
double denormalize_y(const NormStats& stats, double y);

// Headered numeric CSV. Rows with missing values (empty / NA / NaN spellings)
// are dropped when drop_na is set, otherwise they raise. Any other
// non-numeric cell raises an error naming the row and column. Loaded rows are
// indexed in file order; z-score normalization uses the loaded rows' own
// statistics unless normalize is false.
Dataset load_csv(const std::string& path, const std::string& target_column,
                 bool drop_na = true, bool normalize = true);

struct ShiftSplit {
    Dataset train;
    Dataset test;
    long block_start = 0;  // 1-based position of the selected block in the source
    std::vector<std::pair<long, long>> test_windows;  // local 1-based, inclusive
};

// 4000-sample block at a random start; five 200-sample windows inside the
// block become the test stream, the remaining 3000 samples the training set.
// Both keep their internal order and are re-indexed contiguously from 1.
ShiftSplit shift_split(const Dataset& data, Rng& rng);

// 4000-sample block at a random start; first 3000 train, last 1000 test.
ShiftSplit holdout_split(const Dataset& data, Rng& rng);

// ---- synthetic ground-truth generator ----

struct SynthComponent {
    Vec input_center;
    Vec input_scale;   // per-coordinate std of the input Gaussian
    Vec slope;
    double intercept = 0.0;
    double noise_std = 0.0;
};

enum class WeightSchedule { PiecewiseConstant, Sinusoidal };

struct SynthSpec {
    int k = 0;
    std::vector<SynthComponent> components;
    WeightSchedule schedule = WeightSchedule::PiecewiseConstant;
    // piecewise: the dominant component cycles every segment; segments of
    // train_segment_len up to N, then test_segment_len afterwards
    long train_segment_len = 500;
    long test_segment_len = 500;
    double dominant_weight = 1.0;  // remainder split evenly over the others
    double sin_period = 1000.0;    // sinusoidal schedule only

    Vec weights_at(long t, long n_train) const;  // point on the K-simplex
};

struct SynthGroundTruth {
    SynthSpec spec;
    NormStats stats;                 // normalization applied to the emitted datasets
    std::vector<int> assignments;    // latent component per sample, 0-based, length N+T
    std::vector<Vec> trajectory;     // w^(t) per sample, length N+T
    // component conditional mean in normalized coordinates
    double component_mean(int k, const Vec& x_normalized) const;
    // posterior of component k given normalized x only (uniform prior over components)
    Vec input_posterior(const Vec& x_normalized) const;
};

// Default spec used by the benchmark harness and the acceptance suite:
// three well-separated planar input clusters with distinct linear responses.
SynthSpec default_synth_spec();

struct SynthResult {
    Dataset train;
    Dataset test;
    SynthGroundTruth truth;
};

// Draw (x, y) per step from the scheduled mixture, z-score everything on the
// full N+T draw, then split at N.
SynthResult synth_generate(const SynthSpec& spec, long n_train, long n_test, Rng& rng);

std::string ground_truth_to_json(const SynthGroundTruth& truth);
void write_dataset_csv(const Dataset& data, const std::string& path, bool denormalized = false);

}  // namespace shiftmix
