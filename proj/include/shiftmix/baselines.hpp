#pragma once

#include <vector>

#include "shiftmix/data.hpp"
#include "shiftmix/mlp.hpp"

namespace shiftmix {

struct BaselineConfig {
    double ogd_lr = 1e-3;
    MlpConfig mlp;       // input_dim filled in from the data
    TrainRecipe recipe;
};

struct BaselineResult {
    double cumulative_loss = 0.0;
    std::vector<double> step_losses;
    double fit_seconds = 0.0;
    double adapt_seconds = 0.0;
};

// train once on the training set, predict the stream with the frozen model
BaselineResult offline_run(const Dataset& train, const Dataset& stream,
                           const BaselineConfig& config, Rng& rng);

// same initialization; then predict-first, one plain SGD step on each
// sample's squared error afterwards (no weight decay during the stream)
BaselineResult ogd_run(const Dataset& train, const Dataset& stream,
                       const BaselineConfig& config, Rng& rng);

}  // namespace shiftmix
