#pragma once

#include <string>
#include <vector>

#include "shiftmix/decompose.hpp"

namespace shiftmix {

struct InterleavedSplit {
    Dataset train;       // contiguous re-indexing 1..N_tr
    Dataset validation;  // file order preserved
    int m = 4;
    // 1-based training index shared by validation sample i (i 1-based):
    // val_index_map[i-1] = m*i, clamped to [1, N_tr]
    std::vector<long> val_index_map;
};

// Walks the stream and diverts every (m+1)-th sample to validation; each
// diverted sample shares the (duplicated) index of its predecessor so the
// training index stays continuous.
InterleavedSplit interleaved_split(const Dataset& data, int m = 4);

// RMSE on the validation half of a single-output model trained on the
// training half with the standard recipe.
double compute_xi(const InterleavedSplit& split, const MlpConfig& config,
                  const TrainRecipe& recipe, Rng& rng);

struct KCandidateResult {
    int k = 0;
    double sigma = 0.0;
    double log_likelihood = 0.0;
    int em_iterations = 0;
    bool ok = false;
    std::string error;
};

struct KSelectionReport {
    double xi = 0.0;
    int m = 4;
    int chosen_k = 0;
    std::vector<KCandidateResult> candidates;
};

struct SelectKOptions {
    int k_min = 2;
    int k_max = 10;
    int m = 4;
    MlpConfig head;       // input/output dims filled in per candidate
    TrainRecipe recipe;   // for h' and init_h
    int workers = 0;      // 0 = hardware concurrency, 1 = sequential
};

struct SelectKResult {
    MixtureModel model;   // candidate with the highest held-out log-likelihood
    WeightTrajectory trajectory;
    KSelectionReport report;
};

// Candidate sweep K' in [k_min, k_max] with sigma = xi/sqrt(K'); each
// candidate runs on an RNG stream seeded trial_seed ^ K' so the sweep is
// reproducible regardless of scheduling. Ties go to the smaller K.
SelectKResult select_k(const Dataset& data, const EmConfig& em_config, Rng& rng,
                       const SelectKOptions& options = {});

std::string report_to_json(const KSelectionReport& report);

}  // namespace shiftmix
