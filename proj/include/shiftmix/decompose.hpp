#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "shiftmix/data.hpp"
#include "shiftmix/mixture.hpp"

namespace shiftmix {

struct EmConfig {
    double learning_rate = 0.01;   // eta, M-step Adam
    double smoothing_rate = 0.1;   // alpha, ||u_t - u_{t+1}||^2 penalty
    double entropy_rate = 0.1;     // beta, gating entropy term
    int m_step_epochs = 20;
    int max_outer_iters = 50;
    double rel_tol = 1e-4;
    MlpConfig head;                // input_dim/output_dim overwritten by run_em
};

// per-sample responsibilities, one simplex row per sample (N x K),
// clamped to >= 1e-12 and renormalized
using Allocation = Mat;

struct EmDivergedError : std::runtime_error {
    int iteration;
    EmDivergedError(int iter, const std::string& what)
        : std::runtime_error(what), iteration(iter) {}
};

// head k is trained toward y - 3*sigma*(2k - K - 1)/(K - 1): the heads start
// spread evenly across [y - 3 sigma, y + 3 sigma]
MlpParams init_h(const Dataset& data, int k, double sigma, const MlpConfig& config,
                 const TrainRecipe& recipe, Rng& rng);

// centers ~ N(0, I), scales 1 (log-scales 0)
GaussianMap init_v(int d, int k, Rng& rng);

// exact posterior over components, computed in log-space
Allocation e_step(const MixtureModel& model, const WeightTrajectory& traj, const Dataset& data);

// the regularized M-step objective (sum over samples, not mean)
double m_step_loss(const MixtureModel& model, const WeightTrajectory& traj, const Dataset& data,
                   const Allocation& alloc, double alpha, double beta);

struct EmResult {
    MixtureModel model;
    WeightTrajectory trajectory;
    Allocation allocation;
    int iterations = 0;
    double final_loss = 0.0;
};

// Alternates the exact E-step with m_step_epochs Adam steps on the
// regularized loss over h, v and {u_t}; one Adam instance persists across
// outer iterations. Stops when the relative loss change drops below rel_tol
// or max_outer_iters is hit. diag, when given, receives one JSON line per
// outer iteration with the loss.
EmResult run_em(const Dataset& data, int k, double sigma, const EmConfig& config, Rng& rng,
                std::ostream* diag = nullptr);

}  // namespace shiftmix
