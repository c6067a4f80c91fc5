#pragma once

#include <iosfwd>
#include <vector>

#include "shiftmix/data.hpp"
#include "shiftmix/mixture.hpp"

namespace shiftmix {

struct AdaptConfig {
    int num_base = 11;       // M
    double base_lr = 0.01;   // eta; learner i uses 2^(i-1) * eta
    double meta_lr = 1.0;    // epsilon
    double correction = 0.1; // lambda, movement term in the surrogate losses
};

// Two-layer state: M optimistic-OGD base learners (u_i with internal u'_i)
// combined by an optimistic-hedge distribution p over learners.
struct AdaptState {
    AdaptConfig config;
    int k = 0;
    long round = 0;                 // rounds completed
    std::vector<Vec> u;             // u_{ti}, current base points
    std::vector<Vec> u_prime;       // internal optimistic variables
    std::vector<Vec> u_prev;        // u_{(t-1)i}, for the movement terms
    Vec p;                          // meta distribution, length M
    Vec cum_surrogate;              // sum_{s<=t} l_s, length M
    Vec last_u;                     // combined weight used for the last prediction
    double last_yhat = 0.0;
};

AdaptState make_adapt_state(int k, const AdaptConfig& config = {});

// closed-form gradient of (softmax(u + v(x))^T h(x) - y)^2 w.r.t. u
Vec ensemble_gradient(const MixtureModel& model, const Vec& u, const Vec& x, double y);

// optimistic OGD: the same gradient is applied twice (hint = latest gradient)
void base_update(AdaptState& state, int i, const Vec& grad);

// surrogate losses, optimism term and the hedge distribution for round t;
// call after every base_update of the round
void meta_update(AdaptState& state, const Vec& grad, long t);

struct StepRecord {
    long t = 0;
    double yhat = 0.0;
    double y = 0.0;
    double loss = 0.0;
    int argmax_p = 0;
};

// predict with u_t = sum_i p_i u_i, suffer (yhat - y)^2, then update every
// base learner and the meta distribution with the shared gradient at u_t
StepRecord adapt_step(const MixtureModel& model, AdaptState& state, const Vec& x, double y);

struct AdaptationResult {
    double cumulative_loss = 0.0;
    std::vector<double> step_losses;
    std::vector<StepRecord> trace;
};

AdaptationResult run_adaptation(const MixtureModel& model, const Dataset& stream,
                                const AdaptConfig& config = {}, bool keep_trace = false);

void write_trace_csv(const std::vector<StepRecord>& trace, const std::string& path);

}  // namespace shiftmix
