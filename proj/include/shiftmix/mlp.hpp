#pragma once

#include <functional>
#include <string>
#include <vector>

#include "shiftmix/adam.hpp"
#include "shiftmix/data.hpp"
#include "shiftmix/numeric.hpp"
#include "shiftmix/rng.hpp"

namespace shiftmix {

// 3-layer perceptron: input -> hidden -> hidden -> output,
// Swish on the hidden layers, identity output.
struct MlpConfig {
    int input_dim = 1;
    int hidden_dim = 128;
    int output_dim = 1;
};

// Parameters live in one flat array so the optimizer, serialization and
// finite-difference checks all see the same thing. Layout (row-major blocks):
//   W1 (hidden x in), b1, W2 (hidden x hidden), b2, W3 (out x hidden), b3
struct MlpParams {
    MlpConfig config;
    Eigen::ArrayXd theta;

    Eigen::Index size() const { return theta.size(); }
};

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowMap = Eigen::Map<RowMat>;
using ConstRowMap = Eigen::Map<const RowMat>;
using VecMap = Eigen::Map<Eigen::VectorXd>;
using ConstVecMap = Eigen::Map<const Eigen::VectorXd>;

Eigen::Index mlp_param_count(const MlpConfig& cfg);

// views into the flat array (valid while the array is alive)
struct MlpView {
    ConstRowMap w1, w2, w3;
    ConstVecMap b1, b2, b3;
};
struct MlpViewMut {
    RowMap w1, w2, w3;
    VecMap b1, b2, b3;
};
MlpView mlp_view(const MlpConfig& cfg, const Eigen::ArrayXd& theta);
MlpViewMut mlp_view(const MlpConfig& cfg, Eigen::ArrayXd& theta);

// fan-in/fan-out scaled uniform weights, zero biases; deterministic per seed
MlpParams mlp_init(const MlpConfig& config, Rng& rng);

Vec mlp_forward(const MlpParams& params, const Vec& x);

// batch forward; X is N x input_dim, result N x output_dim
struct MlpBatchCache {
    Mat z1, s1, a1, z2, s2, a2;  // pre-activations, sigmoids, activations
};
Mat mlp_forward_batch(const MlpParams& params, const Mat& xs, MlpBatchCache* cache = nullptr);

// gradient of upstream . output w.r.t. the parameters (reverse mode)
Eigen::ArrayXd mlp_backward(const MlpParams& params, const Vec& x, const Vec& upstream);

// batch reverse mode: d_out is N x output_dim of upstream sensitivities;
// xs/cache must come from the matching mlp_forward_batch call
Eigen::ArrayXd mlp_backward_batch(const MlpParams& params, const Mat& xs,
                                  const MlpBatchCache& cache, const Mat& d_out);

// standard Adam step on a lone MLP (thin wrapper over Adam for one block)
void adam_step(Adam& state, MlpParams& params, const Eigen::ArrayXd& grads);

struct TrainRecipe {
    int epochs = 200;
    double validation_fraction = 0.10;
    AdamConfig adam;  // lr 0.01, decoupled weight decay 1e-4
};

// Full-batch training with a random validation split; returns the snapshot
// with the lowest validation MSE seen over the run (initial params included).
// target_fn produces the per-sample target vector (length output_dim).
MlpParams train_supervised(const Dataset& data,
                           const std::function<Vec(const Sample&)>& target_fn,
                           const MlpConfig& config, const TrainRecipe& recipe, Rng& rng,
                           std::vector<double>* validation_curve = nullptr);

std::string mlp_to_json(const MlpParams& params);
MlpParams mlp_from_json(const std::string& json_text);

}  // namespace shiftmix
