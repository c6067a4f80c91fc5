#pragma once

#include <string>
#include <vector>

#include "shiftmix/mlp.hpp"
#include "shiftmix/numeric.hpp"
#include "shiftmix/rng.hpp"

namespace shiftmix {

// Per-component diagonal Gaussian over inputs, scales kept in log-space so
// they stay positive under unconstrained optimization. Flat layout:
//   centers (K x d, row-major), log_scales (K x d, row-major)
struct GaussianMap {
    int k = 0;
    int d = 0;
    Eigen::ArrayXd theta;

    Eigen::Index size() const { return theta.size(); }
    ConstRowMap centers() const { return ConstRowMap(theta.data(), k, d); }
    RowMap centers() { return RowMap(theta.data(), k, d); }
    ConstRowMap log_scales() const { return ConstRowMap(theta.data() + k * d, k, d); }
    RowMap log_scales() { return RowMap(theta.data() + k * d, k, d); }
};

GaussianMap make_gaussian_map(int k, int d);

// v(x)_k = -(d/2) ln 2pi - sum_i log s_ki - 1/2 sum_i (x_i - c_ki)^2 / s_ki^2
Vec gaussian_log_density(const GaussianMap& map, const Vec& x);
Mat gaussian_log_density_batch(const GaussianMap& map, const Mat& xs);

// the decomposed predictor: K-headed regressor h, input gate v, noise level
struct MixtureModel {
    MlpParams h;     // output_dim == k
    GaussianMap v;
    double sigma = 1.0;
    int k = 0;
};

// training-phase weights u_t, one row per sample (N x K)
using WeightTrajectory = Mat;

// softmax(u + v(x))^T h(x)
double predict(const MixtureModel& model, const Vec& u, const Vec& x);

// per-component joint density p(y, z=e_k | x): the literal product
//   N(y; h_k(x), sigma^2) * softmax(u + v(x))_k
Vec joint_component_likelihood(const MixtureModel& model, const Vec& u, const Vec& x, double y);

// log p(y | x) = logsumexp_k of the per-component log joints; stays finite
// for residuals far beyond where the linear-space product underflows
double sample_log_likelihood(const MixtureModel& model, const Vec& u, const Vec& x, double y);

std::string mixture_to_json(const MixtureModel& model, const NormStats* stats = nullptr);
MixtureModel mixture_from_json(const std::string& json_text, NormStats* stats = nullptr);
void save_mixture(const MixtureModel& model, const NormStats& stats, const std::string& path);
MixtureModel load_mixture(const std::string& path, NormStats* stats = nullptr);

}  // namespace shiftmix
