#include "shiftmix/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

namespace shiftmix {

namespace {

struct Offsets {
    Eigen::Index w1, b1, w2, b2, w3, b3, total;
};

Offsets offsets(const MlpConfig& c) {
    Offsets o;
    o.w1 = 0;
    o.b1 = o.w1 + static_cast<Eigen::Index>(c.hidden_dim) * c.input_dim;
    o.w2 = o.b1 + c.hidden_dim;
    o.b2 = o.w2 + static_cast<Eigen::Index>(c.hidden_dim) * c.hidden_dim;
    o.w3 = o.b2 + c.hidden_dim;
    o.b3 = o.w3 + static_cast<Eigen::Index>(c.output_dim) * c.hidden_dim;
    o.total = o.b3 + c.output_dim;
    return o;
}

void check_config(const MlpConfig& c) {
    if (c.input_dim < 1 || c.hidden_dim < 1 || c.output_dim < 1)
        throw std::invalid_argument("MlpConfig: dimensions must be positive");
}

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

Eigen::Index mlp_param_count(const MlpConfig& cfg) { return offsets(cfg).total; }

MlpView mlp_view(const MlpConfig& c, const Eigen::ArrayXd& theta) {
    const Offsets o = offsets(c);
    const double* p = theta.data();
    return MlpView{ConstRowMap(p + o.w1, c.hidden_dim, c.input_dim),
                   ConstRowMap(p + o.w2, c.hidden_dim, c.hidden_dim),
                   ConstRowMap(p + o.w3, c.output_dim, c.hidden_dim),
                   ConstVecMap(p + o.b1, c.hidden_dim),
                   ConstVecMap(p + o.b2, c.hidden_dim),
                   ConstVecMap(p + o.b3, c.output_dim)};
}

MlpViewMut mlp_view(const MlpConfig& c, Eigen::ArrayXd& theta) {
    const Offsets o = offsets(c);
    double* p = theta.data();
    return MlpViewMut{RowMap(p + o.w1, c.hidden_dim, c.input_dim),
                      RowMap(p + o.w2, c.hidden_dim, c.hidden_dim),
                      RowMap(p + o.w3, c.output_dim, c.hidden_dim),
                      VecMap(p + o.b1, c.hidden_dim),
                      VecMap(p + o.b2, c.hidden_dim),
                      VecMap(p + o.b3, c.output_dim)};
}

MlpParams mlp_init(const MlpConfig& config, Rng& rng) {
    check_config(config);
    MlpParams params;
    params.config = config;
    params.theta = Eigen::ArrayXd::Zero(mlp_param_count(config));
    auto v = mlp_view(config, params.theta);
    auto fill = [&rng](RowMap w, int fan_in, int fan_out) {
        const double a = std::sqrt(6.0 / (fan_in + fan_out));
        for (Eigen::Index i = 0; i < w.rows(); ++i)
            for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = rng.uniform(-a, a);
    };
    fill(v.w1, config.input_dim, config.hidden_dim);
    fill(v.w2, config.hidden_dim, config.hidden_dim);
    fill(v.w3, config.hidden_dim, config.output_dim);
    return params;
}

Vec mlp_forward(const MlpParams& params, const Vec& x) {
    const auto& c = params.config;
    if (x.size() != c.input_dim)
        throw std::invalid_argument("mlp_forward: input has length " + std::to_string(x.size()) +
                                    ", expected " + std::to_string(c.input_dim));
    auto v = mlp_view(c, params.theta);
    Vec z1 = v.w1 * x + v.b1;
    Vec a1 = z1.unaryExpr([](double z) { return z * sigmoid(z); });
    Vec z2 = v.w2 * a1 + v.b2;
    Vec a2 = z2.unaryExpr([](double z) { return z * sigmoid(z); });
    return v.w3 * a2 + v.b3;
}

Mat mlp_forward_batch(const MlpParams& params, const Mat& xs, MlpBatchCache* cache) {
    const auto& c = params.config;
    if (xs.cols() != c.input_dim)
        throw std::invalid_argument("mlp_forward_batch: feature dimension mismatch");
    auto v = mlp_view(c, params.theta);
    Mat z1 = (xs * v.w1.transpose()).rowwise() + v.b1.transpose();
    Mat s1 = z1.unaryExpr([](double z) { return sigmoid(z); });
    Mat a1 = z1.cwiseProduct(s1);
    Mat z2 = (a1 * v.w2.transpose()).rowwise() + v.b2.transpose();
    Mat s2 = z2.unaryExpr([](double z) { return sigmoid(z); });
    Mat a2 = z2.cwiseProduct(s2);
    Mat out = (a2 * v.w3.transpose()).rowwise() + v.b3.transpose();
    if (cache) {
        cache->z1 = std::move(z1);
        cache->s1 = std::move(s1);
        cache->a1 = std::move(a1);
        cache->z2 = std::move(z2);
        cache->s2 = std::move(s2);
        cache->a2 = std::move(a2);
    }
    return out;
}

namespace {

// d swish / dz = s + z s (1 - s)
inline Mat swish_grad(const Mat& z, const Mat& s) {
    return s.array() + z.array() * s.array() * (1.0 - s.array());
}

}  // namespace

Eigen::ArrayXd mlp_backward_batch(const MlpParams& params, const Mat& xs,
                                  const MlpBatchCache& cache, const Mat& d_out) {
    const auto& c = params.config;
    if (d_out.cols() != c.output_dim || d_out.rows() != xs.rows())
        throw std::invalid_argument("mlp_backward_batch: upstream shape mismatch");
    auto v = mlp_view(c, params.theta);
    const Offsets o = offsets(c);
    Eigen::ArrayXd grad = Eigen::ArrayXd::Zero(o.total);
    auto g = mlp_view(c, grad);

    g.w3 = d_out.transpose() * cache.a2;
    g.b3 = d_out.colwise().sum().transpose();
    Mat d_a2 = d_out * v.w3;
    Mat d_z2 = d_a2.cwiseProduct(swish_grad(cache.z2, cache.s2));
    g.w2 = d_z2.transpose() * cache.a1;
    g.b2 = d_z2.colwise().sum().transpose();
    Mat d_a1 = d_z2 * v.w2;
    Mat d_z1 = d_a1.cwiseProduct(swish_grad(cache.z1, cache.s1));
    g.w1 = d_z1.transpose() * xs;
    g.b1 = d_z1.colwise().sum().transpose();
    return grad;
}

Eigen::ArrayXd mlp_backward(const MlpParams& params, const Vec& x, const Vec& upstream) {
    const auto& c = params.config;
    if (x.size() != c.input_dim) throw std::invalid_argument("mlp_backward: input length mismatch");
    if (upstream.size() != c.output_dim)
        throw std::invalid_argument("mlp_backward: upstream length mismatch");
    Mat xs = x.transpose();
    MlpBatchCache cache;
    mlp_forward_batch(params, xs, &cache);
    return mlp_backward_batch(params, xs, cache, upstream.transpose());
}

void adam_step(Adam& state, MlpParams& params, const Eigen::ArrayXd& grads) {
    if (grads.size() != params.theta.size())
        throw std::invalid_argument("adam_step: gradient size mismatch");
    state.step({ParamBlock{params.theta.data(), grads.data(), params.theta.size()}});
}

MlpParams train_supervised(const Dataset& data, const std::function<Vec(const Sample&)>& target_fn,
                           const MlpConfig& config, const TrainRecipe& recipe, Rng& rng,
                           std::vector<double>* validation_curve) {
    check_config(config);
    if (data.size() < 10)
        throw std::invalid_argument("train_supervised: need at least 10 samples, got " +
                                    std::to_string(data.size()));
    if (recipe.validation_fraction <= 0.0 || recipe.validation_fraction >= 1.0)
        throw std::invalid_argument("train_supervised: validation_fraction must be in (0, 1)");

    const long n = data.size();
    std::vector<long> order(n);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    const long n_val = std::max<long>(1, std::lround(recipe.validation_fraction * n));
    const long n_tr = n - n_val;

    Mat x_tr(n_tr, config.input_dim), x_val(n_val, config.input_dim);
    Mat t_tr(n_tr, config.output_dim), t_val(n_val, config.output_dim);
    for (long i = 0; i < n_val; ++i) {
        const Sample& s = data.samples[order[i]];
        x_val.row(i) = s.x.transpose();
        t_val.row(i) = target_fn(s).transpose();
    }
    for (long i = 0; i < n_tr; ++i) {
        const Sample& s = data.samples[order[n_val + i]];
        x_tr.row(i) = s.x.transpose();
        t_tr.row(i) = target_fn(s).transpose();
    }

    MlpParams params = mlp_init(config, rng);
    Adam opt(recipe.adam);

    auto val_mse = [&](const MlpParams& p) {
        Mat out = mlp_forward_batch(p, x_val);
        return (out - t_val).squaredNorm() / static_cast<double>(n_val);
    };

    MlpParams best = params;
    double best_val = val_mse(params);
    if (validation_curve) validation_curve->push_back(best_val);

    MlpBatchCache cache;
    for (int epoch = 0; epoch < recipe.epochs; ++epoch) {
        Mat out = mlp_forward_batch(params, x_tr, &cache);
        Mat d_out = 2.0 * (out - t_tr) / static_cast<double>(n_tr);
        Eigen::ArrayXd grad = mlp_backward_batch(params, x_tr, cache, d_out);
        adam_step(opt, params, grad);
        const double v = val_mse(params);
        if (validation_curve) validation_curve->push_back(v);
        if (v < best_val) {
            best_val = v;
            best = params;
        }
    }
    return best;
}

std::string mlp_to_json(const MlpParams& params) {
    nlohmann::json j;
    j["input_dim"] = params.config.input_dim;
    j["hidden_dim"] = params.config.hidden_dim;
    j["output_dim"] = params.config.output_dim;
    j["theta"] = std::vector<double>(params.theta.data(), params.theta.data() + params.theta.size());
    return j.dump();
}

MlpParams mlp_from_json(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    MlpParams params;
    params.config.input_dim = j.at("input_dim").get<int>();
    params.config.hidden_dim = j.at("hidden_dim").get<int>();
    params.config.output_dim = j.at("output_dim").get<int>();
    std::vector<double> theta = j.at("theta").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(theta.size()) != mlp_param_count(params.config))
        throw std::runtime_error("mlp_from_json: theta size does not match the declared shape");
    params.theta = Eigen::Map<Eigen::ArrayXd>(theta.data(), theta.size());
    return params;
}

}  // namespace shiftmix
