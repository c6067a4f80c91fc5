#include "shiftmix/mixture.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace shiftmix {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;  // ln(2*pi)
}

GaussianMap make_gaussian_map(int k, int d) {
    if (k < 1 || d < 1) throw std::invalid_argument("make_gaussian_map: bad shape");
    GaussianMap map;
    map.k = k;
    map.d = d;
    map.theta = Eigen::ArrayXd::Zero(2L * k * d);
    return map;
}

Vec gaussian_log_density(const GaussianMap& map, const Vec& x) {
    if (x.size() != map.d)
        throw std::invalid_argument("gaussian_log_density: input has length " +
                                    std::to_string(x.size()) + ", expected " +
                                    std::to_string(map.d));
    auto centers = map.centers();
    auto rho = map.log_scales();
    Vec out(map.k);
    for (int j = 0; j < map.k; ++j) {
        double acc = -0.5 * map.d * kLog2Pi;
        for (int i = 0; i < map.d; ++i) {
            const double r = x[i] - centers(j, i);
            acc -= rho(j, i);
            acc -= 0.5 * r * r * std::exp(-2.0 * rho(j, i));
        }
        out[j] = acc;
    }
    return out;
}

Mat gaussian_log_density_batch(const GaussianMap& map, const Mat& xs) {
    if (xs.cols() != map.d)
        throw std::invalid_argument("gaussian_log_density_batch: feature dimension mismatch");
    auto centers = map.centers();
    auto rho = map.log_scales();
    Mat out(xs.rows(), map.k);
    for (int j = 0; j < map.k; ++j) {
        const Eigen::ArrayXd inv_s2 = (-2.0 * rho.row(j).transpose().array()).exp();
        const double c0 = -0.5 * map.d * kLog2Pi - rho.row(j).sum();
        Eigen::ArrayXXd r = (xs.rowwise() - centers.row(j)).array();
        out.col(j) = c0 - 0.5 * (r.square().rowwise() * inv_s2.transpose()).rowwise().sum();
    }
    return out;
}

double predict(const MixtureModel& model, const Vec& u, const Vec& x) {
    if (u.size() != model.k) throw std::invalid_argument("predict: weight length mismatch");
    const Vec h = mlp_forward(model.h, x);
    const Vec gate = stable_softmax(u + gaussian_log_density(model.v, x));
    return gate.dot(h);
}

Vec joint_component_likelihood(const MixtureModel& model, const Vec& u, const Vec& x, double y) {
    if (u.size() != model.k)
        throw std::invalid_argument("joint_component_likelihood: weight length mismatch");
    const Vec h = mlp_forward(model.h, x);
    const Vec gate = stable_softmax(u + gaussian_log_density(model.v, x));
    const double s2 = model.sigma * model.sigma;
    const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * s2);
    Vec out(model.k);
    for (int j = 0; j < model.k; ++j) {
        const double r = y - h[j];
        out[j] = norm * std::exp(-r * r / (2.0 * s2)) * gate[j];
    }
    return out;
}

double sample_log_likelihood(const MixtureModel& model, const Vec& u, const Vec& x, double y) {
    if (u.size() != model.k)
        throw std::invalid_argument("sample_log_likelihood: weight length mismatch");
    const Vec h = mlp_forward(model.h, x);
    const Vec log_gate = log_softmax(u + gaussian_log_density(model.v, x));
    const double s2 = model.sigma * model.sigma;
    Vec terms(model.k);
    for (int j = 0; j < model.k; ++j) {
        const double r = y - h[j];
        terms[j] = -0.5 * std::log(2.0 * std::numbers::pi * s2) - r * r / (2.0 * s2) + log_gate[j];
    }
    return log_sum_exp(terms);
}

std::string mixture_to_json(const MixtureModel& model, const NormStats* stats) {
    nlohmann::json j;
    j["format"] = "shiftmix-model-v1";
    j["k"] = model.k;
    j["sigma"] = model.sigma;
    j["mlp"] = nlohmann::json::parse(mlp_to_json(model.h));
    j["gaussian_map"] = {
        {"k", model.v.k},
        {"d", model.v.d},
        {"theta",
         std::vector<double>(model.v.theta.data(), model.v.theta.data() + model.v.theta.size())}};
    if (stats) {
        j["norm"] = {{"x_mean", std::vector<double>(stats->x_mean.begin(), stats->x_mean.end())},
                     {"x_std", std::vector<double>(stats->x_std.begin(), stats->x_std.end())},
                     {"y_mean", stats->y_mean},
                     {"y_std", stats->y_std}};
    }
    return j.dump();
}

MixtureModel mixture_from_json(const std::string& json_text, NormStats* stats) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    if (j.value("format", "") != "shiftmix-model-v1")
        throw std::runtime_error("mixture_from_json: unknown model format");
    MixtureModel model;
    model.k = j.at("k").get<int>();
    model.sigma = j.at("sigma").get<double>();
    model.h = mlp_from_json(j.at("mlp").dump());
    const auto& gm = j.at("gaussian_map");
    model.v = make_gaussian_map(gm.at("k").get<int>(), gm.at("d").get<int>());
    std::vector<double> theta = gm.at("theta").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(theta.size()) != model.v.theta.size())
        throw std::runtime_error("mixture_from_json: gaussian map size mismatch");
    model.v.theta = Eigen::Map<Eigen::ArrayXd>(theta.data(), theta.size());
    if (model.h.config.output_dim != model.k || model.v.k != model.k)
        throw std::runtime_error("mixture_from_json: component counts disagree");
    if (stats && j.contains("norm")) {
        const auto& n = j.at("norm");
        std::vector<double> xm = n.at("x_mean").get<std::vector<double>>();
        std::vector<double> xs = n.at("x_std").get<std::vector<double>>();
        stats->x_mean = Eigen::Map<Vec>(xm.data(), xm.size());
        stats->x_std = Eigen::Map<Vec>(xs.data(), xs.size());
        stats->y_mean = n.at("y_mean").get<double>();
        stats->y_std = n.at("y_std").get<double>();
    }
    return model;
}

void save_mixture(const MixtureModel& model, const NormStats& stats, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_mixture: cannot open '" + path + "'");
    out << mixture_to_json(model, &stats);
}

MixtureModel load_mixture(const std::string& path, NormStats* stats) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_mixture: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return mixture_from_json(ss.str(), stats);
}

}  // namespace shiftmix
