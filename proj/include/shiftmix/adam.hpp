#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace shiftmix {

struct AdamConfig {
    double learning_rate = 0.01;
    double weight_decay = 1e-4;  // decoupled: params *= (1 - lr*wd) before the update
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// One parameter block (flat view) and its gradient.
struct ParamBlock {
    double* param;
    const double* grad;
    Eigen::Index size;
};

// Adam with decoupled weight decay over a fixed list of flat parameter blocks.
// Moments are allocated on the first step and must keep their shapes afterwards.
class Adam {
   public:
    explicit Adam(AdamConfig cfg = {}) : cfg_(cfg) {}

    const AdamConfig& config() const { return cfg_; }
    long step_count() const { return step_; }
    const std::vector<Eigen::ArrayXd>& first_moments() const { return m_; }
    const std::vector<Eigen::ArrayXd>& second_moments() const { return v_; }

    void step(const std::vector<ParamBlock>& blocks) {
        if (m_.empty()) {
            for (const auto& b : blocks) {
                m_.emplace_back(Eigen::ArrayXd::Zero(b.size));
                v_.emplace_back(Eigen::ArrayXd::Zero(b.size));
            }
        }
        if (blocks.size() != m_.size()) throw std::invalid_argument("Adam: block count changed");
        ++step_;
        const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(step_));
        const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(step_));
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            const auto& b = blocks[i];
            if (b.size != m_[i].size()) throw std::invalid_argument("Adam: block size changed");
            Eigen::Map<Eigen::ArrayXd> p(b.param, b.size);
            Eigen::Map<const Eigen::ArrayXd> g(b.grad, b.size);
            if (cfg_.weight_decay != 0.0) p *= (1.0 - cfg_.learning_rate * cfg_.weight_decay);
            m_[i] = cfg_.beta1 * m_[i] + (1.0 - cfg_.beta1) * g;
            v_[i] = cfg_.beta2 * v_[i] + (1.0 - cfg_.beta2) * g.square();
            p -= cfg_.learning_rate * (m_[i] / bc1) / ((v_[i] / bc2).sqrt() + cfg_.eps);
        }
    }

   private:
    AdamConfig cfg_;
    long step_ = 0;
    std::vector<Eigen::ArrayXd> m_, v_;
};

}  // namespace shiftmix
