#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace shiftmix {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline bool all_finite(const Vec& v) { return v.allFinite(); }

// Probability-simplex membership: entries in [0,1], sum within tol of 1.
inline bool is_simplex(const Vec& v, double tol = 1e-9) {
    if (v.size() == 0) return false;
    if ((v.array() < -0.0).any() || (v.array() > 1.0 + tol).any()) return false;
    return std::abs(v.sum() - 1.0) <= tol;
}

// softmax with max-subtraction; exact under shifts, no overflow for large inputs
inline Vec stable_softmax(const Vec& v) {
    if (v.size() == 0) throw std::invalid_argument("stable_softmax: empty input");
    if (!v.allFinite()) throw std::invalid_argument("stable_softmax: non-finite input");
    Vec e = (v.array() - v.maxCoeff()).exp();
    return e / e.sum();
}

inline double log_sum_exp(const Vec& v) {
    if (v.size() == 0) throw std::invalid_argument("log_sum_exp: empty input");
    if (!v.allFinite()) throw std::invalid_argument("log_sum_exp: non-finite input");
    if (v.size() == 1) return v[0];
    const double m = v.maxCoeff();
    return m + std::log((v.array() - m).exp().sum());
}

// log softmax(v)_k = v_k - log_sum_exp(v)
inline Vec log_softmax(const Vec& v) {
    return v.array() - log_sum_exp(v);
}

// in-place row-wise log-softmax of an N x K matrix
inline void log_softmax_rows(Mat& z) {
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
        const double m = z.row(i).maxCoeff();
        const double lse = m + std::log((z.row(i).array() - m).exp().sum());
        z.row(i).array() -= lse;
    }
}

}  // namespace shiftmix
