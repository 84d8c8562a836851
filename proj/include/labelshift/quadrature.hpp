#pragma once

#include <Eigen/Dense>

namespace labelshift {

struct QuadratureRule {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
};

/// Gauss-Hermite rule for the weight exp(-t^2) (Golub-Welsch).
QuadratureRule gauss_hermite(int order);

/// Gauss-Legendre rule mapped to [lo, hi].
QuadratureRule gauss_legendre(int order, double lo, double hi);

/// Expectation of f(mean + sd Z), Z ~ N(0, 1), from a Gauss-Hermite rule.
template <class F>
auto normal_expectation(const QuadratureRule& hermite, double mean, double sd, F&& f) {
    constexpr double inv_sqrt_pi = 0.56418958354775628695;
    constexpr double sqrt2 = 1.41421356237309504880;
    auto acc = f(mean + sd * sqrt2 * hermite.nodes[0]) * (hermite.weights[0] * inv_sqrt_pi);
    for (Eigen::Index i = 1; i < hermite.nodes.size(); ++i) {
        acc += f(mean + sd * sqrt2 * hermite.nodes[i]) * (hermite.weights[i] * inv_sqrt_pi);
    }
    return acc;
}

}  // namespace labelshift
