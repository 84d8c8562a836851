#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>

namespace labelshift {

enum class EstimationPath { Categorical, Functional };

/// High-probability bounds on |p - p_hat|, |q - q_hat| and |T - T_hat|, each
/// holding with probability at least 1 - delta on its own.
struct Radii {
    double delta_p = 0.0;
    double delta_q = 0.0;
    double delta_T = 0.0;
};

/// Vector/matrix Hoeffding radii for a statistic with values in [-1, 1]^d:
///   dp = sqrt(d/(a n) ln(2d/delta)),  dq = sqrt(d/m ln(2d/delta)),
///   dT = 2 sqrt(2d/(a n) ln(2(d+k)/delta)).
Radii categorical_radii(int d, int k, double alpha, std::size_t n, std::size_t m, double delta);

/// Hilbert-space radii for a kernel bounded by kappa_bar:
///   dp = dT = 2 kbar sqrt(2/(a n) ln(2/delta)),  dq = 2 kbar sqrt(2/m ln(2/delta)).
Radii functional_radii(double alpha, std::size_t n, std::size_t m, double delta, double kappa_bar);

/// 2 * proxy * (dq + dp + theta_max dT). Pass radii evaluated at delta/3 to
/// obtain the union-bounded error radius at confidence 1 - delta.
double composite_epsilon(const Radii& radii, double inverse_norm_proxy, double theta_max);

struct ConfidenceReport {
    EstimationPath path = EstimationPath::Categorical;
    double delta = 0.1;
    Radii radii;  // each at delta / 3
    double epsilon_delta = 0.0;

    int d = 0;
    int k = 0;
    double alpha = 1.0;
    std::size_t n = 0;
    std::size_t m = 0;
    double kappa_bar = 1.0;
    double theta_max = 0.0;
    double inverse_norm_proxy = 0.0;
};

ConfidenceReport categorical_confidence(int d, int k, double alpha, std::size_t n, std::size_t m,
                                        double delta, double inverse_norm_proxy, double theta_max);

ConfidenceReport functional_confidence(double alpha, std::size_t n, std::size_t m, double delta,
                                       double kappa_bar, double inverse_norm_proxy,
                                       double theta_max);

/// Exponentiated infinite- and second-order Renyi divergences of Q_Y from P_Y:
/// d_inf = ess sup omega, d = E_P[omega^2].
struct DivergenceReport {
    double d_inf = 1.0;
    double d_second = 1.0;
};

DivergenceReport divergence_report(const Eigen::VectorXd& omega, const Eigen::VectorXd& source_probs);

/// Functional version on [0, 1]: sup over the uniform 100-point grid and
/// E_P[omega^2] by Gauss-Legendre quadrature against the source density.
DivergenceReport divergence_report(const std::function<double(double)>& omega,
                                   const std::function<double(double)>& source_density);

}  // namespace labelshift
