#pragma once

#include "labelshift/gaussian_kernel.hpp"
#include "labelshift/moments.hpp"

#include <Eigen/Dense>

#include <string_view>

namespace labelshift {

enum class FunctionalMethod { E3, E4 };

std::string_view to_string(FunctionalMethod method);

/// theta_hat(y) = sum_j beta_j k(y_j, y) over the anchor labels y_j.
struct FunctionalWeightEstimate {
    Eigen::VectorXd beta;
    Eigen::VectorXd anchors;
    GaussianKernel kernel{1.0};
    FunctionalMethod method = FunctionalMethod::E4;
    double lambda_used = 0.0;
    double rkhs_norm = 0.0;  // sqrt(beta^T K_yy beta)

    // Diagnostics on the sample span. The operator-inverse-norm proxy is
    // 1 / (smallest retained singular value of T_hat_u restricted to the span).
    double condition_number = 0.0;
    double op_inv_norm_proxy = 0.0;
    double jitter_used = 0.0;
    Eigen::Index span_rank = 0;
    Eigen::Index discarded = 0;  // eigenvalues dropped by E3 truncation
    bool low_rank = false;
};

struct FunctionalSolveOptions {
    enum class Route { Auto, Dense, LowRank };
    Route route = Route::Auto;
    /// Auto picks the dense N x N solve up to this many anchors.
    Eigen::Index dense_max = 400;
    /// Pivoted Cholesky of K_yy stops once every residual diagonal is below this.
    double factor_tolerance = 1e-12;
};

/// Minimises J(beta) = |T_hat theta - q_hat + p_hat|^2 + lambda |theta|^2 over
/// theta in the span of the anchor sections. The dense route solves
///   (A G A + lambda K + jitter I) beta = A (G_ut 1 / m - G 1 / N),  A = K / N,
/// with jitter escalating from 1e-12 by factors of 10 up to 1e-8 trace. The
/// low-rank route factors K = L L^T by pivoted Cholesky and solves the same
/// stationarity conditions restricted to range(L).
FunctionalWeightEstimate e4_regularized(const KernelMoments& km, double lambda,
                                        const FunctionalSolveOptions& opts = {});

/// lambda = 0 with eigenvalues of A G A below 1e-10 * max discarded.
FunctionalWeightEstimate e3_direct(const KernelMoments& km, const FunctionalSolveOptions& opts = {});

/// theta_hat(y) at each query label.
Eigen::VectorXd evaluate_theta(const FunctionalWeightEstimate& est, const Eigen::VectorXd& ys);

/// 1 + gamma theta_hat(y).
Eigen::VectorXd evaluate_weight(const FunctionalWeightEstimate& est, double gamma,
                                const Eigen::VectorXd& ys);

/// |T_hat theta - q_hat + p_hat|^2_H for theta = sum_j beta_j k(y_j, .).
double functional_residual_sq(const KernelMoments& km, const Eigen::VectorXd& beta);

double e4_objective(const KernelMoments& km, double lambda, const Eigen::VectorXd& beta);
Eigen::VectorXd e4_gradient(const KernelMoments& km, double lambda, const Eigen::VectorXd& beta);

/// (32 / alpha) proxy^2 kappa_bar^2 ln(6 / delta).
double burn_in_required_functional(double alpha, double delta, double kappa_bar,
                                   double op_inv_norm_proxy);

bool check_burn_in_functional(std::size_t n, double alpha, double delta, double kappa_bar,
                              double op_inv_norm_proxy);

}  // namespace labelshift
