#pragma once

#include "labelshift/moments.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string_view>
#include <vector>

namespace labelshift {

enum class CategoricalMethod { E1, E2 };

std::string_view to_string(CategoricalMethod method);

struct CategoricalWeightEstimate {
    Eigen::VectorXd theta_hat;
    Eigen::VectorXd omega_hat;  // 1 + theta_hat, never clipped
    CategoricalMethod method = CategoricalMethod::E1;

    double smallest_singular_value = 0.0;  // of T_hat
    double pinv_norm = 0.0;                // |T_hat^+| = 1 / smallest singular value
    std::optional<bool> burn_in_ok;

    // E2 only.
    double objective = 0.0;  // |T theta - b| + delta_T |theta| at theta_hat
    int iterations = 0;
    std::vector<double> objective_trace;  // smoothed objective per iteration
    double theta_cap = 0.0;
    bool exceeds_cap = false;
};

/// Singular values of T_hat in decreasing order.
Eigen::VectorXd singular_values(const Eigen::MatrixXd& T);

/// theta = T_hat^+ (q_hat - p_hat) by SVD. Singular values below
/// 1e-12 * sigma_max count as zero; any such value raises SingularOperator.
CategoricalWeightEstimate e1_direct(const MomentEstimates& mom);

struct E2Options {
    double tolerance = 1e-10;  // on the successive objective change
    int max_iterations = 100000;
    bool record_trace = true;
};

/// argmin_theta |T_hat theta - (q_hat - p_hat)| + delta_T |theta| with
/// unsquared Euclidean norms. Solved by monotone accelerated proximal gradient
/// on sqrt(|r|^2 + mu^2) with mu driven towards zero, plus the block
/// soft-threshold prox of delta_T |.|.
CategoricalWeightEstimate e2_regularized(const MomentEstimates& mom, double delta_T,
                                         double theta_cap, const E2Options& opts = {});

/// The unsmoothed E2 objective.
double e2_objective(const Eigen::MatrixXd& T, const Eigen::VectorXd& b, double delta_T,
                    const Eigen::VectorXd& theta);

/// (32 / alpha) |T^+|^2 d ln(6 (d + k) / delta); infinite for an infinite norm.
double burn_in_required_categorical(double pinv_norm, int d, int k, double alpha, double delta);

bool check_burn_in_categorical(double pinv_norm, int d, int k, double alpha, std::size_t n,
                               double delta);

/// Uses the empirical |T_hat^+| in place of the unknown population norm.
bool check_burn_in_categorical(const MomentEstimates& mom, double alpha, std::size_t n,
                               double delta);

}  // namespace labelshift
