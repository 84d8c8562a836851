#pragma once

#include "labelshift/datagen.hpp"
#include "labelshift/dataset.hpp"
#include "labelshift/gaussian_kernel.hpp"
#include "labelshift/predictors.hpp"

#include <Eigen/Dense>

namespace labelshift {

/// Empirical (or population) confusion moments of a statistic g:
///   q = E_Q[g(X)],  p = E_P[g(X)],  T = E_P[g(X) e_Y^T]  (d x k).
/// Counts are zero for population moments.
struct MomentEstimates {
    Eigen::MatrixXd T_hat;
    Eigen::VectorXd p_hat;
    Eigen::VectorXd q_hat;
    std::size_t n_est = 0;
    std::size_t m = 0;
    /// Frobenius standard error of T_hat as a sample mean of g(x_i) e_{y_i}^T;
    /// zero for population moments.
    double T_standard_error = 0.0;

    Eigen::Index d() const noexcept { return T_hat.rows(); }
    Eigen::Index k() const noexcept { return T_hat.cols(); }
    Eigen::VectorXd shift() const { return q_hat - p_hat; }
};

/// Moments from precomputed statistic outputs (rows are g(x_i)).
MomentEstimates categorical_moments_from_outputs(const Eigen::MatrixXd& source_outputs,
                                                 const std::vector<ClassLabel>& labels,
                                                 const Eigen::MatrixXd& target_outputs,
                                                 int num_classes);

MomentEstimates estimate_categorical_moments(const LabeledSamples<ClassLabel>& est_split,
                                             const Eigen::MatrixXd& target_x, const StatisticFn& g,
                                             int num_classes);

/// Exact moments under the synthetic categorical generator: the class
/// conditional means E[g(X) | Y = j] are integrated by Gauss-Hermite
/// quadrature of g over N(center_j, noise_std^2).
MomentEstimates population_categorical_moments(const CategoricalSynthConfig& cfg,
                                               const StatisticFn& g, int quadrature_order = 80);

/// Span-coordinate representation of (T_u, p_u, q_u) for a Gaussian RKHS on
/// scalar labels. Anchors are the estimation-split labels y_i; source and
/// target images are u(x_i) and u(x'_l).
///
/// The source blocks are stored densely. The target blocks only enter the
/// estimators through G_ut 1_m and 1^T G_tt 1, which are accumulated without
/// materialising the m x m block; `cross_gram()` / `target_gram()` build the
/// full blocks on demand.
struct KernelMoments {
    GaussianKernel kernel{1.0};
    Eigen::VectorXd anchors;
    Eigen::VectorXd source_images;
    Eigen::VectorXd target_images;
    Eigen::MatrixXd K_yy;
    Eigen::MatrixXd G_uu;
    Eigen::VectorXd G_ut_row_sums;  // G_ut 1_m
    double G_tt_sum = 0.0;          // 1^T G_tt 1
    double kappa_bar = 1.0;

    Eigen::Index N() const noexcept { return anchors.size(); }
    Eigen::Index m() const noexcept { return target_images.size(); }

    Eigen::MatrixXd cross_gram() const { return kernel.gram(source_images, target_images); }
    Eigen::MatrixXd target_gram() const { return kernel.gram(target_images); }
};

KernelMoments kernel_moments_from_images(const Eigen::VectorXd& anchors,
                                         const Eigen::VectorXd& source_images,
                                         const Eigen::VectorXd& target_images, double bandwidth);

KernelMoments estimate_kernel_moments(const LabeledSamples<RealLabel>& est_split,
                                      const Eigen::MatrixXd& target_x, const StatisticFn& u,
                                      double bandwidth);

}  // namespace labelshift
