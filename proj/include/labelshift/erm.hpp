#pragma once

#include "labelshift/dataset.hpp"
#include "labelshift/functional_estimators.hpp"
#include "labelshift/predictors.hpp"

#include <Eigen/Dense>

#include <string_view>

namespace labelshift {

enum class ErmFamily { Logistic, KernelRidge };

std::string_view to_string(ErmFamily family);

/// 1 + gamma theta_hat (per class).
Eigen::VectorXd blend_gamma(const Eigen::VectorXd& theta_hat, double gamma);

/// 1 + gamma theta_hat(y) at each label in ys.
Eigen::VectorXd blend_gamma(const FunctionalWeightEstimate& est, double gamma,
                            const Eigen::VectorXd& ys);

/// argmin over gamma in {0, 1} of gamma * epsilon + (1 - gamma) * theta_max; ties pick 0.
double choose_gamma(double epsilon_delta, double theta_max);

struct WeightedERMResult {
    StatisticFn model;
    double gamma = 0.0;
    double train_weighted_risk = 0.0;  // mean of omega_i * bounded loss
    std::size_t clamped_weights = 0;   // negative weights set to zero
};

struct ErmOptions {
    LogisticOptions logistic;
    double kernel_bandwidth = 0.9;
    double kernel_ridge = 1e-2;
    KernelRegressorOptions kernel;
};

/// Bounded losses in [0, 1]: 0-1 loss for classes, squared error clipped at 1
/// for real labels.
double zero_one_loss(ClassLabel y, ClassLabel prediction);
double clipped_squared_loss(RealLabel y, RealLabel prediction);

/// Logistic ERM with per-class weights omega_hat_gamma[y_i]. Negative weights
/// are clamped to zero (with a warning); an all-zero weighting is an error.
WeightedERMResult weighted_erm(const LabeledSamples<ClassLabel>& erm_split,
                               const Eigen::VectorXd& class_weights, int num_classes,
                               double gamma = 1.0, const ErmOptions& opts = {});

/// Kernel ridge ERM with per-sample weights omega_hat_gamma(y_i).
WeightedERMResult weighted_erm(const LabeledSamples<RealLabel>& erm_split,
                               const Eigen::VectorXd& sample_weights, double gamma = 1.0,
                               const ErmOptions& opts = {});

/// (1/n) sum_i w_i * loss(y_i, f(x_i)).
double weighted_risk(const StatisticFn& model, const LabeledSamples<ClassLabel>& samples,
                     const Eigen::VectorXd& sample_weights);
double weighted_risk(const StatisticFn& model, const LabeledSamples<RealLabel>& samples,
                     const Eigen::VectorXd& sample_weights);

/// Mean bounded loss against retained target labels (synthetic data only).
double oracle_target_risk(const StatisticFn& model, const Eigen::MatrixXd& target_x,
                          const std::vector<ClassLabel>& target_labels);
double oracle_target_risk(const StatisticFn& model, const Eigen::MatrixXd& target_x,
                          const std::vector<RealLabel>& target_labels);

}  // namespace labelshift
