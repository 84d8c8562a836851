#pragma once

#include "labelshift/dataset.hpp"
#include "labelshift/gaussian_kernel.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string_view>
#include <variant>

namespace labelshift {

enum class StatisticMode { Simplex, HyperCube, KernelRegressor };

std::string_view to_string(StatisticMode mode);
StatisticMode parse_statistic_mode(std::string_view text);

/// Label-free-in-form covariate embedding shared by the linear models:
/// [1, standardised x, standardised RBF bumps at the per-class covariate
/// means]. Only classes with positive total weight contribute a bump, so a
/// zero-weight class is indistinguishable from an absent one.
class FeatureMap {
public:
    static FeatureMap fit(const Eigen::MatrixXd& x, const std::vector<ClassLabel>& y,
                          const Eigen::VectorXd& weights, int num_classes);

    /// Rows of the result are feature vectors; column 0 is the constant 1.
    Eigen::MatrixXd transform(const Eigen::MatrixXd& x) const;

    Eigen::Index dim() const noexcept { return 1 + mean_.size(); }
    Eigen::Index input_dim() const noexcept { return input_dim_; }
    const Eigen::MatrixXd& centers() const noexcept { return centers_; }
    double bandwidth() const noexcept { return bandwidth_; }

private:
    Eigen::MatrixXd raw(const Eigen::MatrixXd& x) const;

    Eigen::Index input_dim_ = 0;
    Eigen::MatrixXd centers_;
    double bandwidth_ = 1.0;
    Eigen::RowVectorXd mean_;
    Eigen::RowVectorXd scale_;
};

struct LogisticOptions {
    double l2 = 1e-3;
    int max_iter = 20000;
    double grad_tol = 1e-7;
};

struct HyperCubeOptions {
    double jitter = 1e-8;
};

struct KernelRegressorOptions {
    /// Training points beyond this count are thinned by a fixed stride.
    std::size_t max_train = 1000;
};

/// A trained statistic g (categorical) or u (regression). Immutable once built.
class StatisticFn {
public:
    struct Linear {
        FeatureMap features;
        Eigen::MatrixXd weights;  // features.dim() x output_dim
    };
    struct Kernel {
        GaussianKernel kernel{1.0};
        Eigen::MatrixXd centers;  // training covariates (rows)
        Eigen::VectorXd coef;
        double offset = 0.0;
    };

    StatisticFn(StatisticMode mode, Linear model);
    StatisticFn(Kernel model);

    StatisticMode mode() const noexcept { return mode_; }
    int output_dim() const noexcept { return output_dim_; }

    /// Row i of the result is the statistic evaluated at row i of x.
    Eigen::MatrixXd evaluate(const Eigen::MatrixXd& x) const;
    Eigen::VectorXd operator()(const Eigen::VectorXd& x) const;

    /// Scalar outputs for the regression statistic (output_dim == 1).
    Eigen::VectorXd evaluate_scalar(const Eigen::MatrixXd& x) const;

    /// Class with the largest output per row.
    std::vector<ClassLabel> predict_class(const Eigen::MatrixXd& x) const;

    const std::variant<Linear, Kernel>& model() const noexcept { return model_; }

private:
    StatisticMode mode_;
    int output_dim_;
    std::variant<Linear, Kernel> model_;
};

/// Throws ConfigError naming the first class in [0, k) with no sample.
void require_all_classes(const std::vector<ClassLabel>& y, int num_classes);

/// Multinomial logistic model on the feature map, fit by accelerated gradient
/// descent on (optionally weighted) cross-entropy. Output on the simplex.
StatisticFn train_simplex(const LabeledSamples<ClassLabel>& train, int num_classes,
                          const LogisticOptions& opts = {},
                          const std::optional<Eigen::VectorXd>& sample_weights = std::nullopt);

/// Least squares onto one-hot targets (closed form), outputs clipped to [-1, 1]^k.
StatisticFn train_hypercube(const LabeledSamples<ClassLabel>& train, int num_classes,
                            const HyperCubeOptions& opts = {});

/// Gaussian kernel ridge regression u(x) = ybar + k_x^T (K + ridge I)^{-1} (y - ybar).
StatisticFn train_kernel_regressor(const LabeledSamples<RealLabel>& train, double bandwidth,
                                   double ridge, const KernelRegressorOptions& opts = {},
                                   const std::optional<Eigen::VectorXd>& sample_weights = std::nullopt);

}  // namespace labelshift
