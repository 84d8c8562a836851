#pragma once

#include "labelshift/dataset.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>

namespace labelshift {

/// Categorical label-shift generator. Source label masses are 1/k on even
/// classes and 3/k on odd classes (normalised); the target swaps the roles.
/// Covariates are one-dimensional: x = c + noise_std * N(0, 1) for class c.
struct CategoricalSynthConfig {
    int num_classes = 4;
    double noise_std = 0.5;
    std::uint64_t seed = 0;
    /// Test override: give the target the same label masses as the source.
    bool no_shift = false;
};

/// Regression label-shift generator on y in [0, 1]: source density
/// 1 - a + 2 a y, target density 1 - b + 2 b y, x = y + noise_std * N(0, 1).
struct RegressionSynthConfig {
    double a = 0.2;
    double b = 0.8;
    double noise_std = 0.1;
    std::uint64_t seed = 0;
};

void validate(const CategoricalSynthConfig& cfg);
void validate(const RegressionSynthConfig& cfg);

/// P_Y and Q_Y of the categorical generator.
Eigen::VectorXd source_label_distribution(const CategoricalSynthConfig& cfg);
Eigen::VectorXd target_label_distribution(const CategoricalSynthConfig& cfg);

/// Covariate centre of class c.
double class_center(const CategoricalSynthConfig& cfg, int c);

Dataset<ClassLabel> gen_categorical(const CategoricalSynthConfig& cfg, std::size_t n, std::size_t m);
Dataset<RealLabel> gen_regression(const RegressionSynthConfig& cfg, std::size_t n, std::size_t m);

/// Analytic importance weights Q_Y / P_Y.
Eigen::VectorXd true_weight_categorical(const CategoricalSynthConfig& cfg);
/// Analytic importance weight (2by + 1 - b) / (2ay + 1 - a).
std::function<double(double)> true_weight_function(const RegressionSynthConfig& cfg);

/// Tilted density 1 - t + 2 t y on [0, 1], its CDF (1 - t) y + t y^2 and the
/// inverse CDF (root of the quadratic in [0, 1]; y = u as t -> 0).
double tilted_density(double tilt, double y);
double tilted_cdf(double tilt, double y);
double tilted_inverse_cdf(double tilt, double u);

/// Draws `count` labels from the tilted density with a seeded engine.
Eigen::VectorXd sample_tilted(double tilt, std::size_t count, std::uint64_t seed);

}  // namespace labelshift
