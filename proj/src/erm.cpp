#include "labelshift/erm.hpp"

#include "labelshift/error.hpp"
#include "labelshift/log.hpp"

#include <cmath>
#include <string>

namespace labelshift {

std::string_view to_string(ErmFamily family) {
    return family == ErmFamily::Logistic ? "logistic" : "kernel_ridge";
}

namespace {

void check_gamma(double gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in [0, 1]");
}

// Clamps negative entries to zero; rejects non-finite and all-zero weights.
Eigen::VectorXd clamp_weights(const Eigen::VectorXd& w, std::size_t* clamped) {
    if (!w.allFinite()) throw ConfigError("ERM weights must be finite");
    Eigen::VectorXd out = w;
    std::size_t count = 0;
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        if (out[i] < 0.0) {
            out[i] = 0.0;
            ++count;
        }
    }
    if (count > 0) {
        log::warn("clamped " + std::to_string(count) + " negative importance weight(s) to zero");
    }
    if (!(out.sum() > 0.0)) throw ConfigError("ERM weights are all zero");
    *clamped = count;
    return out;
}

}  // namespace

Eigen::VectorXd blend_gamma(const Eigen::VectorXd& theta_hat, double gamma) {
    check_gamma(gamma);
    if (gamma == 0.0) return Eigen::VectorXd::Ones(theta_hat.size());
    return (gamma * theta_hat).array() + 1.0;
}

Eigen::VectorXd blend_gamma(const FunctionalWeightEstimate& est, double gamma,
                            const Eigen::VectorXd& ys) {
    return evaluate_weight(est, gamma, ys);
}

double choose_gamma(double epsilon_delta, double theta_max) {
    return epsilon_delta < theta_max ? 1.0 : 0.0;
}

double zero_one_loss(ClassLabel y, ClassLabel prediction) { return y == prediction ? 0.0 : 1.0; }

double clipped_squared_loss(RealLabel y, RealLabel prediction) {
    const double e = y - prediction;
    return std::min(e * e, 1.0);
}

WeightedERMResult weighted_erm(const LabeledSamples<ClassLabel>& erm_split,
                               const Eigen::VectorXd& class_weights, int num_classes,
                               double gamma, const ErmOptions& opts) {
    check_gamma(gamma);
    if (erm_split.empty()) throw ConfigError("ERM split is empty");
    if (class_weights.size() != num_classes) {
        throw ConfigError("expected " + std::to_string(num_classes) + " class weights, got " +
                          std::to_string(class_weights.size()));
    }
    std::size_t clamped = 0;
    const Eigen::VectorXd cw = clamp_weights(class_weights, &clamped);
    Eigen::VectorXd sw(static_cast<Eigen::Index>(erm_split.size()));
    for (std::size_t i = 0; i < erm_split.size(); ++i) {
        const ClassLabel y = erm_split.y[i];
        if (y < 0 || y >= num_classes) {
            throw ConfigError("label " + std::to_string(y) + " outside [0, " +
                              std::to_string(num_classes) + ")");
        }
        sw[static_cast<Eigen::Index>(i)] = cw[y];
    }
    if (!(sw.sum() > 0.0)) throw ConfigError("ERM weights are zero on every training sample");
    StatisticFn model = train_simplex(erm_split, num_classes, opts.logistic, sw);
    const double risk = weighted_risk(model, erm_split, sw);
    return WeightedERMResult{std::move(model), gamma, risk, clamped};
}

WeightedERMResult weighted_erm(const LabeledSamples<RealLabel>& erm_split,
                               const Eigen::VectorXd& sample_weights, double gamma,
                               const ErmOptions& opts) {
    check_gamma(gamma);
    if (erm_split.empty()) throw ConfigError("ERM split is empty");
    if (static_cast<std::size_t>(sample_weights.size()) != erm_split.size()) {
        throw ConfigError("one weight per ERM sample required");
    }
    std::size_t clamped = 0;
    const Eigen::VectorXd sw = clamp_weights(sample_weights, &clamped);
    StatisticFn model = train_kernel_regressor(erm_split, opts.kernel_bandwidth, opts.kernel_ridge,
                                               opts.kernel, sw);
    const double risk = weighted_risk(model, erm_split, sw);
    return WeightedERMResult{std::move(model), gamma, risk, clamped};
}

double weighted_risk(const StatisticFn& model, const LabeledSamples<ClassLabel>& samples,
                     const Eigen::VectorXd& sample_weights) {
    if (samples.empty()) throw ConfigError("cannot evaluate risk on an empty sample");
    if (static_cast<std::size_t>(sample_weights.size()) != samples.size()) {
        throw ConfigError("one weight per sample required");
    }
    const std::vector<ClassLabel> pred = model.predict_class(samples.x);
    double total = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        total += sample_weights[static_cast<Eigen::Index>(i)] * zero_one_loss(samples.y[i], pred[i]);
    }
    return total / static_cast<double>(samples.size());
}

double weighted_risk(const StatisticFn& model, const LabeledSamples<RealLabel>& samples,
                     const Eigen::VectorXd& sample_weights) {
    if (samples.empty()) throw ConfigError("cannot evaluate risk on an empty sample");
    if (static_cast<std::size_t>(sample_weights.size()) != samples.size()) {
        throw ConfigError("one weight per sample required");
    }
    const Eigen::VectorXd pred = model.evaluate_scalar(samples.x);
    double total = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        total += sample_weights[ii] * clipped_squared_loss(samples.y[i], pred[ii]);
    }
    return total / static_cast<double>(samples.size());
}

double oracle_target_risk(const StatisticFn& model, const Eigen::MatrixXd& target_x,
                          const std::vector<ClassLabel>& target_labels) {
    if (target_labels.empty()) throw ConfigError("oracle target set is empty");
    if (static_cast<std::size_t>(target_x.rows()) != target_labels.size()) {
        throw ConfigError("one oracle label per target row required");
    }
    LabeledSamples<ClassLabel> s{target_x, target_labels};
    return weighted_risk(model, s, Eigen::VectorXd::Ones(target_x.rows()));
}

double oracle_target_risk(const StatisticFn& model, const Eigen::MatrixXd& target_x,
                          const std::vector<RealLabel>& target_labels) {
    if (target_labels.empty()) throw ConfigError("oracle target set is empty");
    if (static_cast<std::size_t>(target_x.rows()) != target_labels.size()) {
        throw ConfigError("one oracle label per target row required");
    }
    LabeledSamples<RealLabel> s{target_x, target_labels};
    return weighted_risk(model, s, Eigen::VectorXd::Ones(target_x.rows()));
}

}  // namespace labelshift
