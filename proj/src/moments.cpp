#include "labelshift/moments.hpp"

#include "labelshift/error.hpp"
#include "labelshift/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace labelshift {

MomentEstimates categorical_moments_from_outputs(const Eigen::MatrixXd& source_outputs,
                                                 const std::vector<ClassLabel>& labels,
                                                 const Eigen::MatrixXd& target_outputs,
                                                 int num_classes) {
    if (source_outputs.rows() == 0) throw ConfigError("estimation split is empty");
    if (target_outputs.rows() == 0) throw ConfigError("target sample is empty");
    if (static_cast<std::size_t>(source_outputs.rows()) != labels.size()) {
        throw ConfigError("one label per source output row required");
    }
    if (source_outputs.cols() != target_outputs.cols()) {
        throw ConfigError("source and target statistic dimensions differ");
    }
    const Eigen::Index d = source_outputs.cols();
    const double n = static_cast<double>(source_outputs.rows());

    MomentEstimates mom;
    mom.T_hat = Eigen::MatrixXd::Zero(d, num_classes);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const int y = labels[i];
        if (y < 0 || y >= num_classes) {
            throw ConfigError("label " + std::to_string(y) + " is not below k = " +
                              std::to_string(num_classes));
        }
        mom.T_hat.col(y) += source_outputs.row(static_cast<Eigen::Index>(i)).transpose();
    }
    mom.T_hat /= n;
    // sum_i |g_i e_{y_i}^T - T_hat|_F^2 = sum_i |g_i|^2 - n |T_hat|_F^2.
    if (n > 1.0) {
        const double spread = source_outputs.squaredNorm() / n - mom.T_hat.squaredNorm();
        mom.T_standard_error = std::sqrt(std::max(spread, 0.0) / (n - 1.0));
    }
    mom.p_hat = source_outputs.colwise().mean().transpose();
    mom.q_hat = target_outputs.colwise().mean().transpose();
    mom.n_est = labels.size();
    mom.m = static_cast<std::size_t>(target_outputs.rows());
    return mom;
}

MomentEstimates estimate_categorical_moments(const LabeledSamples<ClassLabel>& est_split,
                                             const Eigen::MatrixXd& target_x, const StatisticFn& g,
                                             int num_classes) {
    if (est_split.empty()) throw ConfigError("estimation split is empty");
    if (target_x.rows() == 0) throw ConfigError("target sample is empty");
    return categorical_moments_from_outputs(g.evaluate(est_split.x), est_split.y,
                                            g.evaluate(target_x), num_classes);
}

MomentEstimates population_categorical_moments(const CategoricalSynthConfig& cfg,
                                               const StatisticFn& g, int quadrature_order) {
    validate(cfg);
    const int k = cfg.num_classes;
    const Eigen::VectorXd P = source_label_distribution(cfg);
    const Eigen::VectorXd Q = target_label_distribution(cfg);
    const QuadratureRule rule = gauss_hermite(quadrature_order);

    // Conditional means E[g(X) | Y = j], one column per class, from a single
    // batched evaluation of g at all quadrature points.
    const Eigen::Index nodes = rule.nodes.size();
    Eigen::MatrixXd pts(nodes * k, 1);
    for (int j = 0; j < k; ++j) {
        for (Eigen::Index i = 0; i < nodes; ++i) {
            pts(j * nodes + i, 0) = class_center(cfg, j) + cfg.noise_std * M_SQRT2 * rule.nodes[i];
        }
    }
    const Eigen::MatrixXd out = g.evaluate(pts);
    const Eigen::VectorXd wq = rule.weights / std::sqrt(M_PI);
    Eigen::MatrixXd cond(out.cols(), k);
    for (int j = 0; j < k; ++j) {
        cond.col(j) = out.middleRows(j * nodes, nodes).transpose() * wq;
    }

    MomentEstimates mom;
    mom.T_hat = cond * P.asDiagonal();
    mom.p_hat = cond * P;
    mom.q_hat = cond * Q;
    return mom;
}

KernelMoments kernel_moments_from_images(const Eigen::VectorXd& anchors,
                                         const Eigen::VectorXd& source_images,
                                         const Eigen::VectorXd& target_images, double bandwidth) {
    if (anchors.size() == 0) throw ConfigError("estimation split is empty");
    if (target_images.size() == 0) throw ConfigError("target sample is empty");
    if (anchors.size() != source_images.size()) {
        throw ConfigError("one source image per anchor label required");
    }
    KernelMoments km;
    km.kernel = GaussianKernel(bandwidth);
    km.anchors = anchors;
    km.source_images = source_images;
    km.target_images = target_images;
    km.K_yy = km.kernel.gram(anchors);
    km.G_uu = km.kernel.gram(source_images);
    km.G_ut_row_sums = km.kernel.row_sums(source_images, target_images);
    km.G_tt_sum = km.kernel.row_sums(target_images, target_images).sum();
    km.kappa_bar = km.kernel.sup_value();
    return km;
}

KernelMoments estimate_kernel_moments(const LabeledSamples<RealLabel>& est_split,
                                      const Eigen::MatrixXd& target_x, const StatisticFn& u,
                                      double bandwidth) {
    if (!(bandwidth > 0.0)) throw ConfigError("kernel bandwidth must be positive");
    if (est_split.empty()) throw ConfigError("estimation split is empty");
    if (target_x.rows() == 0) throw ConfigError("target sample is empty");
    const Eigen::Map<const Eigen::VectorXd> anchors(est_split.y.data(),
                                                    static_cast<Eigen::Index>(est_split.y.size()));
    return kernel_moments_from_images(anchors, u.evaluate_scalar(est_split.x),
                                      u.evaluate_scalar(target_x), bandwidth);
}

}  // namespace labelshift
