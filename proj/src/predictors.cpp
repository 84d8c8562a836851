#include "labelshift/predictors.hpp"

#include "labelshift/error.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace labelshift {

std::string_view to_string(StatisticMode mode) {
    switch (mode) {
        case StatisticMode::Simplex: return "simplex";
        case StatisticMode::HyperCube: return "hypercube";
        case StatisticMode::KernelRegressor: return "kernel";
    }
    return "unknown";
}

StatisticMode parse_statistic_mode(std::string_view text) {
    if (text == "simplex") return StatisticMode::Simplex;
    if (text == "hypercube") return StatisticMode::HyperCube;
    if (text == "kernel" || text == "kernel_regressor") return StatisticMode::KernelRegressor;
    throw ConfigError("unknown statistic_mode '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// FeatureMap

FeatureMap FeatureMap::fit(const Eigen::MatrixXd& x, const std::vector<ClassLabel>& y,
                           const Eigen::VectorXd& w, int num_classes) {
    if (x.rows() == 0) throw ConfigError("FeatureMap::fit: empty training set");
    FeatureMap fm;
    fm.input_dim_ = x.cols();

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(num_classes, x.cols());
    Eigen::VectorXd mass = Eigen::VectorXd::Zero(num_classes);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const int c = y[static_cast<std::size_t>(i)];
        sums.row(c) += w[i] * x.row(i);
        mass[c] += w[i];
    }
    std::vector<Eigen::Index> present;
    for (int c = 0; c < num_classes; ++c) {
        if (mass[c] > 0.0) present.push_back(c);
    }
    fm.centers_.resize(static_cast<Eigen::Index>(present.size()), x.cols());
    for (std::size_t r = 0; r < present.size(); ++r) {
        fm.centers_.row(static_cast<Eigen::Index>(r)) = sums.row(present[r]) / mass[present[r]];
    }

    // Bandwidth: median nearest-neighbour distance between centres; falls back
    // to the weighted covariate spread when the centres coincide.
    std::vector<double> nn;
    for (Eigen::Index a = 0; a < fm.centers_.rows(); ++a) {
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index b = 0; b < fm.centers_.rows(); ++b) {
            if (a != b) best = std::min(best, (fm.centers_.row(a) - fm.centers_.row(b)).norm());
        }
        if (std::isfinite(best)) nn.push_back(best);
    }
    double h = 0.0;
    if (!nn.empty()) {
        std::nth_element(nn.begin(), nn.begin() + static_cast<std::ptrdiff_t>(nn.size() / 2), nn.end());
        h = nn[nn.size() / 2];
    }
    if (!(h > 1e-12)) {
        const double total = w.sum();
        const Eigen::RowVectorXd mu = (w.asDiagonal() * x).colwise().sum() / total;
        const double var = (w.asDiagonal() * (x.rowwise() - mu).rowwise().squaredNorm().matrix()).sum() / total;
        h = var > 1e-24 ? std::sqrt(var) : 1.0;
    }
    fm.bandwidth_ = h;

    const Eigen::MatrixXd phi = fm.raw(x);
    const double total = w.sum();
    fm.mean_ = (w.transpose() * phi) / total;
    const Eigen::MatrixXd centred = phi.rowwise() - fm.mean_;
    const Eigen::RowVectorXd var = (w.transpose() * centred.cwiseAbs2()) / total;
    fm.scale_ = var.unaryExpr([](double v) { return v > 1e-24 ? std::sqrt(v) : 1.0; });
    return fm;
}

Eigen::MatrixXd FeatureMap::raw(const Eigen::MatrixXd& x) const {
    if (x.cols() != input_dim_) throw ConfigError("FeatureMap: covariate dimension mismatch");
    Eigen::MatrixXd phi(x.rows(), input_dim_ + centers_.rows());
    phi.leftCols(input_dim_) = x;
    if (centers_.rows() > 0) {
        phi.rightCols(centers_.rows()) = GaussianKernel(bandwidth_).gram_rows(x, centers_);
    }
    return phi;
}

Eigen::MatrixXd FeatureMap::transform(const Eigen::MatrixXd& x) const {
    Eigen::MatrixXd out(x.rows(), dim());
    out.col(0).setOnes();
    out.rightCols(dim() - 1) =
        ((raw(x).rowwise() - mean_).array().rowwise() / scale_.array()).matrix();
    return out;
}

// ---------------------------------------------------------------------------
// StatisticFn

StatisticFn::StatisticFn(StatisticMode mode, Linear model)
    : mode_(mode), output_dim_(static_cast<int>(model.weights.cols())), model_(std::move(model)) {
    if (mode == StatisticMode::KernelRegressor) {
        throw ConfigError("linear model cannot carry the kernel-regressor mode");
    }
}

StatisticFn::StatisticFn(Kernel model)
    : mode_(StatisticMode::KernelRegressor), output_dim_(1), model_(std::move(model)) {}

namespace {

void softmax_rows(Eigen::MatrixXd& z) {
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
        const double mx = z.row(i).maxCoeff();
        z.row(i) = (z.row(i).array() - mx).exp();
        z.row(i) /= z.row(i).sum();
    }
}

}  // namespace

Eigen::MatrixXd StatisticFn::evaluate(const Eigen::MatrixXd& x) const {
    if (const auto* lin = std::get_if<Linear>(&model_)) {
        Eigen::MatrixXd z = lin->features.transform(x) * lin->weights;
        if (mode_ == StatisticMode::Simplex) {
            softmax_rows(z);
        } else {
            z = z.cwiseMax(-1.0).cwiseMin(1.0);
        }
        return z;
    }
    return evaluate_scalar(x);
}

Eigen::VectorXd StatisticFn::evaluate_scalar(const Eigen::MatrixXd& x) const {
    const auto* ker = std::get_if<Kernel>(&model_);
    if (ker == nullptr) throw ConfigError("evaluate_scalar needs the kernel-regressor statistic");
    Eigen::VectorXd out;
    if (x.cols() == 1) {
        out = ker->kernel.weighted_sums(Eigen::VectorXd(x.col(0)),
                                        Eigen::VectorXd(ker->centers.col(0)), ker->coef);
    } else {
        out = ker->kernel.gram_rows(x, ker->centers) * ker->coef;
    }
    out.array() += ker->offset;
    return out;
}

Eigen::VectorXd StatisticFn::operator()(const Eigen::VectorXd& x) const {
    return evaluate(Eigen::MatrixXd(x.transpose())).row(0).transpose();
}

std::vector<ClassLabel> StatisticFn::predict_class(const Eigen::MatrixXd& x) const {
    const Eigen::MatrixXd out = evaluate(x);
    std::vector<ClassLabel> labels(static_cast<std::size_t>(out.rows()));
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        Eigen::Index best = 0;
        out.row(i).maxCoeff(&best);
        labels[static_cast<std::size_t>(i)] = static_cast<ClassLabel>(best);
    }
    return labels;
}

// ---------------------------------------------------------------------------
// Training

void require_all_classes(const std::vector<ClassLabel>& y, int num_classes) {
    if (num_classes < 2) throw ConfigError("need at least two classes");
    std::vector<bool> seen(static_cast<std::size_t>(num_classes), false);
    for (ClassLabel c : y) {
        if (c < 0 || c >= num_classes) {
            throw ConfigError("label " + std::to_string(c) + " outside [0, " +
                              std::to_string(num_classes) + ")");
        }
        seen[static_cast<std::size_t>(c)] = true;
    }
    for (int c = 0; c < num_classes; ++c) {
        if (!seen[static_cast<std::size_t>(c)]) {
            throw ConfigError("class " + std::to_string(c) + " has no training sample");
        }
    }
}

namespace {

Eigen::VectorXd resolve_weights(const std::optional<Eigen::VectorXd>& w, std::size_t n) {
    if (!w) return Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));
    if (static_cast<std::size_t>(w->size()) != n) throw ConfigError("sample weight count mismatch");
    if ((w->array() < 0.0).any() || !w->allFinite()) {
        throw ConfigError("sample weights must be finite and nonnegative");
    }
    if (!(w->sum() > 0.0)) throw ConfigError("sample weights are all zero");
    return *w;
}

// Weighted mean cross-entropy plus (l2/2)|W|^2 over non-bias rows; returns the
// objective and fills the gradient.
double softmax_objective(const Eigen::MatrixXd& phi, const std::vector<ClassLabel>& y,
                         const Eigen::VectorXd& w, double total, double l2,
                         const Eigen::MatrixXd& W, Eigen::MatrixXd& grad) {
    Eigen::MatrixXd z = phi * W;
    double loss = 0.0;
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
        const double mx = z.row(i).maxCoeff();
        z.row(i) = (z.row(i).array() - mx).exp();
        const double s = z.row(i).sum();
        const int c = y[static_cast<std::size_t>(i)];
        if (w[i] != 0.0) loss += w[i] * (std::log(s) - std::log(z(i, c)));
        z.row(i) /= s;
        z(i, c) -= 1.0;
        z.row(i) *= w[i];
    }
    grad.noalias() = phi.transpose() * z / total;
    Eigen::MatrixXd reg = W;
    reg.row(0).setZero();
    grad += l2 * reg;
    return loss / total + 0.5 * l2 * reg.squaredNorm();
}

}  // namespace

StatisticFn train_simplex(const LabeledSamples<ClassLabel>& train, int num_classes,
                          const LogisticOptions& opts,
                          const std::optional<Eigen::VectorXd>& sample_weights) {
    if (train.empty()) throw ConfigError("train_simplex: empty training set");
    const Eigen::VectorXd w = resolve_weights(sample_weights, train.size());
    if (!sample_weights) {
        require_all_classes(train.y, num_classes);
    } else {
        // Weighted fits (ERM) may legitimately zero out or miss a class.
        for (ClassLabel c : train.y) {
            if (c < 0 || c >= num_classes) {
                throw ConfigError("label " + std::to_string(c) + " outside [0, " +
                                  std::to_string(num_classes) + ")");
            }
        }
    }

    FeatureMap fm = FeatureMap::fit(train.x, train.y, w, num_classes);
    const Eigen::MatrixXd phi = fm.transform(train.x);
    const double total = w.sum();

    // Step 1/L with L >= 0.5 * lambda_max(Phi^T D Phi) / total + l2.
    const Eigen::MatrixXd gram = phi.transpose() * w.asDiagonal() * phi / total;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
    const double lipschitz = 0.5 * es.eigenvalues().maxCoeff() + opts.l2;
    const double step = 1.0 / lipschitz;

    // Nesterov acceleration with gradient-based restart.
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(fm.dim(), num_classes);
    Eigen::MatrixXd W_prev = W;
    Eigen::MatrixXd V = W;
    Eigen::MatrixXd grad(W.rows(), W.cols());
    double t = 1.0;
    for (int it = 0; it < opts.max_iter; ++it) {
        softmax_objective(phi, train.y, w, total, opts.l2, V, grad);
        if (grad.cwiseAbs().maxCoeff() < opts.grad_tol) {
            W = V;
            break;
        }
        W_prev = W;
        W = V - step * grad;
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        if ((grad.array() * (W - W_prev).array()).sum() > 0.0) {
            t = 1.0;  // restart
            V = W;
        } else {
            V = W + ((t - 1.0) / t_next) * (W - W_prev);
            t = t_next;
        }
    }
    return StatisticFn(StatisticMode::Simplex, StatisticFn::Linear{std::move(fm), std::move(W)});
}

StatisticFn train_hypercube(const LabeledSamples<ClassLabel>& train, int num_classes,
                            const HyperCubeOptions& opts) {
    if (train.empty()) throw ConfigError("train_hypercube: empty training set");
    require_all_classes(train.y, num_classes);
    const Eigen::VectorXd w = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(train.size()));
    FeatureMap fm = FeatureMap::fit(train.x, train.y, w, num_classes);
    const Eigen::MatrixXd phi = fm.transform(train.x);
    const double n = static_cast<double>(train.size());

    Eigen::MatrixXd onehot = Eigen::MatrixXd::Zero(phi.rows(), num_classes);
    for (std::size_t i = 0; i < train.size(); ++i) onehot(static_cast<Eigen::Index>(i), train.y[i]) = 1.0;

    Eigen::MatrixXd normal = phi.transpose() * phi / n;
    normal.diagonal().tail(normal.rows() - 1).array() += opts.jitter;
    const Eigen::MatrixXd rhs = phi.transpose() * onehot / n;
    Eigen::MatrixXd W = normal.ldlt().solve(rhs);
    return StatisticFn(StatisticMode::HyperCube, StatisticFn::Linear{std::move(fm), std::move(W)});
}

StatisticFn train_kernel_regressor(const LabeledSamples<RealLabel>& train, double bandwidth,
                                   double ridge, const KernelRegressorOptions& opts,
                                   const std::optional<Eigen::VectorXd>& sample_weights) {
    if (train.empty()) throw ConfigError("train_kernel_regressor: empty training set");
    if (!(bandwidth > 0.0)) throw ConfigError("kernel regressor bandwidth must be positive");
    if (!(ridge > 0.0)) throw ConfigError("kernel regressor ridge must be positive");
    Eigen::VectorXd w = resolve_weights(sample_weights, train.size());

    // Deterministic thinning to at most max_train points.
    std::vector<std::size_t> rows;
    const std::size_t n = train.size();
    const std::size_t cap = std::max<std::size_t>(opts.max_train, 1);
    if (n <= cap) {
        rows.resize(n);
        for (std::size_t i = 0; i < n; ++i) rows[i] = i;
    } else {
        for (std::size_t j = 0; j < cap; ++j) rows.push_back(j * n / cap);
    }
    const LabeledSamples<RealLabel> sub = n <= cap ? train : train.subset(rows);
    Eigen::VectorXd sw(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t j = 0; j < rows.size(); ++j) sw[static_cast<Eigen::Index>(j)] = w[static_cast<Eigen::Index>(rows[j])];
    if (!(sw.sum() > 0.0)) throw ConfigError("kernel regressor: all retained weights are zero");

    const Eigen::Map<const Eigen::VectorXd> y(sub.y.data(), static_cast<Eigen::Index>(sub.y.size()));
    const double ybar = sw.dot(y) / sw.sum();

    // Weighted ridge in symmetric form: alpha = S (S K S + ridge I)^{-1} S (y - ybar), S = W^{1/2}.
    StatisticFn::Kernel model{GaussianKernel(bandwidth), sub.x, {}, ybar};
    const Eigen::VectorXd s = sw.cwiseSqrt();
    Eigen::MatrixXd K = model.kernel.gram_rows(sub.x, sub.x);
    K = s.asDiagonal() * K * s.asDiagonal();
    K.diagonal().array() += ridge;
    Eigen::LLT<Eigen::MatrixXd> llt(K);
    if (llt.info() != Eigen::Success) {
        throw IllConditioned("kernel ridge system is not positive definite", ridge);
    }
    model.coef = s.asDiagonal() * llt.solve(s.asDiagonal() * (y.array() - ybar).matrix());
    return StatisticFn(std::move(model));
}

}  // namespace labelshift
