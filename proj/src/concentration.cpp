#include "labelshift/concentration.hpp"

#include "labelshift/error.hpp"
#include "labelshift/quadrature.hpp"

#include <cmath>

namespace labelshift {

namespace {

void check_delta(double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("confidence delta must lie in (0, 1)");
}

void check_counts(double alpha, std::size_t n, std::size_t m) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
    if (n == 0 || m == 0) throw ConfigError("sample counts must be positive");
}

}  // namespace

Radii categorical_radii(int d, int k, double alpha, std::size_t n, std::size_t m, double delta) {
    check_delta(delta);
    check_counts(alpha, n, m);
    if (d < 1 || k < 1) throw ConfigError("d and k must be positive");
    const double an = alpha * static_cast<double>(n);
    const double dd = d;
    Radii r;
    r.delta_p = std::sqrt(dd / an * std::log(2.0 * dd / delta));
    r.delta_q = std::sqrt(dd / static_cast<double>(m) * std::log(2.0 * dd / delta));
    r.delta_T = 2.0 * std::sqrt(2.0 * dd / an * std::log(2.0 * (dd + k) / delta));
    return r;
}

Radii functional_radii(double alpha, std::size_t n, std::size_t m, double delta, double kappa_bar) {
    check_delta(delta);
    check_counts(alpha, n, m);
    if (!(kappa_bar >= 0.0)) throw ConfigError("kappa_bar must be nonnegative");
    const double an = alpha * static_cast<double>(n);
    const double lg = std::log(2.0 / delta);
    Radii r;
    r.delta_p = 2.0 * kappa_bar * std::sqrt(2.0 / an * lg);
    r.delta_q = 2.0 * kappa_bar * std::sqrt(2.0 / static_cast<double>(m) * lg);
    r.delta_T = r.delta_p;
    return r;
}

double composite_epsilon(const Radii& radii, double inverse_norm_proxy, double theta_max) {
    return 2.0 * inverse_norm_proxy * (radii.delta_q + radii.delta_p + theta_max * radii.delta_T);
}

ConfidenceReport categorical_confidence(int d, int k, double alpha, std::size_t n, std::size_t m,
                                        double delta, double inverse_norm_proxy, double theta_max) {
    check_delta(delta);
    ConfidenceReport rep;
    rep.path = EstimationPath::Categorical;
    rep.delta = delta;
    rep.radii = categorical_radii(d, k, alpha, n, m, delta / 3.0);
    rep.epsilon_delta = composite_epsilon(rep.radii, inverse_norm_proxy, theta_max);
    rep.d = d;
    rep.k = k;
    rep.alpha = alpha;
    rep.n = n;
    rep.m = m;
    rep.theta_max = theta_max;
    rep.inverse_norm_proxy = inverse_norm_proxy;
    return rep;
}

ConfidenceReport functional_confidence(double alpha, std::size_t n, std::size_t m, double delta,
                                       double kappa_bar, double inverse_norm_proxy,
                                       double theta_max) {
    check_delta(delta);
    ConfidenceReport rep;
    rep.path = EstimationPath::Functional;
    rep.delta = delta;
    rep.radii = functional_radii(alpha, n, m, delta / 3.0, kappa_bar);
    rep.epsilon_delta = composite_epsilon(rep.radii, inverse_norm_proxy, theta_max);
    rep.alpha = alpha;
    rep.n = n;
    rep.m = m;
    rep.kappa_bar = kappa_bar;
    rep.theta_max = theta_max;
    rep.inverse_norm_proxy = inverse_norm_proxy;
    return rep;
}

DivergenceReport divergence_report(const Eigen::VectorXd& omega, const Eigen::VectorXd& source_probs) {
    if (omega.size() != source_probs.size() || omega.size() == 0) {
        throw ConfigError("divergence_report: weight and probability vectors must match");
    }
    if ((omega.array() < 0.0).any() || !omega.allFinite()) {
        throw ConfigError("divergence_report: weights must be finite and nonnegative");
    }
    if (std::abs(source_probs.dot(omega) - 1.0) > 1e-6) {
        throw ConfigError("divergence_report: E_P[omega] must equal 1");
    }
    DivergenceReport rep;
    rep.d_inf = 0.0;
    for (Eigen::Index i = 0; i < omega.size(); ++i) {
        if (source_probs[i] > 0.0) rep.d_inf = std::max(rep.d_inf, omega[i]);
    }
    rep.d_second = source_probs.dot(omega.cwiseAbs2());
    return rep;
}

DivergenceReport divergence_report(const std::function<double(double)>& omega,
                                   const std::function<double(double)>& source_density) {
    const QuadratureRule rule = gauss_legendre(64, 0.0, 1.0);
    double mean = 0.0;
    double second = 0.0;
    for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) {
        const double y = rule.nodes[i];
        const double w = omega(y);
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw ConfigError("divergence_report: weight function must be finite and nonnegative");
        }
        const double p = source_density(y);
        mean += rule.weights[i] * p * w;
        second += rule.weights[i] * p * w * w;
    }
    if (std::abs(mean - 1.0) > 1e-6) throw ConfigError("divergence_report: E_P[omega] must equal 1");
    DivergenceReport rep;
    rep.d_inf = 0.0;
    constexpr int grid = 100;
    for (int i = 0; i < grid; ++i) {
        rep.d_inf = std::max(rep.d_inf, omega(static_cast<double>(i) / (grid - 1)));
    }
    rep.d_second = second;
    return rep;
}

}  // namespace labelshift
