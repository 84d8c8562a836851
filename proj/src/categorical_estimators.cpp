#include "labelshift/categorical_estimators.hpp"

#include "labelshift/error.hpp"
#include "labelshift/log.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <sstream>

namespace labelshift {

std::string_view to_string(CategoricalMethod method) {
    return method == CategoricalMethod::E1 ? "E1" : "E2";
}

Eigen::VectorXd singular_values(const Eigen::MatrixXd& T) {
    return Eigen::JacobiSVD<Eigen::MatrixXd>(T).singularValues();
}

namespace {

constexpr double kRankTolerance = 1e-12;

void check_moments(const MomentEstimates& mom) {
    if (mom.T_hat.size() == 0) throw ConfigError("empty confusion moments");
    if (mom.p_hat.size() != mom.d() || mom.q_hat.size() != mom.d()) {
        throw ConfigError("moment dimensions disagree with T_hat");
    }
    if (!mom.T_hat.allFinite() || !mom.p_hat.allFinite() || !mom.q_hat.allFinite()) {
        throw ConfigError("moments contain non-finite entries");
    }
}

double min_singular(const Eigen::VectorXd& sv) {
    return sv.size() == 0 ? 0.0 : sv[sv.size() - 1];
}

Eigen::VectorXd block_shrink(const Eigen::VectorXd& v, double tau) {
    const double nv = v.norm();
    if (nv <= tau) return Eigen::VectorXd::Zero(v.size());
    return v * (1.0 - tau / nv);
}

// sqrt(|T theta - b|^2 + mu^2) and its gradient T^T r / value.
double smoothed_residual(const Eigen::MatrixXd& T, const Eigen::VectorXd& b, double mu,
                         const Eigen::VectorXd& theta, Eigen::VectorXd* grad) {
    const Eigen::VectorXd r = T * theta - b;
    const double s = std::hypot(r.norm(), mu);
    if (grad) *grad = s > 0.0 ? Eigen::VectorXd(T.transpose() * r / s) : Eigen::VectorXd::Zero(theta.size());
    return s;
}

}  // namespace

CategoricalWeightEstimate e1_direct(const MomentEstimates& mom) {
    check_moments(mom);
    if (mom.d() < mom.k()) {
        throw ConfigError("E1 needs d >= k (got d = " + std::to_string(mom.d()) +
                          ", k = " + std::to_string(mom.k()) + ")");
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(mom.T_hat, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double smax = sv.size() ? sv[0] : 0.0;
    const double smin = min_singular(sv);
    if (!(smax > 0.0) || smin <= kRankTolerance * smax) {
        std::ostringstream msg;
        msg << "T_hat is rank deficient; singular values:";
        for (Eigen::Index i = 0; i < sv.size(); ++i) msg << ' ' << sv[i];
        throw SingularOperator(msg.str(), std::vector<double>(sv.data(), sv.data() + sv.size()));
    }

    const Eigen::VectorXd b = mom.shift();
    CategoricalWeightEstimate est;
    est.method = CategoricalMethod::E1;
    est.theta_hat = svd.matrixV() * (svd.matrixU().transpose() * b).cwiseQuotient(sv);
    est.omega_hat = est.theta_hat.array() + 1.0;
    est.smallest_singular_value = smin;
    est.pinv_norm = 1.0 / smin;
    return est;
}

double e2_objective(const Eigen::MatrixXd& T, const Eigen::VectorXd& b, double delta_T,
                    const Eigen::VectorXd& theta) {
    return (T * theta - b).norm() + delta_T * theta.norm();
}

CategoricalWeightEstimate e2_regularized(const MomentEstimates& mom, double delta_T,
                                         double theta_cap, const E2Options& opts) {
    check_moments(mom);
    if (!(delta_T >= 0.0) || !std::isfinite(delta_T)) {
        throw ConfigError("E2 regularizer delta_T must be finite and nonnegative");
    }
    if (!(theta_cap > 0.0)) throw ConfigError("theta_cap must be positive");

    const Eigen::MatrixXd& T = mom.T_hat;
    const Eigen::VectorXd b = mom.shift();
    const Eigen::Index k = mom.k();
    const Eigen::VectorXd sv = singular_values(T);
    const double smax = sv.size() ? sv[0] : 0.0;
    const double bnorm = b.norm();
    const double lam = delta_T;

    CategoricalWeightEstimate est;
    est.method = CategoricalMethod::E2;
    est.smallest_singular_value = k <= mom.d() ? min_singular(sv) : 0.0;
    est.pinv_norm = est.smallest_singular_value > kRankTolerance * smax
                        ? 1.0 / est.smallest_singular_value
                        : std::numeric_limits<double>::infinity();
    est.theta_cap = theta_cap;

    Eigen::VectorXd x = Eigen::VectorXd::Zero(k);

    // Zero is optimal whenever the subgradient condition |T^T b| / |b| <= delta_T
    // holds at theta = 0; that includes b = 0 and T = 0.
    const bool trivial = bnorm == 0.0 || smax == 0.0 || (T.transpose() * b).norm() <= lam * bnorm;
    if (!trivial) {
        const double mu_final = 1e-12 * (bnorm + smax);
        const double grad_tol = 1e-9 * (smax + lam);
        double mu = 1e-1 * bnorm;
        double L = smax * smax / mu;
        int iter = 0;
        double last_change = std::numeric_limits<double>::infinity();

        auto full = [&](const Eigen::VectorXd& th, double m) {
            return smoothed_residual(T, b, m, th, nullptr) + lam * th.norm();
        };

        for (;;) {
            const bool final_stage = mu <= mu_final;
            double Fx = full(x, mu);
            if (opts.record_trace) est.objective_trace.push_back(Fx);
            Eigen::VectorXd y = x;
            double t = 1.0;
            for (;;) {
                if (++iter > opts.max_iterations) {
                    est.iterations = iter - 1;
                    throw NonConvergence("E2 did not converge within " +
                                             std::to_string(opts.max_iterations) + " iterations",
                                         last_change);
                }
                Eigen::VectorXd g;
                const double fy = smoothed_residual(T, b, mu, y, &g);
                double Lt = std::max(0.5 * L, 1e-300);
                Eigen::VectorXd z;
                double fz = 0.0;
                for (;;) {
                    z = block_shrink(y - g / Lt, lam / Lt);
                    fz = smoothed_residual(T, b, mu, z, nullptr);
                    const Eigen::VectorXd dz = z - y;
                    const double model = fy + g.dot(dz) + 0.5 * Lt * dz.squaredNorm();
                    if (fz <= model + 4.0 * std::numeric_limits<double>::epsilon() * fy) break;
                    Lt *= 2.0;
                }
                L = Lt;
                const double gmap = Lt * (y - z).norm();
                // Two resolution limits: rounding in r = T y - b amplified by 1 / fy
                // in the gradient, and a predicted decrease gmap^2 / (2 L) that is
                // below the rounding level of the objective itself.
                const double eps = std::numeric_limits<double>::epsilon();
                const double noise =
                    std::max(64.0 * eps * smax * (smax * y.norm() + bnorm) / fy,
                             std::sqrt(2.0 * Lt * 16.0 * eps * (fy + lam * y.norm())));
                const double Fz = fz + lam * z.norm();

                const Eigen::VectorXd x_old = x;
                const double F_old = Fx;
                const bool accept = Fz <= Fx;
                if (accept) {
                    x = z;
                    Fx = Fz;
                }
                const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
                if (accept) {
                    y = x + ((t - 1.0) / t_next) * (x - x_old);
                    t = t_next;
                } else {
                    // Restart the momentum from the incumbent.
                    y = x;
                    t = 1.0;
                }
                last_change = F_old - Fx;
                if (opts.record_trace) est.objective_trace.push_back(Fx);
                if (last_change < opts.tolerance && gmap <= std::max(grad_tol, noise)) break;
            }
            est.iterations = iter;
            if (final_stage) break;
            mu = std::max(0.1 * mu, mu_final);
        }
    }

    est.theta_hat = x;
    est.omega_hat = x.array() + 1.0;
    est.objective = e2_objective(T, b, lam, x);
    est.exceeds_cap = x.norm() > theta_cap;
    if (est.exceeds_cap) {
        log::info("E2 solution norm exceeds theta_max; reported bounds assume |theta| <= theta_max");
    }
    return est;
}

double burn_in_required_categorical(double pinv_norm, int d, int k, double alpha, double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("confidence delta must lie in (0, 1)");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
    if (!std::isfinite(pinv_norm)) return std::numeric_limits<double>::infinity();
    return 32.0 / alpha * pinv_norm * pinv_norm * d * std::log(6.0 * (d + k) / delta);
}

bool check_burn_in_categorical(double pinv_norm, int d, int k, double alpha, std::size_t n,
                               double delta) {
    return static_cast<double>(n) >= burn_in_required_categorical(pinv_norm, d, k, alpha, delta);
}

bool check_burn_in_categorical(const MomentEstimates& mom, double alpha, std::size_t n,
                               double delta) {
    check_moments(mom);
    const Eigen::VectorXd sv = singular_values(mom.T_hat);
    const double smin = mom.k() <= mom.d() ? min_singular(sv) : 0.0;
    const double norm = smin > kRankTolerance * (sv.size() ? sv[0] : 0.0)
                            ? 1.0 / smin
                            : std::numeric_limits<double>::infinity();
    log::info("burn-in check uses the empirical |T_hat^+| as a proxy for |T^+|");
    return check_burn_in_categorical(norm, static_cast<int>(mom.d()), static_cast<int>(mom.k()),
                                     alpha, n, delta);
}

}  // namespace labelshift
