#include "labelshift/functional_estimators.hpp"

#include "labelshift/error.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <cmath>
#include <limits>
#include <vector>

namespace labelshift {

std::string_view to_string(FunctionalMethod method) {
    return method == FunctionalMethod::E3 ? "E3" : "E4";
}

namespace {

constexpr double kTruncation = 1e-10;
constexpr double kJitterStart = 1e-12;
constexpr double kJitterCap = 1e-8;

void check_moments(const KernelMoments& km) {
    const Eigen::Index N = km.N();
    if (N == 0 || km.m() == 0) throw ConfigError("kernel moments are empty");
    if (km.K_yy.rows() != N || km.K_yy.cols() != N || km.G_uu.rows() != N ||
        km.G_uu.cols() != N || km.G_ut_row_sums.size() != N) {
        throw ConfigError("kernel moment blocks have inconsistent sizes");
    }
}

// K ~= L L^T with greedy diagonal pivoting; stops once the largest residual
// diagonal entry falls below tol.
Eigen::MatrixXd pivoted_cholesky(const Eigen::MatrixXd& K, double tol) {
    const Eigen::Index N = K.rows();
    Eigen::VectorXd diag = K.diagonal();
    std::vector<Eigen::VectorXd> cols;
    std::vector<Eigen::Index> pivots;
    while (static_cast<Eigen::Index>(cols.size()) < N) {
        Eigen::Index p = 0;
        const double dmax = diag.maxCoeff(&p);
        if (!(dmax > tol)) break;
        Eigen::VectorXd l = K.col(p);
        for (std::size_t c = 0; c < cols.size(); ++c) l -= cols[c][p] * cols[c];
        l /= std::sqrt(dmax);
        for (Eigen::Index pp : pivots) l[pp] = 0.0;
        diag -= l.cwiseAbs2();
        diag[p] = 0.0;
        pivots.push_back(p);
        cols.push_back(std::move(l));
    }
    Eigen::MatrixXd L(N, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) L.col(static_cast<Eigen::Index>(c)) = cols[c];
    return L;
}

// Orthonormal basis Q of range(L) and C = R R^T, so K = Q C Q^T. All span
// quantities needed by the solvers and diagnostics live here.
struct Span {
    Eigen::MatrixXd Q;
    Eigen::MatrixXd C;
    Eigen::MatrixXd S;      // Q^T (A G A) Q = C H C / N^2
    Eigen::VectorXd rhs;    // Q^T A w = C Q^T w / N
    Eigen::VectorXd w;      // G_ut 1 / m - G 1 / N
    double condition = 0.0;
    double proxy = 0.0;

    Eigen::Index rank() const { return Q.cols(); }
};

Eigen::MatrixXd sym(const Eigen::MatrixXd& M) { return 0.5 * (M + M.transpose()); }

Span build_span(const KernelMoments& km, double factor_tol) {
    const Eigen::Index N = km.N();
    const double Nd = static_cast<double>(N);
    Span sp;
    sp.w = km.G_ut_row_sums / static_cast<double>(km.m()) - km.G_uu.rowwise().sum() / Nd;

    const Eigen::MatrixXd L = pivoted_cholesky(km.K_yy, factor_tol);
    const Eigen::Index r = L.cols();
    if (r == 0) throw SingularOperator("anchor Gram matrix is numerically zero", {});
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(L);
    sp.Q = qr.householderQ() * Eigen::MatrixXd::Identity(N, r);
    const Eigen::MatrixXd R = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
    sp.C = sym(R * R.transpose());

    const Eigen::MatrixXd H = sym(sp.Q.transpose() * (km.G_uu * sp.Q));
    sp.S = sym(sp.C * H * sp.C) / (Nd * Nd);
    sp.rhs = sp.C * (sp.Q.transpose() * sp.w) / Nd;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eS(sp.S, Eigen::EigenvaluesOnly);
    const double smax = eS.eigenvalues().maxCoeff();
    double skept = smax;
    for (Eigen::Index i = 0; i < r; ++i) {
        const double e = eS.eigenvalues()[i];
        if (e >= kTruncation * smax) skept = std::min(skept, e);
    }
    sp.condition = smax > 0.0 ? smax / skept : std::numeric_limits<double>::infinity();

    // Singular values of T_hat on the span: s^2 = eig(R^T H R) / N^2.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eT(sym(R.transpose() * H * R) / (Nd * Nd),
                                                      Eigen::EigenvaluesOnly);
    const double tmax = eT.eigenvalues().maxCoeff();
    double tkept = tmax;
    for (Eigen::Index i = 0; i < r; ++i) {
        const double e = eT.eigenvalues()[i];
        if (e >= kTruncation * tmax) tkept = std::min(tkept, e);
    }
    sp.proxy = tmax > 0.0 ? 1.0 / std::sqrt(tkept) : std::numeric_limits<double>::infinity();
    return sp;
}

// Solves (B + j I) x = rhs by LLT, escalating j from 1e-12 by factors of 10.
Eigen::VectorXd jittered_solve(const Eigen::MatrixXd& B, const Eigen::VectorXd& rhs,
                               double* jitter_used) {
    const double cap = kJitterCap * std::max(B.trace(), 0.0);
    double j = kJitterStart;
    for (;;) {
        Eigen::MatrixXd Bj = B;
        Bj.diagonal().array() += j;
        Eigen::LLT<Eigen::MatrixXd> llt(Bj);
        if (llt.info() == Eigen::Success) {
            Eigen::VectorXd x = llt.solve(rhs);
            if (x.allFinite()) {
                *jitter_used = j;
                return x;
            }
        }
        if (j * 10.0 > cap) {
            throw IllConditioned("E4 normal equations are not positive definite after jitter " +
                                     std::to_string(j),
                                 j);
        }
        j *= 10.0;
    }
}

// Eigen-truncated pseudo-inverse solve of a symmetric PSD system.
Eigen::VectorXd truncated_solve(const Eigen::MatrixXd& S, const Eigen::VectorXd& rhs,
                                Eigen::Index* discarded) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    const Eigen::VectorXd& ev = es.eigenvalues();
    const double emax = ev.size() ? ev.maxCoeff() : 0.0;
    if (!(emax > 0.0)) {
        throw SingularOperator("E3 operator has no spectrum above the truncation threshold",
                               std::vector<double>(ev.data(), ev.data() + ev.size()));
    }
    Eigen::VectorXd coef = es.eigenvectors().transpose() * rhs;
    Eigen::Index dropped = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev[i] >= kTruncation * emax) {
            coef[i] /= ev[i];
        } else {
            coef[i] = 0.0;
            ++dropped;
        }
    }
    *discarded = dropped;
    return es.eigenvectors() * coef;
}

bool use_dense(const KernelMoments& km, const FunctionalSolveOptions& opts) {
    switch (opts.route) {
        case FunctionalSolveOptions::Route::Dense: return true;
        case FunctionalSolveOptions::Route::LowRank: return false;
        case FunctionalSolveOptions::Route::Auto: break;
    }
    return km.N() <= opts.dense_max;
}

// A G A with A = K / N, from the dense blocks.
Eigen::MatrixXd dense_normal_matrix(const KernelMoments& km) {
    const double Nd = static_cast<double>(km.N());
    const Eigen::MatrixXd KG = km.K_yy * km.G_uu;
    return sym(KG * km.K_yy) / (Nd * Nd);
}

FunctionalWeightEstimate make_estimate(const KernelMoments& km, const Span& sp,
                                       FunctionalMethod method, double lambda,
                                       Eigen::VectorXd beta, bool low_rank) {
    FunctionalWeightEstimate est;
    est.beta = std::move(beta);
    est.anchors = km.anchors;
    est.kernel = km.kernel;
    est.method = method;
    est.lambda_used = lambda;
    est.rkhs_norm = std::sqrt(std::max(est.beta.dot(km.K_yy * est.beta), 0.0));
    est.condition_number = sp.condition;
    est.op_inv_norm_proxy = sp.proxy;
    est.span_rank = sp.rank();
    est.low_rank = low_rank;
    return est;
}

}  // namespace

FunctionalWeightEstimate e4_regularized(const KernelMoments& km, double lambda,
                                        const FunctionalSolveOptions& opts) {
    check_moments(km);
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw ConfigError("E4 lambda must be finite and nonnegative");
    }
    const Span sp = build_span(km, opts.factor_tolerance);
    double jitter = 0.0;
    if (use_dense(km, opts)) {
        const double Nd = static_cast<double>(km.N());
        const Eigen::MatrixXd B = dense_normal_matrix(km) + lambda * km.K_yy;
        const Eigen::VectorXd rhs = km.K_yy * sp.w / Nd;
        auto est = make_estimate(km, sp, FunctionalMethod::E4, lambda,
                                 jittered_solve(B, rhs, &jitter), false);
        est.jitter_used = jitter;
        return est;
    }
    const Eigen::MatrixXd B = sp.S + lambda * sp.C;
    const Eigen::VectorXd y = jittered_solve(B, sp.rhs, &jitter);
    auto est = make_estimate(km, sp, FunctionalMethod::E4, lambda, sp.Q * y, true);
    est.jitter_used = jitter;
    return est;
}

FunctionalWeightEstimate e3_direct(const KernelMoments& km, const FunctionalSolveOptions& opts) {
    check_moments(km);
    const Span sp = build_span(km, opts.factor_tolerance);
    Eigen::Index discarded = 0;
    if (use_dense(km, opts)) {
        const double Nd = static_cast<double>(km.N());
        const Eigen::VectorXd rhs = km.K_yy * sp.w / Nd;
        auto est = make_estimate(km, sp, FunctionalMethod::E3, 0.0,
                                 truncated_solve(dense_normal_matrix(km), rhs, &discarded), false);
        est.discarded = discarded;
        return est;
    }
    const Eigen::VectorXd y = truncated_solve(sp.S, sp.rhs, &discarded);
    auto est = make_estimate(km, sp, FunctionalMethod::E3, 0.0, sp.Q * y, true);
    est.discarded = discarded;
    return est;
}

Eigen::VectorXd evaluate_theta(const FunctionalWeightEstimate& est, const Eigen::VectorXd& ys) {
    if (est.anchors.size() == 0) throw ConfigError("estimate has no anchors");
    return est.kernel.weighted_sums(ys, est.anchors, est.beta);
}

Eigen::VectorXd evaluate_weight(const FunctionalWeightEstimate& est, double gamma,
                                const Eigen::VectorXd& ys) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in [0, 1]");
    if (gamma == 0.0) return Eigen::VectorXd::Ones(ys.size());
    return (gamma * evaluate_theta(est, ys)).array() + 1.0;
}

double functional_residual_sq(const KernelMoments& km, const Eigen::VectorXd& beta) {
    check_moments(km);
    const double Nd = static_cast<double>(km.N());
    const double m = static_cast<double>(km.m());
    const Eigen::VectorXd c = (km.K_yy * beta).array() / Nd + 1.0 / Nd;
    return c.dot(km.G_uu * c) - 2.0 / m * c.dot(km.G_ut_row_sums) + km.G_tt_sum / (m * m);
}

double e4_objective(const KernelMoments& km, double lambda, const Eigen::VectorXd& beta) {
    return functional_residual_sq(km, beta) + lambda * beta.dot(km.K_yy * beta);
}

Eigen::VectorXd e4_gradient(const KernelMoments& km, double lambda, const Eigen::VectorXd& beta) {
    check_moments(km);
    const double Nd = static_cast<double>(km.N());
    const double m = static_cast<double>(km.m());
    const Eigen::VectorXd Kb = km.K_yy * beta;
    const Eigen::VectorXd c = Kb.array() / Nd + 1.0 / Nd;
    const Eigen::VectorXd inner = km.G_uu * c - km.G_ut_row_sums / m;
    return 2.0 / Nd * (km.K_yy * inner) + 2.0 * lambda * Kb;
}

double burn_in_required_functional(double alpha, double delta, double kappa_bar,
                                   double op_inv_norm_proxy) {
    if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("confidence delta must lie in (0, 1)");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
    if (!std::isfinite(op_inv_norm_proxy)) return std::numeric_limits<double>::infinity();
    return 32.0 / alpha * op_inv_norm_proxy * op_inv_norm_proxy * kappa_bar * kappa_bar *
           std::log(6.0 / delta);
}

bool check_burn_in_functional(std::size_t n, double alpha, double delta, double kappa_bar,
                              double op_inv_norm_proxy) {
    return static_cast<double>(n) >=
           burn_in_required_functional(alpha, delta, kappa_bar, op_inv_norm_proxy);
}

}  // namespace labelshift
