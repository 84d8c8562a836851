#include <doctest.h>

#include "labelshift/datagen.hpp"
#include "labelshift/moments.hpp"
#include "labelshift/quadrature.hpp"

#include <algorithm>
#include <cmath>

using namespace labelshift;

TEST_CASE("perfect one-hot statistic gives a diagonal confusion matrix") {
    Eigen::MatrixXd g(4, 2);
    g << 1, 0, 0, 1, 1, 0, 0, 1;
    const std::vector<ClassLabel> y{0, 1, 0, 1};
    const MomentEstimates mom = categorical_moments_from_outputs(g, y, g, 2);
    CHECK((mom.T_hat - 0.5 * Eigen::Matrix2d::Identity()).norm() == 0.0);
    CHECK(mom.q_hat == mom.p_hat);
    CHECK(mom.shift().norm() == 0.0);
    CHECK(mom.n_est == 4);
    CHECK(mom.m == 4);
}

TEST_CASE("confusion matrix averages rank-one terms") {
    Eigen::MatrixXd g(2, 2);
    g << 1, 0, 0, 1;
    const MomentEstimates mom = categorical_moments_from_outputs(g, {0, 0}, g, 2);
    CHECK(mom.T_hat(0, 0) == 0.5);
    CHECK(mom.T_hat(1, 0) == 0.5);
    CHECK(mom.T_hat.col(1).norm() == 0.0);
    // Column sums of T reproduce p.
    CHECK((mom.T_hat.rowwise().sum() - mom.p_hat).norm() < 1e-15);
}

TEST_CASE("moment inputs are validated") {
    Eigen::MatrixXd g(2, 2);
    g << 1, 0, 0, 1;
    CHECK_THROWS_AS(categorical_moments_from_outputs(g, {0, 2}, g, 2), ConfigError);
    CHECK_THROWS_AS(categorical_moments_from_outputs(g, {0}, g, 2), ConfigError);
    CHECK_THROWS_AS(categorical_moments_from_outputs(g, {0, 1}, Eigen::MatrixXd(2, 3), 2), ConfigError);
}

TEST_CASE("gauss-hermite integrates polynomials exactly") {
    const QuadratureRule h = gauss_hermite(20);
    CHECK(normal_expectation(h, 0.0, 1.0, [](double x) { return x * x; }) ==
          doctest::Approx(1.0).epsilon(1e-13));
    CHECK(normal_expectation(h, 1.5, 0.5, [](double x) { return x; }) ==
          doctest::Approx(1.5).epsilon(1e-13));
    CHECK(normal_expectation(h, 0.0, 2.0, [](double x) { return x * x * x * x; }) ==
          doctest::Approx(48.0).epsilon(1e-12));
    const QuadratureRule l = gauss_legendre(16, 0.0, 2.0);
    double s = 0.0;
    for (Eigen::Index i = 0; i < l.nodes.size(); ++i) s += l.weights[i] * std::pow(l.nodes[i], 5);
    CHECK(s == doctest::Approx(64.0 / 6.0).epsilon(1e-13));
}

TEST_CASE("population moments satisfy q - p = T theta") {
    CategoricalSynthConfig cfg;
    cfg.seed = 1;
    const auto ds = gen_categorical(cfg, 4000, 10);
    for (const StatisticFn& g : {train_simplex(ds.source, 4), train_hypercube(ds.source, 4)}) {
        const MomentEstimates pop = population_categorical_moments(cfg, g);
        CHECK(pop.n_est == 0);
        const Eigen::VectorXd theta = true_weight_categorical(cfg).array() - 1.0;
        CHECK((pop.T_hat * theta - pop.shift()).norm() < 1e-12);
        CHECK((pop.T_hat.rowwise().sum() - pop.p_hat).norm() < 1e-12);
    }
}

TEST_CASE("empirical moments concentrate on the population moments") {
    CategoricalSynthConfig cfg;
    cfg.seed = 2;
    const auto train = gen_categorical(cfg, 4000, 10);
    const StatisticFn g = train_simplex(train.source, 4);
    cfg.seed = 3;
    const auto big = gen_categorical(cfg, 200000, 200000);
    const MomentEstimates emp = estimate_categorical_moments(big.source, big.target_x, g, 4);
    const MomentEstimates pop = population_categorical_moments(cfg, g);
    CHECK((emp.T_hat - pop.T_hat).norm() < 0.01);
    CHECK((emp.p_hat - pop.p_hat).norm() < 0.01);
    CHECK((emp.q_hat - pop.q_hat).norm() < 0.01);
}

TEST_CASE("kernel moments: label gram examples") {
    const double sigma = 0.4;
    Eigen::VectorXd same = Eigen::VectorXd::Constant(5, 0.3);
    Eigen::VectorXd imgs = Eigen::VectorXd::LinSpaced(5, 0.0, 1.0);
    KernelMoments km = kernel_moments_from_images(same, imgs, imgs, sigma);
    CHECK((km.K_yy - Eigen::MatrixXd::Ones(5, 5)).norm() == 0.0);
    CHECK(km.kappa_bar == 1.0);

    Eigen::VectorXd two(2);
    two << 0.1, 0.1 + sigma * std::sqrt(2.0 * std::log(2.0));
    km = kernel_moments_from_images(two, two, two, sigma);
    CHECK(km.K_yy(0, 1) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("kernel moments: target aggregates match the explicit blocks") {
    const Eigen::VectorXd y = Eigen::VectorXd::LinSpaced(7, 0.0, 1.0);
    const Eigen::VectorXd u = y.array().square();
    const Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(9, 0.1, 0.8);
    const KernelMoments km = kernel_moments_from_images(y, u, t, 0.3);
    CHECK(km.N() == 7);
    CHECK(km.m() == 9);
    CHECK((km.G_ut_row_sums - km.cross_gram().rowwise().sum()).norm() < 1e-13);
    CHECK(std::abs(km.G_tt_sum - km.target_gram().sum()) < 1e-12);
    CHECK((km.G_uu - km.kernel.gram(u)).norm() == 0.0);
}

TEST_CASE("kernel moments reject empty inputs") {
    Eigen::VectorXd empty;
    Eigen::VectorXd one = Eigen::VectorXd::Zero(1);
    CHECK_THROWS_AS(kernel_moments_from_images(empty, empty, one, 0.5), ConfigError);
    CHECK_THROWS_AS(kernel_moments_from_images(one, one, empty, 0.5), ConfigError);
    CHECK_THROWS_AS(kernel_moments_from_images(one, one, one, -0.5), ConfigError);
}

TEST_CASE("standard error of the confusion matrix") {
    Eigen::MatrixXd g(4, 2);
    g << 1, 0, 0, 1, 0.5, 0.5, 0.2, 0.8;
    const std::vector<ClassLabel> y{0, 1, 1, 0};
    const MomentEstimates mom = categorical_moments_from_outputs(g, y, g, 2);
    // Direct evaluation of sqrt(sum_i |G_i - T|_F^2 / (n (n - 1))).
    double ss = 0.0;
    for (int i = 0; i < 4; ++i) {
        Eigen::MatrixXd Gi = Eigen::MatrixXd::Zero(2, 2);
        Gi.col(y[static_cast<std::size_t>(i)]) = g.row(i).transpose();
        ss += (Gi - mom.T_hat).squaredNorm();
    }
    CHECK(mom.T_standard_error == doctest::Approx(std::sqrt(ss / 12.0)).epsilon(1e-14));
    const MomentEstimates single = categorical_moments_from_outputs(g.topRows(1), {0}, g, 2);
    CHECK(single.T_standard_error == 0.0);
}

TEST_CASE("confusion matrix error shrinks with the sample size") {
    CategoricalSynthConfig cfg;
    cfg.seed = 100;
    const auto train = gen_categorical(cfg, 4000, 10);
    const StatisticFn g = train_hypercube(train.source, 4);
    const MomentEstimates pop = population_categorical_moments(cfg, g);
    std::vector<double> err_small, err_large, se_large;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        cfg.seed = seed;
        for (std::size_t n : {500u, 4000u}) {
            const auto ds = gen_categorical(cfg, n, n);
            const MomentEstimates mom = estimate_categorical_moments(ds.source, ds.target_x, g, 4);
            const double e = (mom.T_hat - pop.T_hat).operatorNorm();
            (n == 500 ? err_small : err_large).push_back(e);
            if (n == 4000) se_large.push_back(mom.T_standard_error);
        }
    }
    std::sort(err_small.begin(), err_small.end());
    std::sort(err_large.begin(), err_large.end());
    std::sort(se_large.begin(), se_large.end());
    CHECK(err_large[10] < err_small[10]);
    // The standard error tracks the typical realised error.
    CHECK(se_large[10] > 0.5 * err_large[10]);
    CHECK(se_large[10] < 4.0 * err_large[10]);
}
