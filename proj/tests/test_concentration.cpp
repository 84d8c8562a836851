#include <doctest.h>

#include "labelshift/categorical_estimators.hpp"
#include "labelshift/concentration.hpp"
#include "labelshift/datagen.hpp"
#include "labelshift/error.hpp"
#include "labelshift/functional_estimators.hpp"

#include <cmath>

using namespace labelshift;

TEST_CASE("categorical radii, hand evaluated") {
    // alpha n = 200 with alpha = 0.5.
    const Radii r = categorical_radii(2, 2, 0.5, 400, 400, 0.1);
    CHECK(std::abs(r.delta_p - 0.19206455826398416) < 1e-12);
    CHECK(std::abs(r.delta_p - std::sqrt(0.01 * std::log(40.0))) < 1e-15);
    CHECK(std::abs(r.delta_T - 0.5920828749203193) < 1e-12);
    CHECK(std::abs(r.delta_q - std::sqrt(2.0 / 400 * std::log(40.0))) < 1e-15);
}

TEST_CASE("functional radii, hand evaluated") {
    const Radii r = functional_radii(0.5, 1000, 800, 0.1, 1.0);
    CHECK(std::abs(r.delta_q - 0.17308183826022852) < 1e-12);
    CHECK(r.delta_T == r.delta_p);
    const Radii zero = functional_radii(0.5, 1000, 800, 0.1, 0.0);
    CHECK(zero.delta_p == 0.0);
    CHECK(zero.delta_q == 0.0);
    CHECK(zero.delta_T == 0.0);
}

TEST_CASE("radii shrink with the sample size") {
    double last = std::numeric_limits<double>::infinity();
    for (std::size_t n : {100u, 1000u, 10000u, 100000u, 1000000000u}) {
        const Radii r = categorical_radii(4, 4, 0.5, n, n, 0.1);
        CHECK(r.delta_p < last);
        last = r.delta_p;
    }
    CHECK(last < 1e-3);
}

TEST_CASE("composite epsilon") {
    CHECK(composite_epsilon(Radii{}, 3.0, 2.0) == 0.0);
    const ConfidenceReport rep = categorical_confidence(2, 2, 0.5, 800, 800, 0.1, 1.0, 1.0);
    CHECK(std::abs(rep.epsilon_delta - 1.4646686564386333) < 1e-12);
    CHECK(rep.radii.delta_p == categorical_radii(2, 2, 0.5, 800, 800, 0.1 / 3.0).delta_p);
    const ConfidenceReport f = functional_confidence(0.5, 800, 800, 0.1, 1.0, 2.0, 0.5);
    const Radii fr = functional_radii(0.5, 800, 800, 0.1 / 3.0, 1.0);
    CHECK(f.epsilon_delta == doctest::Approx(4.0 * (fr.delta_q + fr.delta_p + 0.5 * fr.delta_T)));
}

TEST_CASE("radii reject invalid arguments") {
    CHECK_THROWS_AS(categorical_radii(2, 2, 0.5, 400, 400, 0.0), ConfigError);
    CHECK_THROWS_AS(categorical_radii(2, 2, 0.5, 400, 400, 1.0), ConfigError);
    CHECK_THROWS_AS(categorical_radii(2, 2, 0.0, 400, 400, 0.1), ConfigError);
    CHECK_THROWS_AS(categorical_radii(2, 2, 0.5, 0, 400, 0.1), ConfigError);
    CHECK_THROWS_AS(functional_radii(0.5, 400, 400, 0.1, -1.0), ConfigError);
}

TEST_CASE("burn-in thresholds") {
    // (32 / 0.5) * 1 * 2 * ln(6 * 4 / 0.1) = 128 ln 240.
    CHECK(burn_in_required_categorical(1.0, 2, 2, 0.5, 0.1) == doctest::Approx(128.0 * std::log(240.0)).epsilon(1e-14));
    CHECK(burn_in_required_categorical(1.0, 2, 2, 0.5, 0.1) == doctest::Approx(701.5217821877749).epsilon(1e-13));
    CHECK(check_burn_in_categorical(1.0, 2, 2, 0.5, 800, 0.1));
    CHECK(!check_burn_in_categorical(1.0, 2, 2, 0.5, 700, 0.1));
    CHECK(!check_burn_in_categorical(1.0, 2, 2, 0.5, 500, 0.1));
    CHECK(!check_burn_in_categorical(std::numeric_limits<double>::infinity(), 2, 2, 0.5,
                                     std::numeric_limits<std::size_t>::max(), 0.1));

    CHECK(burn_in_required_functional(0.5, 0.1, 1.0, 2.0) == doctest::Approx(1048.1522079288577).epsilon(1e-13));
    CHECK(check_burn_in_functional(1100, 0.5, 0.1, 1.0, 2.0));
    CHECK(!check_burn_in_functional(1000, 0.5, 0.1, 1.0, 2.0));
    CHECK(check_burn_in_functional(1, 0.5, 0.1, 1.0, 0.0));
}

TEST_CASE("divergence of the categorical generator") {
    CategoricalSynthConfig cfg;
    const DivergenceReport rep =
        divergence_report(true_weight_categorical(cfg), source_label_distribution(cfg));
    CHECK(rep.d_inf == 3.0);
    CHECK(std::abs(rep.d_second - 7.0 / 3.0) < 1e-15);

    const DivergenceReport none = divergence_report(Eigen::VectorXd::Ones(4), source_label_distribution(cfg));
    CHECK(none.d_inf == 1.0);
    CHECK(none.d_second == doctest::Approx(1.0).epsilon(1e-15));

    // A weight vector that is not a density ratio of P.
    CHECK_THROWS_AS(divergence_report(Eigen::VectorXd::Constant(4, 2.0), source_label_distribution(cfg)),
                    ConfigError);
}

TEST_CASE("divergence of the regression generator") {
    RegressionSynthConfig cfg;
    const DivergenceReport rep = divergence_report(
        true_weight_function(cfg), [&](double y) { return tilted_density(cfg.a, y); });
    CHECK(rep.d_inf == doctest::Approx(1.5).epsilon(1e-14));
    // E_P[omega^2] = int q^2 / p, evaluated independently.
    CHECK(rep.d_second == doctest::Approx(1.1229649324336985).epsilon(1e-10));
}
