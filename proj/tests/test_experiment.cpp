#include <doctest.h>

#include "labelshift/datagen.hpp"
#include "labelshift/error.hpp"
#include "labelshift/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

using namespace labelshift;

namespace {

ExperimentConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in, "test.cfg");
}

std::string parse_error(const std::string& text) {
    try {
        parse(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "<no error>";
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

}  // namespace

TEST_CASE("config parsing") {
    const auto cfg = parse(
        "# comment line\n"
        "scenario = categorical_vs_n\n"
        "estimator = E1   # trailing comment\n"
        "statistic_mode = simplex\n"
        "sweep = 500, 2000,8000\n"
        "seeds = 0..3, 10\n"
        "alpha = 0.25\n"
        "\n"
        "output = out/x.csv\n");
    CHECK(cfg.scenario == Scenario::CategoricalVsN);
    CHECK(cfg.estimator == Estimator::E1);
    CHECK(cfg.resolved_mode() == StatisticMode::Simplex);
    CHECK(cfg.sweep == std::vector<double>{500, 2000, 8000});
    CHECK(cfg.seeds == std::vector<std::uint64_t>{0, 1, 2, 3, 10});
    CHECK(cfg.alpha == 0.25);
    CHECK(cfg.output == "out/x.csv");
}

TEST_CASE("config defaults") {
    const auto cfg = parse("");
    CHECK(cfg.scenario == Scenario::SingleRun);
    CHECK(cfg.estimator == Estimator::E2);
    CHECK(cfg.resolved_mode() == StatisticMode::HyperCube);
    CHECK(cfg.lambda.kind == LambdaRule::Kind::DeltaTSquared);
    CHECK(cfg.e2_lambda.kind == LambdaRule::Kind::StandardError);
    CHECK(parse("e2_lambda = delta_T\n").e2_lambda.kind == LambdaRule::Kind::DeltaT);
    CHECK_THROWS_AS(parse("estimator = E4\nlambda = std_error\n"), ConfigError);
    const auto f = parse("estimator = E4\nlambda = delta_T\n");
    CHECK(f.resolved_mode() == StatisticMode::KernelRegressor);
    CHECK(f.lambda.kind == LambdaRule::Kind::DeltaT);
    const auto fixed = parse("estimator = E4\nlambda = 0.003\n");
    CHECK(fixed.lambda.kind == LambdaRule::Kind::Fixed);
    CHECK(fixed.lambda.value == 0.003);
}

TEST_CASE("config errors name the line and field") {
    CHECK(parse_error("alpha = 0.5\nalpha = x\n") == "test.cfg:2: field 'alpha' repeated");
    CHECK(parse_error("\ndelta = abc\n") == "test.cfg:2: field 'delta': 'abc' is not a finite number");
    CHECK(parse_error("colour = red\n") == "test.cfg:1: field 'colour': unknown key");
    CHECK(parse_error("just words\n") == "test.cfg:1: expected 'key = value'");
    CHECK(parse_error("estimator = E5\n").rfind("test.cfg:1: field 'estimator'", 0) == 0);
    CHECK(parse_error("seeds = 5..2\n").rfind("test.cfg:1: field 'seeds'", 0) == 0);
}

TEST_CASE("cross-field validation") {
    CHECK_THROWS_AS(parse("scenario = categorical_vs_n\nestimator = E4\nsweep = 10\n"), ConfigError);
    CHECK_THROWS_AS(parse("scenario = functional_vs_n\nestimator = E2\nsweep = 10\n"), ConfigError);
    CHECK_THROWS_AS(parse("scenario = categorical_vs_n\nestimator = E1\nsweep = 100, 100\n"), ConfigError);
    CHECK_THROWS_AS(parse("scenario = categorical_vs_n\nestimator = E1\nsweep = 200, 100\n"), ConfigError);
    CHECK_THROWS_AS(parse("scenario = categorical_vs_n\nestimator = E1\n"), ConfigError);
    CHECK_THROWS_AS(parse("scenario = single_run\nsweep = 100\n"), ConfigError);
    CHECK_THROWS_AS(parse("estimator = E1\nstatistic_mode = kernel\n"), ConfigError);
    CHECK_THROWS_AS(parse("estimator = E4\nstatistic_mode = simplex\n"), ConfigError);
    CHECK_THROWS_AS(parse("scenario = categorical_vs_k\nestimator = E1\nsweep = 1, 4\n"), ConfigError);
    CHECK_THROWS_AS(parse("gamma = 2\n"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/labelshift.cfg"), ConfigError);
}

TEST_CASE("seed lists") {
    CHECK(parse_seed_list("3") == std::vector<std::uint64_t>{3});
    CHECK(parse_seed_list("0..2,7,9..9") == std::vector<std::uint64_t>{0, 1, 2, 7, 9});
    CHECK_THROWS_AS(parse_seed_list(""), ConfigError);
    CHECK_THROWS_AS(parse_seed_list("a"), ConfigError);
    CHECK_THROWS_AS(parse_seed_list("-1"), ConfigError);
}

TEST_CASE("relative error") {
    const Eigen::Vector4d w(3.0, 1.0 / 3, 3.0, 1.0 / 3);
    CHECK(relative_error(w, w) == 0.0);
    const Eigen::Vector4d off = w + Eigen::Vector4d(0.1, 0, 0, 0);
    CHECK(std::abs(relative_error(off, w) - 0.02342606428329091) < 1e-15);
    CHECK_THROWS_AS(relative_error(w, Eigen::Vector4d::Zero()), ConfigError);

    RegressionSynthConfig rc;
    const auto omega = true_weight_function(rc);
    CHECK(std::abs(relative_error([](double) { return 1.0; }, omega) - 0.35469544394204133) < 1e-14);
    CHECK(evaluation_grid().size() == 100);
    CHECK(evaluation_grid()[99] == 1.0);
}

TEST_CASE("number formatting and CSV layout") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1.0 / 3.0) == "0.333333333");
    CHECK(format_number(std::nan("")) == "nan");
    ResultRow r;
    r.scenario = "single_run";
    r.estimator = "E1";
    r.statistic_mode = "simplex";
    r.k_or_bandwidth = 4;
    r.n = 10;
    r.m = 12;
    r.relative_error = 0.5;
    r.target_risk = std::nan("");
    std::ostringstream out;
    write_csv(out, {r}, "stamp");
    CHECK(out.str() ==
          "# stamp\n"
          "scenario,estimator,statistic_mode,k_or_bandwidth,n,m,seed,relative_error,epsilon_delta,"
          "burn_in_ok,target_risk,wall_ms\n"
          "single_run,E1,simplex,4,10,12,0,0.5,0,0,nan,0\n");
}

TEST_CASE("no-shift single run estimates a near-zero theta") {
    auto cfg = parse("estimator = E1\nno_shift = true\nn = 4000\nk = 4\nseeds = 1\n");
    const auto row = run_cell(cfg, 0.0, 1);
    CHECK(row.relative_error < 0.2);
    cfg.estimator = Estimator::E2;
    const auto row2 = run_cell(cfg, 0.0, 1);
    CHECK(row2.relative_error <= row.relative_error + 1e-12);
    CHECK(std::isnan(row2.target_risk));
}

TEST_CASE("functional estimate without shift stays near one") {
    auto cfg = parse("estimator = E4\na = 0.2\nb = 0.2\nn = 2000\nlambda = delta_T\n");
    CHECK(run_cell(cfg, 0.0, 0).relative_error < 0.2);
}

TEST_CASE("E3 improves with the sample size") {
    auto cfg = parse("scenario = functional_vs_n\nestimator = E3\nsweep = 500, 4000\nseeds = 0..9\n");
    const auto rows = run_experiment(cfg);
    std::vector<double> small, large;
    for (const auto& r : rows) (r.n == 500 ? small : large).push_back(r.relative_error);
    REQUIRE(small.size() == 10);
    REQUIRE(large.size() == 10);
    CHECK(median(large) <= median(small));
}

TEST_CASE("experiment rows are sorted and reproducible") {
    auto cfg = parse("scenario = categorical_vs_k\nestimator = E2\nsweep = 2, 3\nseeds = 4, 1\nn = 600\nerm = true\n");
    const auto a = run_experiment(cfg);
    const auto b = run_experiment(cfg);
    REQUIRE(a.size() == 4);
    CHECK(a[0].k_or_bandwidth == 2);
    CHECK(a[0].seed == 1);
    CHECK(a[3].k_or_bandwidth == 3);
    CHECK(a[3].seed == 4);
    std::ostringstream sa, sb;
    write_csv(sa, a);
    write_csv(sb, b);
    CHECK(sa.str() == sb.str());
    for (const auto& r : a) {
        CHECK(r.target_risk >= 0.0);
        CHECK(r.target_risk <= 1.0);
        CHECK(r.wall_ms == 0.0);
    }
    std::ostringstream summary;
    write_summary(summary, a);
    CHECK(summary.str().find("median_relative_error") != std::string::npos);
}

TEST_CASE("shipped configs are valid") {
    int count = 0;
    for (const auto& entry : std::filesystem::directory_iterator(LABELSHIFT_CONFIG_DIR)) {
        if (entry.path().extension() != ".cfg") continue;
        CAPTURE(entry.path().string());
        CHECK_NOTHROW(load_config(entry.path().string()));
        ++count;
    }
    CHECK(count >= 4);
}
