#pragma once

#include "labelshift/predictors.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace labelshift {

enum class Scenario { CategoricalVsK, CategoricalVsN, FunctionalVsN, SingleRun };
enum class Estimator { E1, E2, E3, E4 };

std::string_view to_string(Scenario s);
std::string_view to_string(Estimator e);

bool is_functional(Estimator e);

/// How a regularised estimator picks its weight. DeltaT is the worst-case
/// concentration radius of T_hat at delta / 3; StandardError (E2 only) is the
/// plug-in Frobenius standard error of T_hat.
struct LambdaRule {
    enum class Kind { DeltaT, DeltaTSquared, StandardError, Fixed };
    Kind kind = Kind::DeltaT;
    double value = 0.0;  // Fixed only
};

/// One experiment, read from a flat `key = value` file. See README for keys.
struct ExperimentConfig {
    Scenario scenario = Scenario::SingleRun;
    Estimator estimator = Estimator::E2;
    std::optional<StatisticMode> statistic_mode;  // defaults by path
    std::vector<double> sweep;                    // k or n values
    std::vector<std::uint64_t> seeds{0};

    double alpha = 0.5;
    double gamma = 1.0;
    double delta = 0.1;

    int num_classes = 4;
    std::size_t n = 2000;
    std::optional<std::size_t> m;  // defaults to n
    std::optional<double> noise_std;
    bool no_shift = false;
    double a = 0.2;
    double b = 0.8;

    double bandwidth = 0.9;            // RKHS kernel on labels
    double regressor_bandwidth = 0.9;  // statistic u
    double regressor_ridge = 1e-2;
    LambdaRule lambda{LambdaRule::Kind::DeltaTSquared, 0.0};  // E4 (squared objective)
    LambdaRule e2_lambda{LambdaRule::Kind::StandardError, 0.0};  // E2 (unsquared objective)
    int e2_max_iterations = 100000;
    std::optional<double> theta_max;  // empty: taken from the synthetic oracle

    bool erm = false;
    bool timing = false;
    std::string output = "results.csv";

    bool functional() const { return is_functional(estimator); }
    StatisticMode resolved_mode() const;
};

/// Throws ConfigError naming the line and key on malformed input.
ExperimentConfig parse_config(std::istream& in, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);

/// Cross-field checks (sweep increasing, seeds nonempty, estimator/scenario match).
void validate(const ExperimentConfig& cfg);

/// Seed lists: "1,2,5" or ranges "0..19" (inclusive), mixed freely.
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

struct ResultRow {
    std::string scenario;
    std::string estimator;
    std::string statistic_mode;
    double k_or_bandwidth = 0.0;
    std::size_t n = 0;
    std::size_t m = 0;
    std::uint64_t seed = 0;
    double relative_error = 0.0;
    double epsilon_delta = 0.0;
    bool burn_in_ok = false;
    double target_risk = 0.0;  // NaN when ERM is off
    double wall_ms = 0.0;
};

/// |omega_hat - omega| / |omega|.
double relative_error(const Eigen::VectorXd& omega_hat, const Eigen::VectorXd& omega);

/// Same ratio for functions, both evaluated on 100 uniform points of [0, 1].
double relative_error(const std::function<double(double)>& omega_hat,
                      const std::function<double(double)>& omega);

/// The uniform 100-point evaluation grid on [0, 1].
Eigen::VectorXd evaluation_grid();

/// One (sweep value, seed) cell. For sweeps the value replaces k or n (and m
/// when m is not pinned).
ResultRow run_cell(const ExperimentConfig& cfg, double sweep_value, std::uint64_t seed);

using ProgressFn = std::function<void(const ResultRow&)>;

/// All cells, rows sorted by (k_or_bandwidth, n, m, seed).
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg, const ProgressFn& progress = {});

std::string format_number(double v);

extern const char* const kCsvColumns;

/// Optional first-line comment (e.g. a timestamp) followed by the header and rows.
void write_csv(std::ostream& out, const std::vector<ResultRow>& rows,
               const std::string& comment = {});

/// Medians over seeds per (k_or_bandwidth, n, m).
void write_summary(std::ostream& out, const std::vector<ResultRow>& rows,
                   const std::string& comment = {});

}  // namespace labelshift
