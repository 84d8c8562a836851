#include "labelshift/experiment.hpp"

#include "labelshift/categorical_estimators.hpp"
#include "labelshift/concentration.hpp"
#include "labelshift/datagen.hpp"
#include "labelshift/erm.hpp"
#include "labelshift/error.hpp"
#include "labelshift/functional_estimators.hpp"
#include "labelshift/moments.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace labelshift {

std::string_view to_string(Scenario s) {
    switch (s) {
        case Scenario::CategoricalVsK: return "categorical_vs_k";
        case Scenario::CategoricalVsN: return "categorical_vs_n";
        case Scenario::FunctionalVsN: return "functional_vs_n";
        case Scenario::SingleRun: return "single_run";
    }
    return "?";
}

std::string_view to_string(Estimator e) {
    switch (e) {
        case Estimator::E1: return "E1";
        case Estimator::E2: return "E2";
        case Estimator::E3: return "E3";
        case Estimator::E4: return "E4";
    }
    return "?";
}

bool is_functional(Estimator e) { return e == Estimator::E3 || e == Estimator::E4; }

StatisticMode ExperimentConfig::resolved_mode() const {
    if (statistic_mode) return *statistic_mode;
    return functional() ? StatisticMode::KernelRegressor : StatisticMode::HyperCube;
}

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto end = comma == std::string_view::npos ? text.size() : comma;
        out.push_back(trim(text.substr(start, end - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

double parse_double(const std::string& text) {
    double v = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto res = std::from_chars(begin, end, v);
    if (text.empty() || res.ec != std::errc() || res.ptr != end || !std::isfinite(v)) {
        throw ConfigError("'" + text + "' is not a finite number");
    }
    return v;
}

std::uint64_t parse_unsigned(const std::string& text) {
    std::uint64_t v = 0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto res = std::from_chars(begin, end, v);
    if (text.empty() || res.ec != std::errc() || res.ptr != end) {
        throw ConfigError("'" + text + "' is not a nonnegative integer");
    }
    return v;
}

bool parse_bool(const std::string& text) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw ConfigError("'" + text + "' is not a boolean (true/false)");
}

Scenario parse_scenario(const std::string& text) {
    for (Scenario s : {Scenario::CategoricalVsK, Scenario::CategoricalVsN, Scenario::FunctionalVsN,
                       Scenario::SingleRun}) {
        if (text == to_string(s)) return s;
    }
    throw ConfigError("unknown scenario '" + text + "'");
}

Estimator parse_estimator(const std::string& text) {
    for (Estimator e : {Estimator::E1, Estimator::E2, Estimator::E3, Estimator::E4}) {
        if (text == to_string(e)) return e;
    }
    throw ConfigError("unknown estimator '" + text + "' (expected E1, E2, E3 or E4)");
}

LambdaRule parse_lambda(const std::string& text) {
    if (text == "delta_T") return {LambdaRule::Kind::DeltaT, 0.0};
    if (text == "delta_T_squared") return {LambdaRule::Kind::DeltaTSquared, 0.0};
    if (text == "std_error") return {LambdaRule::Kind::StandardError, 0.0};
    const double v = parse_double(text);
    if (v < 0.0) throw ConfigError("lambda must be nonnegative");
    return {LambdaRule::Kind::Fixed, v};
}

std::size_t to_count(double v, const char* what) {
    if (!(v >= 1.0) || v != std::floor(v)) {
        throw ConfigError(std::string(what) + " must be a positive integer");
    }
    return static_cast<std::size_t>(v);
}

void apply_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "scenario") {
        cfg.scenario = parse_scenario(value);
    } else if (key == "estimator") {
        cfg.estimator = parse_estimator(value);
    } else if (key == "statistic_mode") {
        cfg.statistic_mode = parse_statistic_mode(value);
    } else if (key == "sweep") {
        cfg.sweep.clear();
        for (const auto& item : split_list(value)) cfg.sweep.push_back(parse_double(item));
    } else if (key == "seeds") {
        cfg.seeds = parse_seed_list(value);
    } else if (key == "alpha") {
        cfg.alpha = parse_double(value);
    } else if (key == "gamma") {
        cfg.gamma = parse_double(value);
    } else if (key == "delta") {
        cfg.delta = parse_double(value);
    } else if (key == "k") {
        const auto k = parse_unsigned(value);
        if (k > 100000) throw ConfigError("k is unreasonably large");
        cfg.num_classes = static_cast<int>(k);
    } else if (key == "n") {
        cfg.n = parse_unsigned(value);
    } else if (key == "m") {
        cfg.m = parse_unsigned(value);
    } else if (key == "noise_std") {
        cfg.noise_std = parse_double(value);
    } else if (key == "no_shift") {
        cfg.no_shift = parse_bool(value);
    } else if (key == "a") {
        cfg.a = parse_double(value);
    } else if (key == "b") {
        cfg.b = parse_double(value);
    } else if (key == "bandwidth") {
        cfg.bandwidth = parse_double(value);
    } else if (key == "regressor_bandwidth") {
        cfg.regressor_bandwidth = parse_double(value);
    } else if (key == "regressor_ridge") {
        cfg.regressor_ridge = parse_double(value);
    } else if (key == "lambda") {
        cfg.lambda = parse_lambda(value);
    } else if (key == "e2_lambda") {
        cfg.e2_lambda = parse_lambda(value);
    } else if (key == "e2_max_iterations") {
        const auto v = parse_unsigned(value);
        if (v < 1 || v > 100000000) throw ConfigError("must lie in [1, 1e8]");
        cfg.e2_max_iterations = static_cast<int>(v);
    } else if (key == "theta_max") {
        if (value == "oracle") {
            cfg.theta_max.reset();
        } else {
            cfg.theta_max = parse_double(value);
        }
    } else if (key == "erm") {
        cfg.erm = parse_bool(value);
    } else if (key == "timing") {
        cfg.timing = parse_bool(value);
    } else if (key == "output") {
        if (value.empty()) throw ConfigError("output path is empty");
        cfg.output = value;
    } else {
        throw ConfigError("unknown key");
    }
}

}  // namespace

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
    std::vector<std::uint64_t> seeds;
    for (const auto& item : split_list(text)) {
        const auto dots = item.find("..");
        if (dots == std::string::npos) {
            seeds.push_back(parse_unsigned(item));
            continue;
        }
        const auto lo = parse_unsigned(trim(item.substr(0, dots)));
        const auto hi = parse_unsigned(trim(item.substr(dots + 2)));
        if (hi < lo) throw ConfigError("seed range '" + item + "' is empty");
        if (hi - lo > 1000000) throw ConfigError("seed range '" + item + "' is too long");
        for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    }
    if (seeds.empty()) throw ConfigError("seed list is empty");
    return seeds;
}

ExperimentConfig parse_config(std::istream& in, const std::string& source) {
    ExperimentConfig cfg;
    std::set<std::string> seen;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        const std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
        if (body.empty()) continue;
        const auto where = source + ":" + std::to_string(lineno);
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty()) throw ConfigError(where + ": missing key");
        if (!seen.insert(key).second) throw ConfigError(where + ": field '" + key + "' repeated");
        try {
            apply_key(cfg, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError(where + ": field '" + key + "': " + e.what());
        }
    }
    validate(cfg);
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in, path);
}

void validate(const ExperimentConfig& cfg) {
    if (cfg.seeds.empty()) throw ConfigError("seeds must be nonempty");
    if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
    if (!(cfg.gamma >= 0.0 && cfg.gamma <= 1.0)) throw ConfigError("gamma must lie in [0, 1]");
    if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
    if (cfg.n == 0) throw ConfigError("n must be positive");
    if (cfg.m && *cfg.m == 0) throw ConfigError("m must be positive");
    if (cfg.theta_max && !(*cfg.theta_max > 0.0)) throw ConfigError("theta_max must be positive");
    if (cfg.noise_std && !(*cfg.noise_std > 0.0)) throw ConfigError("noise_std must be positive");
    if (!(cfg.bandwidth > 0.0)) throw ConfigError("bandwidth must be positive");
    if (!(cfg.regressor_bandwidth > 0.0)) throw ConfigError("regressor_bandwidth must be positive");
    if (!(cfg.regressor_ridge > 0.0)) throw ConfigError("regressor_ridge must be positive");

    const bool functional_scenario = cfg.scenario == Scenario::FunctionalVsN;
    const bool categorical_scenario =
        cfg.scenario == Scenario::CategoricalVsK || cfg.scenario == Scenario::CategoricalVsN;
    if (cfg.functional() && categorical_scenario) {
        throw ConfigError(std::string(to_string(cfg.estimator)) + " requires a functional scenario, not " +
                          std::string(to_string(cfg.scenario)));
    }
    if (!cfg.functional() && functional_scenario) {
        throw ConfigError(std::string(to_string(cfg.estimator)) +
                          " is a categorical estimator; functional_vs_n needs E3 or E4");
    }
    const StatisticMode mode = cfg.resolved_mode();
    if (cfg.functional() != (mode == StatisticMode::KernelRegressor)) {
        throw ConfigError("statistic_mode '" + std::string(to_string(mode)) +
                          "' does not fit estimator " + std::string(to_string(cfg.estimator)));
    }

    if (cfg.scenario == Scenario::SingleRun) {
        if (!cfg.sweep.empty()) throw ConfigError("single_run takes no sweep values");
    } else {
        if (cfg.sweep.empty()) throw ConfigError("sweep values are required for this scenario");
        for (std::size_t i = 0; i < cfg.sweep.size(); ++i) {
            to_count(cfg.sweep[i], cfg.scenario == Scenario::CategoricalVsK ? "sweep value k" : "sweep value n");
            if (i > 0 && !(cfg.sweep[i] > cfg.sweep[i - 1])) {
                throw ConfigError("sweep values must be strictly increasing");
            }
        }
        if (cfg.scenario == Scenario::CategoricalVsK && cfg.sweep.front() < 2) {
            throw ConfigError("class counts in the sweep must be at least 2");
        }
    }
    if (!cfg.functional() && cfg.scenario != Scenario::CategoricalVsK && cfg.num_classes < 2) {
        throw ConfigError("k must be at least 2");
    }
    if (cfg.lambda.kind == LambdaRule::Kind::StandardError) {
        throw ConfigError("lambda = std_error is only defined for E2 (use e2_lambda)");
    }
    if (cfg.functional()) {
        if (!(cfg.a > 0.0 && cfg.a < 1.0) || !(cfg.b > 0.0 && cfg.b < 1.0)) {
            throw ConfigError("a and b must lie in (0, 1)");
        }
    }
}

Eigen::VectorXd evaluation_grid() { return Eigen::VectorXd::LinSpaced(100, 0.0, 1.0); }

double relative_error(const Eigen::VectorXd& omega_hat, const Eigen::VectorXd& omega) {
    if (omega_hat.size() != omega.size()) throw ConfigError("relative_error: size mismatch");
    const double denom = omega.norm();
    if (!(denom > 0.0)) throw ConfigError("relative_error: oracle has zero norm");
    return (omega_hat - omega).norm() / denom;
}

double relative_error(const std::function<double(double)>& omega_hat,
                      const std::function<double(double)>& omega) {
    const Eigen::VectorXd grid = evaluation_grid();
    Eigen::VectorXd est(grid.size());
    Eigen::VectorXd ref(grid.size());
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        est[i] = omega_hat(grid[i]);
        ref[i] = omega(grid[i]);
    }
    return relative_error(est, ref);
}

namespace {

template <class Label>
const LabeledSamples<Label>& statistic_training_set(const AlphaSplit<Label>& split) {
    return split.erm.empty() ? split.estimation : split.erm;
}

bool has_all_classes(const std::vector<ClassLabel>& y, int k) {
    std::vector<bool> seen(static_cast<std::size_t>(k), false);
    for (ClassLabel c : y) {
        if (c >= 0 && c < k) seen[static_cast<std::size_t>(c)] = true;
    }
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

double resolve_lambda(const LambdaRule& rule, double delta_T, double standard_error = 0.0) {
    switch (rule.kind) {
        case LambdaRule::Kind::DeltaT: return delta_T;
        case LambdaRule::Kind::DeltaTSquared: return delta_T * delta_T;
        case LambdaRule::Kind::StandardError: return standard_error;
        case LambdaRule::Kind::Fixed: return rule.value;
    }
    return delta_T;
}

ResultRow categorical_cell(const ExperimentConfig& cfg, int k, std::size_t n, std::size_t m,
                           std::uint64_t seed) {
    CategoricalSynthConfig gen;
    gen.num_classes = k;
    gen.noise_std = cfg.noise_std.value_or(0.5);
    gen.seed = seed;
    gen.no_shift = cfg.no_shift;
    const Dataset<ClassLabel> ds = gen_categorical(gen, n, m);
    const AlphaSplit<ClassLabel> split = split_alpha(ds.source, cfg.alpha, seed);

    // The statistic is fit on the ERM part so that it is independent of the
    // moment sample; fall back to the estimation part when that is impossible.
    const LabeledSamples<ClassLabel>& fit_set =
        has_all_classes(split.erm.y, k) ? split.erm : split.estimation;
    const StatisticMode mode = cfg.resolved_mode();
    const StatisticFn g = mode == StatisticMode::Simplex ? train_simplex(fit_set, k)
                                                         : train_hypercube(fit_set, k);
    const MomentEstimates mom = estimate_categorical_moments(split.estimation, ds.target_x, g, k);
    const int d = static_cast<int>(mom.d());

    const Eigen::VectorXd omega = true_weight_categorical(gen);
    const double theta_max = cfg.theta_max.value_or(std::max((omega.array() - 1.0).matrix().norm(), 1e-12));

    CategoricalWeightEstimate est;
    if (cfg.estimator == Estimator::E1) {
        est = e1_direct(mom);
    } else {
        const double dT = categorical_radii(d, k, cfg.alpha, n, m, cfg.delta / 3.0).delta_T;
        E2Options opts;
        opts.record_trace = false;
        opts.max_iterations = cfg.e2_max_iterations;
        est = e2_regularized(mom, resolve_lambda(cfg.e2_lambda, dT, mom.T_standard_error), theta_max, opts);
    }

    ResultRow row;
    row.k_or_bandwidth = k;
    row.relative_error = relative_error(est.omega_hat, omega);
    row.epsilon_delta =
        categorical_confidence(d, k, cfg.alpha, n, m, cfg.delta, est.pinv_norm, theta_max).epsilon_delta;
    row.burn_in_ok = check_burn_in_categorical(est.pinv_norm, d, k, cfg.alpha, n, cfg.delta);
    row.target_risk = std::numeric_limits<double>::quiet_NaN();
    if (cfg.erm) {
        if (split.erm.empty()) throw ConfigError("erm = true needs alpha < 1");
        const auto res = weighted_erm(split.erm, blend_gamma(est.theta_hat, cfg.gamma), k, cfg.gamma);
        row.target_risk = oracle_target_risk(res.model, ds.target_x, *ds.target_oracle);
    }
    return row;
}

double e4_lambda(const ExperimentConfig& cfg, std::size_t n, std::size_t m, double kappa_bar) {
    return resolve_lambda(cfg.lambda, functional_radii(cfg.alpha, n, m, cfg.delta / 3.0, kappa_bar).delta_T);
}

ResultRow functional_cell(const ExperimentConfig& cfg, std::size_t n, std::size_t m,
                          std::uint64_t seed) {
    RegressionSynthConfig gen;
    gen.a = cfg.a;
    gen.b = cfg.b;
    gen.noise_std = cfg.noise_std.value_or(0.1);
    gen.seed = seed;
    const Dataset<RealLabel> ds = gen_regression(gen, n, m);
    const AlphaSplit<RealLabel> split = split_alpha(ds.source, cfg.alpha, seed);

    const StatisticFn u = train_kernel_regressor(statistic_training_set(split),
                                                 cfg.regressor_bandwidth, cfg.regressor_ridge);
    const KernelMoments km = estimate_kernel_moments(split.estimation, ds.target_x, u, cfg.bandwidth);

    const auto omega = true_weight_function(gen);
    double theta_max = 0.0;
    if (cfg.theta_max) {
        theta_max = *cfg.theta_max;
    } else {
        const Eigen::VectorXd grid = evaluation_grid();
        for (Eigen::Index i = 0; i < grid.size(); ++i) {
            theta_max = std::max(theta_max, std::abs(omega(grid[i]) - 1.0));
        }
    }

    const FunctionalWeightEstimate est = cfg.estimator == Estimator::E3
                                             ? e3_direct(km)
                                             : e4_regularized(km, e4_lambda(cfg, n, m, km.kappa_bar));

    ResultRow row;
    row.k_or_bandwidth = cfg.bandwidth;
    const Eigen::VectorXd grid = evaluation_grid();
    const Eigen::VectorXd omega_hat = evaluate_weight(est, 1.0, grid);
    Eigen::VectorXd ref(grid.size());
    for (Eigen::Index i = 0; i < grid.size(); ++i) ref[i] = omega(grid[i]);
    row.relative_error = relative_error(omega_hat, ref);
    row.epsilon_delta = functional_confidence(cfg.alpha, n, m, cfg.delta, km.kappa_bar,
                                              est.op_inv_norm_proxy, theta_max)
                            .epsilon_delta;
    row.burn_in_ok = check_burn_in_functional(n, cfg.alpha, cfg.delta, km.kappa_bar, est.op_inv_norm_proxy);
    row.target_risk = std::numeric_limits<double>::quiet_NaN();
    if (cfg.erm) {
        if (split.erm.empty()) throw ConfigError("erm = true needs alpha < 1");
        const Eigen::Map<const Eigen::VectorXd> ys(split.erm.y.data(),
                                                   static_cast<Eigen::Index>(split.erm.y.size()));
        ErmOptions opts;
        opts.kernel_bandwidth = cfg.regressor_bandwidth;
        opts.kernel_ridge = cfg.regressor_ridge;
        const auto res = weighted_erm(split.erm, blend_gamma(est, cfg.gamma, ys), cfg.gamma, opts);
        row.target_risk = oracle_target_risk(res.model, ds.target_x, *ds.target_oracle);
    }
    return row;
}

}  // namespace

ResultRow run_cell(const ExperimentConfig& cfg, double sweep_value, std::uint64_t seed) {
    int k = cfg.num_classes;
    std::size_t n = cfg.n;
    switch (cfg.scenario) {
        case Scenario::CategoricalVsK: k = static_cast<int>(to_count(sweep_value, "k")); break;
        case Scenario::CategoricalVsN:
        case Scenario::FunctionalVsN: n = to_count(sweep_value, "n"); break;
        case Scenario::SingleRun: break;
    }
    const std::size_t m = cfg.m.value_or(n);

    const auto start = std::chrono::steady_clock::now();
    ResultRow row = cfg.functional() ? functional_cell(cfg, n, m, seed) : categorical_cell(cfg, k, n, m, seed);
    const auto stop = std::chrono::steady_clock::now();

    row.scenario = std::string(to_string(cfg.scenario));
    row.estimator = std::string(to_string(cfg.estimator));
    row.statistic_mode = std::string(to_string(cfg.resolved_mode()));
    row.n = n;
    row.m = m;
    row.seed = seed;
    row.wall_ms = cfg.timing ? std::chrono::duration<double, std::milli>(stop - start).count() : 0.0;
    return row;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg, const ProgressFn& progress) {
    validate(cfg);
    const std::vector<double> values =
        cfg.scenario == Scenario::SingleRun ? std::vector<double>{0.0} : cfg.sweep;
    std::vector<ResultRow> rows;
    for (double v : values) {
        for (std::uint64_t seed : cfg.seeds) {
            rows.push_back(run_cell(cfg, v, seed));
            if (progress) progress(rows.back());
        }
    }
    std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& x, const ResultRow& y) {
        return std::tie(x.k_or_bandwidth, x.n, x.m, x.seed) < std::tie(y.k_or_bandwidth, y.n, y.m, y.seed);
    });
    return rows;
}

const char* const kCsvColumns =
    "scenario,estimator,statistic_mode,k_or_bandwidth,n,m,seed,relative_error,epsilon_delta,"
    "burn_in_ok,target_risk,wall_ms";

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows, const std::string& comment) {
    if (!comment.empty()) out << "# " << comment << '\n';
    out << kCsvColumns << '\n';
    for (const auto& r : rows) {
        out << r.scenario << ',' << r.estimator << ',' << r.statistic_mode << ','
            << format_number(r.k_or_bandwidth) << ',' << r.n << ',' << r.m << ',' << r.seed << ','
            << format_number(r.relative_error) << ',' << format_number(r.epsilon_delta) << ','
            << (r.burn_in_ok ? 1 : 0) << ',' << format_number(r.target_risk) << ','
            << format_number(r.wall_ms) << '\n';
    }
}

namespace {

double median(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

}  // namespace

void write_summary(std::ostream& out, const std::vector<ResultRow>& rows, const std::string& comment) {
    if (!comment.empty()) out << "# " << comment << '\n';
    out << "scenario,estimator,statistic_mode,k_or_bandwidth,n,m,seeds,median_relative_error,"
           "median_epsilon_delta,burn_in_rate,median_target_risk\n";
    std::map<std::tuple<double, std::size_t, std::size_t>, std::vector<const ResultRow*>> groups;
    for (const auto& r : rows) groups[{r.k_or_bandwidth, r.n, r.m}].push_back(&r);
    for (const auto& [key, members] : groups) {
        std::vector<double> err, eps, risk;
        double burn = 0.0;
        for (const ResultRow* r : members) {
            err.push_back(r->relative_error);
            eps.push_back(r->epsilon_delta);
            if (!std::isnan(r->target_risk)) risk.push_back(r->target_risk);
            burn += r->burn_in_ok ? 1.0 : 0.0;
        }
        const ResultRow& first = *members.front();
        out << first.scenario << ',' << first.estimator << ',' << first.statistic_mode << ','
            << format_number(std::get<0>(key)) << ',' << std::get<1>(key) << ',' << std::get<2>(key)
            << ',' << members.size() << ',' << format_number(median(err)) << ','
            << format_number(median(eps)) << ',' << format_number(burn / static_cast<double>(members.size()))
            << ',' << format_number(median(risk)) << '\n';
    }
}

}  // namespace labelshift
