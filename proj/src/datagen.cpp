#include "labelshift/datagen.hpp"

#include "labelshift/error.hpp"

#include <cmath>
#include <random>
#include <string>

namespace labelshift {

namespace {

// Independent engines per stream so that changing m leaves the source sample
// untouched.
enum class Stream : std::uint64_t { SourceLabels = 1, SourceNoise, TargetLabels, TargetNoise };

std::mt19937_64 engine(std::uint64_t seed, Stream stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), 0x9e3779b9u};
    return std::mt19937_64(seq);
}

Eigen::VectorXd alternating_masses(int k, double even_mass, double odd_mass) {
    Eigen::VectorXd p(k);
    for (int c = 0; c < k; ++c) p[c] = (c % 2 == 0) ? even_mass : odd_mass;
    return p / p.cwiseAbs().sum();
}

std::vector<int> draw_classes(const Eigen::VectorXd& probs, std::size_t count, std::mt19937_64& rng) {
    std::discrete_distribution<int> dist(probs.data(), probs.data() + probs.size());
    std::vector<int> out(count);
    for (auto& c : out) c = dist(rng);
    return out;
}

}  // namespace

void validate(const CategoricalSynthConfig& cfg) {
    if (cfg.num_classes < 2) throw ConfigError("categorical generator needs num_classes >= 2");
    if (!(cfg.noise_std > 0.0) || !std::isfinite(cfg.noise_std)) {
        throw ConfigError("categorical generator needs noise_std > 0");
    }
}

void validate(const RegressionSynthConfig& cfg) {
    if (!(cfg.a > 0.0 && cfg.a < 1.0)) throw ConfigError("regression generator needs 0 < a < 1");
    if (!(cfg.b > 0.0 && cfg.b < 1.0)) throw ConfigError("regression generator needs 0 < b < 1");
    if (!(cfg.noise_std > 0.0) || !std::isfinite(cfg.noise_std)) {
        throw ConfigError("regression generator needs noise_std > 0");
    }
}

Eigen::VectorXd source_label_distribution(const CategoricalSynthConfig& cfg) {
    validate(cfg);
    const double k = cfg.num_classes;
    return alternating_masses(cfg.num_classes, 1.0 / k, 3.0 / k);
}

Eigen::VectorXd target_label_distribution(const CategoricalSynthConfig& cfg) {
    validate(cfg);
    if (cfg.no_shift) return source_label_distribution(cfg);
    const double k = cfg.num_classes;
    return alternating_masses(cfg.num_classes, 3.0 / k, 1.0 / k);
}

double class_center(const CategoricalSynthConfig& cfg, int c) {
    if (c < 0 || c >= cfg.num_classes) throw ConfigError("class index out of range");
    return static_cast<double>(c);
}

Dataset<ClassLabel> gen_categorical(const CategoricalSynthConfig& cfg, std::size_t n, std::size_t m) {
    validate(cfg);
    if (n == 0 || m == 0) throw ConfigError("gen_categorical needs n >= 1 and m >= 1");

    const Eigen::VectorXd p = source_label_distribution(cfg);
    const Eigen::VectorXd q = target_label_distribution(cfg);

    auto place = [&](const std::vector<int>& labels, Stream noise_stream) {
        auto rng = engine(cfg.seed, noise_stream);
        std::normal_distribution<double> noise(0.0, cfg.noise_std);
        Eigen::MatrixXd x(static_cast<Eigen::Index>(labels.size()), 1);
        for (std::size_t i = 0; i < labels.size(); ++i) {
            x(static_cast<Eigen::Index>(i), 0) = class_center(cfg, labels[i]) + noise(rng);
        }
        return x;
    };

    Dataset<ClassLabel> ds;
    auto src_rng = engine(cfg.seed, Stream::SourceLabels);
    ds.source.y = draw_classes(p, n, src_rng);
    ds.source.x = place(ds.source.y, Stream::SourceNoise);

    auto tgt_rng = engine(cfg.seed, Stream::TargetLabels);
    std::vector<int> target_labels = draw_classes(q, m, tgt_rng);
    ds.target_x = place(target_labels, Stream::TargetNoise);
    ds.target_oracle = std::move(target_labels);
    return ds;
}

Eigen::VectorXd true_weight_categorical(const CategoricalSynthConfig& cfg) {
    return target_label_distribution(cfg).cwiseQuotient(source_label_distribution(cfg));
}

double tilted_density(double tilt, double y) { return 1.0 - tilt + 2.0 * tilt * y; }

double tilted_cdf(double tilt, double y) { return (1.0 - tilt) * y + tilt * y * y; }

double tilted_inverse_cdf(double tilt, double u) {
    // Positive root of t y^2 + (1 - t) y - u = 0 in the cancellation-free form
    // 2u / ((1 - t) + sqrt((1 - t)^2 + 4 t u)), which tends to u as t -> 0.
    const double s = 1.0 - tilt;
    const double denom = s + std::sqrt(s * s + 4.0 * tilt * u);
    if (denom == 0.0) return 0.0;
    return std::clamp(2.0 * u / denom, 0.0, 1.0);
}

Eigen::VectorXd sample_tilted(double tilt, std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Eigen::VectorXd y(static_cast<Eigen::Index>(count));
    for (auto& v : y) v = tilted_inverse_cdf(tilt, unif(rng));
    return y;
}

Dataset<RealLabel> gen_regression(const RegressionSynthConfig& cfg, std::size_t n, std::size_t m) {
    validate(cfg);
    if (n == 0 || m == 0) throw ConfigError("gen_regression needs n >= 1 and m >= 1");

    auto draw = [&](double tilt, std::size_t count, Stream label_stream, Stream noise_stream,
                    std::vector<double>& labels) {
        auto lrng = engine(cfg.seed, label_stream);
        auto nrng = engine(cfg.seed, noise_stream);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::normal_distribution<double> noise(0.0, cfg.noise_std);
        labels.resize(count);
        Eigen::MatrixXd x(static_cast<Eigen::Index>(count), 1);
        for (std::size_t i = 0; i < count; ++i) {
            labels[i] = tilted_inverse_cdf(tilt, unif(lrng));
            x(static_cast<Eigen::Index>(i), 0) = labels[i] + noise(nrng);
        }
        return x;
    };

    Dataset<RealLabel> ds;
    ds.source.x = draw(cfg.a, n, Stream::SourceLabels, Stream::SourceNoise, ds.source.y);
    std::vector<double> target_labels;
    ds.target_x = draw(cfg.b, m, Stream::TargetLabels, Stream::TargetNoise, target_labels);
    ds.target_oracle = std::move(target_labels);
    return ds;
}

std::function<double(double)> true_weight_function(const RegressionSynthConfig& cfg) {
    validate(cfg);
    const double a = cfg.a;
    const double b = cfg.b;
    return [a, b](double y) { return (2.0 * b * y + 1.0 - b) / (2.0 * a * y + 1.0 - a); };
}

}  // namespace labelshift
