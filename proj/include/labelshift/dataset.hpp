#pragma once

#include "labelshift/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

namespace labelshift {

using ClassLabel = int;
using RealLabel = double;

/// Covariates are the rows of `x`; `y[i]` labels row i.
template <class Label>
struct LabeledSamples {
    Eigen::MatrixXd x;
    std::vector<Label> y;

    std::size_t size() const noexcept { return y.size(); }
    bool empty() const noexcept { return y.empty(); }

    LabeledSamples subset(const std::vector<std::size_t>& rows) const {
        LabeledSamples out;
        out.x.resize(static_cast<Eigen::Index>(rows.size()), x.cols());
        out.y.reserve(rows.size());
        for (std::size_t r = 0; r < rows.size(); ++r) {
            out.x.row(static_cast<Eigen::Index>(r)) = x.row(static_cast<Eigen::Index>(rows[r]));
            out.y.push_back(y[rows[r]]);
        }
        return out;
    }
};

/// Labeled source sample plus unlabeled target covariates. For synthetic data
/// the target labels are retained as an oracle for evaluation only.
template <class Label>
struct Dataset {
    LabeledSamples<Label> source;
    Eigen::MatrixXd target_x;
    std::optional<std::vector<Label>> target_oracle;

    std::size_t n() const noexcept { return source.size(); }
    std::size_t m() const noexcept { return static_cast<std::size_t>(target_x.rows()); }
};

template <class Label>
struct AlphaSplit {
    double alpha = 1.0;
    LabeledSamples<Label> estimation;  // ceil(alpha n) samples
    LabeledSamples<Label> erm;         // the remaining n - ceil(alpha n)
};

/// Size of the estimation part: ceil(alpha n).
inline std::size_t estimation_size(std::size_t n, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
    const auto k = static_cast<std::size_t>(std::ceil(alpha * static_cast<double>(n) - 1e-9));
    return std::min(k, n);
}

/// Seeded random partition of `source` into estimation and ERM parts. Both
/// parts keep the original sample order.
template <class Label>
AlphaSplit<Label> split_alpha(const LabeledSamples<Label>& source, double alpha, std::uint64_t seed) {
    const std::size_t n = source.size();
    const std::size_t n_est = estimation_size(n, alpha);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::mt19937_64 rng(seed ^ 0x5bd1e9955bd1e995ULL);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::size_t> est(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_est));
    std::vector<std::size_t> rest(perm.begin() + static_cast<std::ptrdiff_t>(n_est), perm.end());
    std::sort(est.begin(), est.end());
    std::sort(rest.begin(), rest.end());
    return AlphaSplit<Label>{alpha, source.subset(est), source.subset(rest)};
}

}  // namespace labelshift
