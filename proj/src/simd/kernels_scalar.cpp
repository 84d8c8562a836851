#include "labelshift/simd/kernels.hpp"

#include <cmath>

namespace labelshift::simd::detail {

namespace {

void exp_inplace(std::span<double> v) {
    for (double& x : v) x = std::exp(x);
}

void gaussian_gram(std::span<const double> a, std::span<const double> b, double gamma,
                   double* out) {
    const std::size_t rows = a.size();
    for (std::size_t j = 0; j < b.size(); ++j) {
        const double bj = b[j];
        double* col = out + j * rows;
        for (std::size_t i = 0; i < rows; ++i) {
            const double d = a[i] - bj;
            col[i] = std::exp(-gamma * d * d);
        }
    }
}

void gaussian_weighted_sums(std::span<const double> a, std::span<const double> b,
                            std::span<const double> w, double gamma, std::span<double> out) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double ai = a[i];
        double acc = 0.0;
        for (std::size_t j = 0; j < b.size(); ++j) {
            const double d = ai - b[j];
            acc += w[j] * std::exp(-gamma * d * d);
        }
        out[i] = acc;
    }
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable table{Isa::Scalar, &exp_inplace, &gaussian_gram,
                                   &gaussian_weighted_sums};
    return table;
}

}  // namespace labelshift::simd::detail
