#include "labelshift/gaussian_kernel.hpp"

#include "labelshift/error.hpp"
#include "labelshift/simd/kernels.hpp"

#include <cmath>
#include <span>

namespace labelshift {

namespace {
std::span<const double> view(const Eigen::VectorXd& v) {
    return {v.data(), static_cast<std::size_t>(v.size())};
}
}  // namespace

GaussianKernel::GaussianKernel(double bandwidth) : bandwidth_(bandwidth), gamma_(0.0) {
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
        throw ConfigError("Gaussian kernel bandwidth must be positive and finite");
    }
    gamma_ = 1.0 / (2.0 * bandwidth * bandwidth);
}

double GaussianKernel::operator()(double a, double b) const {
    const double d = a - b;
    return std::exp(-gamma_ * d * d);
}

double GaussianKernel::operator()(const Eigen::Ref<const Eigen::VectorXd>& a,
                                  const Eigen::Ref<const Eigen::VectorXd>& b) const {
    return std::exp(-gamma_ * (a - b).squaredNorm());
}

Eigen::MatrixXd GaussianKernel::gram(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
    Eigen::MatrixXd out(a.size(), b.size());
    if (out.size() == 0) return out;
    simd::active().gaussian_gram(view(a), view(b), gamma_, out.data());
    return out;
}

Eigen::MatrixXd GaussianKernel::gram_rows(const Eigen::MatrixXd& a,
                                          const Eigen::MatrixXd& b) const {
    if (a.cols() != b.cols()) throw ConfigError("gram_rows: point dimensions differ");
    if (a.cols() == 1) return gram(Eigen::VectorXd(a.col(0)), Eigen::VectorXd(b.col(0)));
    Eigen::MatrixXd out = (-2.0 * a * b.transpose()).colwise() + a.rowwise().squaredNorm();
    out.rowwise() += b.rowwise().squaredNorm().transpose();
    out = (-gamma_ * out.cwiseMax(0.0)).eval();
    simd::active().exp_inplace({out.data(), static_cast<std::size_t>(out.size())});
    return out;
}

Eigen::VectorXd GaussianKernel::weighted_sums(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                                              const Eigen::VectorXd& w) const {
    if (w.size() != b.size()) throw ConfigError("weighted_sums: weight count mismatch");
    Eigen::VectorXd out(a.size());
    simd::active().gaussian_weighted_sums(view(a), view(b), view(w), gamma_,
                                          {out.data(), static_cast<std::size_t>(out.size())});
    return out;
}

Eigen::VectorXd GaussianKernel::row_sums(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
    return weighted_sums(a, b, Eigen::VectorXd::Ones(b.size()));
}

}  // namespace labelshift
