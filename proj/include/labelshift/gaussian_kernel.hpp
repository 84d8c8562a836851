#pragma once

#include <Eigen/Dense>

namespace labelshift {

/// k(a, b) = exp(-|a - b|^2 / (2 sigma^2)); sup_y k(y, y) = 1.
class GaussianKernel {
public:
    explicit GaussianKernel(double bandwidth);

    double bandwidth() const noexcept { return bandwidth_; }
    /// 1 / (2 sigma^2)
    double gamma() const noexcept { return gamma_; }
    double sup_value() const noexcept { return 1.0; }

    double operator()(double a, double b) const;
    double operator()(const Eigen::Ref<const Eigen::VectorXd>& a,
                      const Eigen::Ref<const Eigen::VectorXd>& b) const;

    /// Gram block between scalar point sets (uses the active SIMD kernels).
    Eigen::MatrixXd gram(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;
    Eigen::MatrixXd gram(const Eigen::VectorXd& a) const { return gram(a, a); }

    /// Gram block between the rows of two point matrices.
    Eigen::MatrixXd gram_rows(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) const;

    /// out_i = sum_j w_j k(a_i, b_j) without materialising the block.
    Eigen::VectorXd weighted_sums(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                                  const Eigen::VectorXd& w) const;
    Eigen::VectorXd row_sums(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;

private:
    double bandwidth_;
    double gamma_;
};

}  // namespace labelshift
