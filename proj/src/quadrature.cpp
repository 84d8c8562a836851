#include "labelshift/quadrature.hpp"

#include "labelshift/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace labelshift {

namespace {

// Eigen-decomposition of the symmetric Jacobi matrix; weights are mu0 times
// the squared first components of the eigenvectors.
QuadratureRule golub_welsch(const Eigen::VectorXd& off_diagonal, int order, double mu0) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(order, order);
    for (int i = 0; i + 1 < order; ++i) {
        J(i, i + 1) = off_diagonal[i];
        J(i + 1, i) = off_diagonal[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    QuadratureRule rule;
    rule.nodes = es.eigenvalues();
    rule.weights = mu0 * es.eigenvectors().row(0).transpose().cwiseAbs2();
    return rule;
}

}  // namespace

QuadratureRule gauss_hermite(int order) {
    if (order < 1) throw ConfigError("quadrature order must be positive");
    Eigen::VectorXd beta(std::max(order - 1, 0));
    for (int i = 1; i < order; ++i) beta[i - 1] = std::sqrt(0.5 * i);
    return golub_welsch(beta, order, std::sqrt(M_PI));
}

QuadratureRule gauss_legendre(int order, double lo, double hi) {
    if (order < 1) throw ConfigError("quadrature order must be positive");
    Eigen::VectorXd beta(std::max(order - 1, 0));
    for (int i = 1; i < order; ++i) beta[i - 1] = i / std::sqrt(4.0 * i * i - 1.0);
    QuadratureRule rule = golub_welsch(beta, order, 2.0);
    const double half = 0.5 * (hi - lo);
    rule.nodes = (rule.nodes.array() * half + 0.5 * (hi + lo)).matrix();
    rule.weights *= half;
    return rule;
}

}  // namespace labelshift
