#include "ballop/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ballop {

QuadratureRule gauss_jacobi(int n, double a, double b) {
    if (n < 1) throw std::invalid_argument("quadrature order must be >= 1");
    if (a <= -1.0 || b <= -1.0) throw std::invalid_argument("Jacobi weight requires a, b > -1");

    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        double denom = (2.0 * k + a + b) * (2.0 * k + a + b + 2.0);
        double diag;
        if (k == 0 && a + b == 0.0)
            diag = (b - a) / (a + b + 2.0);
        else
            diag = (b * b - a * a) / denom;
        jac(k, k) = diag;
        if (k >= 1) {
            double num = 4.0 * k * (k + a) * (k + b) * (k + a + b);
            double den = (2.0 * k + a + b) * (2.0 * k + a + b) * (2.0 * k + a + b + 1.0) *
                         (2.0 * k + a + b - 1.0);
            double off = std::sqrt(num / den);
            jac(k, k - 1) = off;
            jac(k - 1, k) = off;
        }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
    double mu0 = std::exp((a + b + 1.0) * std::numbers::ln2 + std::lgamma(a + 1.0) +
                          std::lgamma(b + 1.0) - std::lgamma(a + b + 2.0));

    QuadratureRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        rule.nodes[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
        double q0 = es.eigenvectors()(0, i);
        rule.weights[static_cast<std::size_t>(i)] = mu0 * q0 * q0;
    }
    return rule;
}

QuadratureRule gauss_jacobi_01(int n, double s) {
    // u = (1+x)/2 maps [-1,1] -> [0,1]; (1-u)^s du = 2^{-s-1} (1-x)^s dx.
    QuadratureRule base = gauss_jacobi(n, s, 0.0);
    double scale = std::exp(-(s + 1.0) * std::numbers::ln2);
    QuadratureRule rule;
    rule.nodes.reserve(base.nodes.size());
    rule.weights.reserve(base.weights.size());
    for (std::size_t i = 0; i < base.nodes.size(); ++i) {
        rule.nodes.push_back(0.5 * (1.0 + base.nodes[i]));
        rule.weights.push_back(scale * base.weights[i]);
    }
    return rule;
}

std::complex<double> circle_mean(
    int m, const std::function<std::complex<double>(std::complex<double>)>& f) {
    std::complex<double> sum = 0.0;
    for (int j = 0; j < m; ++j) {
        double theta = 2.0 * std::numbers::pi * j / m;
        sum += f(std::polar(1.0, theta));
    }
    return sum / static_cast<double>(m);
}

}  // namespace ballop
