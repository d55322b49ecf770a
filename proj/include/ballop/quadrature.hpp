#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace ballop {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Jacobi rule for int_{-1}^{1} f(x) (1-x)^a (1+x)^b dx,
/// computed by Golub-Welsch from the Jacobi recurrence coefficients.
QuadratureRule gauss_jacobi(int n, double a, double b);

/// Rule for int_0^1 f(u) (1-u)^s du (the radial weight after u = rho^2).
QuadratureRule gauss_jacobi_01(int n, double s);

/// Mean over the unit circle, (1/2pi) int f(e^{i theta}) d theta, with an
/// m-point trapezoid rule (spectrally accurate for analytic integrands).
std::complex<double> circle_mean(int m,
                                 const std::function<std::complex<double>(std::complex<double>)>& f);

}  // namespace ballop
