#pragma once

#include <complex>
#include <span>
#include <vector>

namespace ballop {

/// Outcome of extrapolating a sequence v_k sampled at steps h_k = h_0 / ratio^k.
struct ExtrapolationResult {
    std::complex<double> limit{0.0, 0.0};
    double error_estimate = 0.0;  // best consecutive diagonal difference
    int best_stage = 0;
    bool converged = false;       // error_estimate below the requested tolerance
};

/// Richardson extrapolation assuming v(h) = L + c_1 h^{p0} + c_2 h^{p0+dp} + ...
/// The diagonal is scanned for the smallest consecutive difference so that a
/// noisy tail (e.g. cancellation at the deepest nodes) does not spoil an
/// already-converged stage.
ExtrapolationResult richardson_extrapolate(std::span<const std::complex<double>> values,
                                           double tol, double ratio = 2.0, double p0 = 1.0,
                                           double dp = 1.0);

ExtrapolationResult richardson_extrapolate_real(std::span<const double> values, double tol,
                                                double ratio = 2.0, double p0 = 1.0,
                                                double dp = 1.0);

}  // namespace ballop
