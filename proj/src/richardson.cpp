#include "ballop/richardson.hpp"

#include <cmath>
#include <stdexcept>

namespace ballop {

ExtrapolationResult richardson_extrapolate(std::span<const std::complex<double>> values,
                                           double tol, double ratio, double p0, double dp) {
    if (values.empty()) throw std::invalid_argument("extrapolation needs at least one value");
    const int n = static_cast<int>(values.size());

    // tableau[k][j]: j-th elimination stage ending at sample k
    std::vector<std::vector<std::complex<double>>> t(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        t[static_cast<std::size_t>(k)].resize(static_cast<std::size_t>(k) + 1);
        t[static_cast<std::size_t>(k)][0] = values[static_cast<std::size_t>(k)];
        for (int j = 1; j <= k; ++j) {
            double gain = std::pow(ratio, p0 + (j - 1) * dp) - 1.0;
            auto& tk = t[static_cast<std::size_t>(k)];
            auto& tk1 = t[static_cast<std::size_t>(k) - 1];
            tk[static_cast<std::size_t>(j)] =
                tk[static_cast<std::size_t>(j) - 1] +
                (tk[static_cast<std::size_t>(j) - 1] - tk1[static_cast<std::size_t>(j) - 1]) / gain;
        }
    }

    ExtrapolationResult res;
    if (n == 1) {
        res.limit = values[0];
        res.error_estimate = std::abs(values[0]);
        return res;
    }
    double best = -1.0;
    for (int k = 1; k < n; ++k) {
        std::complex<double> diag = t[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)];
        std::complex<double> prev =
            t[static_cast<std::size_t>(k) - 1][static_cast<std::size_t>(k) - 1];
        double diff = std::abs(diag - prev);
        if (best < 0.0 || diff < best) {
            best = diff;
            res.limit = diag;
            res.error_estimate = diff;
            res.best_stage = k;
        }
    }
    res.converged = res.error_estimate <= tol;
    return res;
}

ExtrapolationResult richardson_extrapolate_real(std::span<const double> values, double tol,
                                                double ratio, double p0, double dp) {
    std::vector<std::complex<double>> cx(values.begin(), values.end());
    return richardson_extrapolate(cx, tol, ratio, p0, dp);
}

}  // namespace ballop
