#pragma once

#include <random>

#include "ballop/lft.hpp"
#include "ballop/power_series.hpp"

namespace ballop::testutil {

inline CVec random_interior(int dim, std::mt19937_64& rng, double radius = 0.9) {
    std::normal_distribution<double> gauss;
    CVec z(dim);
    for (int i = 0; i < dim; ++i) z(i) = Cplx(gauss(rng), gauss(rng));
    std::uniform_real_distribution<double> unif(0.05, radius);
    return z * (unif(rng) / z.norm());
}

inline CVec random_boundary(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    CVec z(dim);
    for (int i = 0; i < dim; ++i) z(i) = Cplx(gauss(rng), gauss(rng));
    return z / z.norm();
}

inline CMat random_unitary(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    CMat g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = Cplx(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<CMat> qr(g);
    CMat q = qr.householderQ();
    CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < dim; ++j) {
        Cplx d = r(j, j);
        q.col(j) *= (std::abs(d) > 1e-15) ? d / std::abs(d) : Cplx(1.0, 0.0);
    }
    return q;
}

inline LinearFractionalMap random_automorphism(int dim, std::mt19937_64& rng,
                                               double max_a = 0.6) {
    CVec a = random_interior(dim, rng, max_a);
    return compose(ball_automorphism(a), unitary_map(random_unitary(dim, rng)));
}

/// Random strict self-map: the generic blocks are contracted until the
/// certified sup-norm sits below 1.
inline LinearFractionalMap random_self_map(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    CMat a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) a(i, j) = Cplx(gauss(rng), gauss(rng)) * (0.45 / dim);
    CVec b(dim), c(dim);
    for (int i = 0; i < dim; ++i) {
        b(i) = Cplx(gauss(rng), gauss(rng)) * 0.18;
        c(i) = Cplx(gauss(rng), gauss(rng)) * 0.12;
    }
    if (c.norm() > 0.5) c *= 0.5 / c.norm();
    LinearFractionalMap m(a, b, c, Cplx(1.0, 0.0));
    for (int tries = 0; tries < 80; ++tries) {
        if (sup_norm(m) <= 0.999) return m;
        m = LinearFractionalMap(m.a() * 0.85, m.b() * 0.85, m.c(), m.d());
    }
    throw std::runtime_error("could not contract to a self-map");
}

inline PowerSeries random_polynomial(int dim, int degree, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    PowerSeries p(dim, degree);
    for (int q = 0; q < p.basis().size(); ++q) p.coeffs()(q) = Cplx(gauss(rng), gauss(rng));
    return p;
}

}  // namespace ballop::testutil
