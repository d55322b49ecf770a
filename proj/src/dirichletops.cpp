#include "ballop/dirichletops.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

#include "ballop/multiindex.hpp"
#include "ballop/opalg.hpp"
#include "ballop/spaces.hpp"

namespace ballop {

Cplx dirichlet_inner(const PowerSeries& f, const PowerSeries& g) {
    if (f.dim() != g.dim()) throw std::invalid_argument("dimension mismatch");
    const GradedBasis& bf = f.basis();
    const GradedBasis& bg = g.basis();
    int common = std::min(bf.size(), bg.size());  // graded prefixes coincide
    Cplx acc = 0.0;
    for (int p = 0; p < common; ++p)
        acc += f.coeff_at(p) * std::conj(g.coeff_at(p)) * dirichlet_monomial_norm_sq(bf.at(p));
    return acc;
}

double dirichlet_norm_sq(const PowerSeries& f) { return dirichlet_inner(f, f).real(); }

namespace {

// log(c0 + <z, c>) as a truncated series, principal branch (requires the
// affine form to be zero-free on the closed ball, i.e. |c0| > ||c||).
PowerSeries log_affine_series(Cplx c0, const CVec& c, int max_order) {
    if (std::abs(c0) <= c.norm())
        throw std::invalid_argument("log of an affine form vanishing on the closed ball");
    // log(c0 (1 + v)) = log c0 + sum_{k>=1} (-1)^{k+1} v^k / k, v = <z,c>/c0
    PowerSeries v = PowerSeries::linear_form(c / std::conj(c0), Cplx(0.0, 0.0), max_order);
    // linear_form conjugates: <z, c/conj(c0)> = <z,c>/c0
    PowerSeries acc = PowerSeries::constant(v.dim(), max_order, std::log(c0));
    PowerSeries vpow = PowerSeries::constant(v.dim(), max_order, Cplx(1.0, 0.0));
    for (int k = 1; k <= max_order; ++k) {
        vpow = multiply(vpow, v);
        double sign = (k % 2 == 1) ? 1.0 : -1.0;
        acc += vpow * Cplx(sign / k, 0.0);
    }
    return acc;
}

}  // namespace

PowerSeries dirichlet_kernel_series(const CVec& w, int max_order) {
    if (w.norm() >= 1.0) throw std::invalid_argument("kernel point must be interior");
    // 1 - log(1 - <z,w>)
    PowerSeries lg = log_affine_series(Cplx(1.0, 0.0), -w, max_order);
    PowerSeries out = PowerSeries::constant(static_cast<int>(w.size()), max_order, Cplx(1.0, 0.0));
    out -= lg;
    return out;
}

PowerSeries dirichlet_kernel_composed(const CVec& w, const LinearFractionalMap& phi,
                                      int max_order) {
    // 1 - <phi(z), w> = (den(z) - <A z + B, w>) / den(z); both factors are
    // affine and zero-free on the closed ball, so
    // K_w o phi = 1 - log(numerator) + log(den), with the branch constant
    // pinned by the principal value at z = 0.
    const int n = phi.dim();
    if (w.size() != n) throw std::invalid_argument("dimension mismatch");
    Cplx num_c0 = phi.d() - herm(phi.b(), w);
    CVec num_c = phi.c() - phi.a().adjoint() * w;  // <z, c_num> = <z,C> - <Az, w>
    PowerSeries log_num = log_affine_series(num_c0, num_c, max_order);
    PowerSeries log_den = log_affine_series(phi.d(), phi.c(), max_order);

    PowerSeries out = PowerSeries::constant(n, max_order, Cplx(1.0, 0.0));
    out -= log_num;
    out += log_den;

    // Align the constant term with the principal branch of the evaluated map.
    CVec zero = CVec::Zero(n);
    Cplx want = Cplx(1.0, 0.0) - std::log(Cplx(1.0, 0.0) - herm(phi.eval(zero), w));
    Cplx have = out.constant_term();
    out.coeffs()(0) += want - have;
    return out;
}

PowerSeries dirichlet_adjoint_apply(const LinearFractionalMap& phi, const PowerSeries& f,
                                    int max_order) {
    LinearFractionalMap sigma = krein_adjoint(phi);
    int work = std::max(max_order, f.max_order());
    CVec zero = CVec::Zero(phi.dim());
    CVec phi0 = phi.eval(zero);
    CVec sigma0 = sigma.eval(zero);

    PowerSeries out = dirichlet_kernel_series(phi0, max_order) * f.evaluate(zero);
    out += compose_series(f, sigma, work).truncated(max_order);
    out.coeffs()(0) -= f.evaluate(sigma0);
    return out;
}

PowerSeries dirichlet_commutator_apply(const LinearFractionalMap& phi,
                                       const LinearFractionalMap& psi, const PowerSeries& f,
                                       int max_order) {
    LinearFractionalMap sigma = krein_adjoint(psi);
    int work = std::max(max_order, f.max_order());
    CVec zero = CVec::Zero(phi.dim());
    CVec phi0 = phi.eval(zero);
    CVec sigma0 = sigma.eval(zero);
    CVec psi0 = psi.eval(zero);

    // composition part: C_sigma C_phi f - C_phi C_sigma f
    //                 = f o phi o sigma   - f o sigma o phi
    PowerSeries out = compose_series(f, compose(phi, sigma), work).truncated(max_order);
    out -= compose_series(f, compose(sigma, phi), work).truncated(max_order);

    out += dirichlet_kernel_series(psi0, max_order) * f.evaluate(phi0);
    out.coeffs()(0) += f.evaluate(sigma0);
    out.coeffs()(0) -= f.evaluate(phi.eval(sigma0));
    out -= dirichlet_kernel_composed(psi0, phi, max_order) * f.evaluate(zero);
    return out;
}

PowerSeries dirichlet_commutator_apply_compositional(const LinearFractionalMap& phi,
                                                     const LinearFractionalMap& psi,
                                                     const PowerSeries& f, int max_order,
                                                     int margin) {
    int work = std::max(max_order, f.max_order()) + margin;
    // C_psi* (C_phi f)
    PowerSeries route1 =
        dirichlet_adjoint_apply(psi, compose_series(f, phi, work), max_order);
    // C_phi (C_psi* f)
    PowerSeries route2 = compose_series(dirichlet_adjoint_apply(psi, f, work), phi, work)
                             .truncated(max_order);
    return route1 - route2;
}

Eigen::MatrixXcd dirichlet_commutator_section(const LinearFractionalMap& phi,
                                              const LinearFractionalMap& psi, int max_order) {
    const int n = phi.dim();
    SpaceSpec space = SpaceSpec::dirichlet(n);
    LinearFractionalMap sigma = krein_adjoint(psi);
    const GradedBasis& basis = shared_basis(n, max_order);
    const int s = basis.size();

    GradedOperator m1 = composition_matrix(space, compose(phi, sigma), max_order);
    GradedOperator m2 = composition_matrix(space, compose(sigma, phi), max_order);
    Eigen::MatrixXcd x = m1.mat - m2.mat;

    CVec zero = CVec::Zero(n);
    CVec phi0 = phi.eval(zero);
    CVec sigma0 = sigma.eval(zero);
    CVec psi0 = psi.eval(zero);
    CVec phi_sigma0 = phi.eval(sigma0);

    std::vector<double> sqrt_w(static_cast<std::size_t>(s));
    for (int p = 0; p < s; ++p)
        sqrt_w[static_cast<std::size_t>(p)] = std::sqrt(dirichlet_monomial_norm_sq(basis.at(p)));

    auto orthonormal_column = [&](const PowerSeries& g) {
        Eigen::VectorXcd col(s);
        for (int p = 0; p < s; ++p) col(p) = g.coeff_at(p) * sqrt_w[static_cast<std::size_t>(p)];
        return col;
    };
    // evaluation row on orthonormal inputs e_alpha = z^alpha / sqrt(omega)
    auto eval_row = [&](const CVec& q) {
        Eigen::RowVectorXcd row(s);
        for (int p = 0; p < s; ++p)
            row(p) = monomial_value(basis.at(p), q) / sqrt_w[static_cast<std::size_t>(p)];
        return row;
    };

    Eigen::VectorXcd k_psi0 = orthonormal_column(dirichlet_kernel_series(psi0, max_order));
    Eigen::VectorXcd k_comp =
        orthonormal_column(dirichlet_kernel_composed(psi0, phi, max_order));
    Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(s);
    e0(0) = 1.0;

    x += k_psi0 * eval_row(phi0);
    x += e0 * eval_row(sigma0);
    x -= e0 * eval_row(phi_sigma0);
    x -= k_comp * eval_row(zero);
    return x;
}

bool dirichlet_commutator_is_zero(const LinearFractionalMap& phi, const LinearFractionalMap& psi,
                                  int probe_order, double tol) {
    const int n = phi.dim();
    const GradedBasis& basis = shared_basis(n, probe_order);
    for (int p = 0; p < basis.size(); ++p) {
        PowerSeries mono(n, probe_order);
        mono.coeffs()(p) = 1.0;
        PowerSeries img = dirichlet_commutator_apply(phi, psi, mono, probe_order + 4);
        if (std::sqrt(dirichlet_norm_sq(img)) > tol) return false;
    }
    return true;
}

double halfway_singular_value(const Eigen::MatrixXcd& section, int dim, int max_order) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(section);
    int idx = shared_basis(dim, std::max(0, max_order / 2)).size();
    idx = std::min<int>(idx, static_cast<int>(svd.singularValues().size()) - 1);
    return svd.singularValues()(idx);
}

DifferenceReport difference_compactness_verdict(const LinearFractionalMap& phi,
                                                const LinearFractionalMap& psi) {
    DifferenceReport rep;
    rep.sup_phi = sup_norm(phi);
    rep.sup_psi = sup_norm(psi);
    if (approx_equal(phi, psi, 1e-10)) {
        rep.verdict = DifferenceVerdict::EqualMaps;
    } else if (rep.sup_phi < 1.0 - 1e-8 && rep.sup_psi < 1.0 - 1e-8) {
        rep.verdict = DifferenceVerdict::BothCompact;
    } else {
        rep.verdict = DifferenceVerdict::NonCompactDifference;
    }

    const int n = phi.dim();
    SpaceSpec space = SpaceSpec::dirichlet(n);
    std::vector<int> orders = (n == 1) ? std::vector<int>{8, 16, 32} : std::vector<int>{6, 10, 14};
    for (int d : orders) {
        GradedOperator a = composition_matrix(space, phi, d);
        GradedOperator b = composition_matrix(space, psi, d);
        rep.probe_orders.push_back(d);
        rep.floors.push_back(halfway_singular_value(a.mat - b.mat, n, d));
    }
    return rep;
}

}  // namespace ballop
