#include "ballop/spaces.hpp"

#include <cmath>
#include <stdexcept>

namespace ballop {

KernelPoint::KernelPoint(CVec w) : w_(std::move(w)) {
    if (w_.norm() >= 1.0) throw std::invalid_argument("kernel point must be interior");
}

Cplx kernel_eval(const SpaceSpec& space, const CVec& w, const CVec& z) {
    Cplx base = Cplx(1.0, 0.0) - herm(z, w);
    if (space.kind == SpaceKind::Dirichlet) return Cplx(1.0, 0.0) - std::log(base);
    return std::exp(-space.kernel_exponent() * std::log(base));
}

double kernel_norm_sq(const SpaceSpec& space, const CVec& w) {
    double x = 1.0 - w.squaredNorm();
    if (space.kind == SpaceKind::Dirichlet) return 1.0 - std::log(x);
    return std::pow(x, -space.kernel_exponent());
}

Cplx backward_cross_inner(const SpaceSpec& space, const LinearFractionalMap& phi,
                          const LinearFractionalMap& psi, const CVec& a, const CVec& b) {
    if (space.kind == SpaceKind::Dirichlet)
        throw std::invalid_argument(
            "backward cross inner products are closed-form on Hardy/Bergman only");
    double t = space.kernel_exponent();
    Cplx base = Cplx(1.0, 0.0) - herm(phi.eval(b), psi.eval(a));
    double na = 1.0 - a.squaredNorm();
    double nb = 1.0 - b.squaredNorm();
    return std::pow(na, t / 2.0) * std::pow(nb, t / 2.0) * std::exp(-t * std::log(base));
}

namespace {

// Radial shell sums sum_{|alpha|=k} |w^alpha|^2 / omega_alpha as functions of
// x = ||w||^2: Hardy C(N-1+k, k) x^k; Bergman Gamma(N+k+s+1)/(k! Gamma(N+s+1)) x^k;
// Dirichlet x^k / k (k >= 1).
double kernel_shell(const SpaceSpec& space, double x, int k) {
    int n = space.dim;
    switch (space.kind) {
        case SpaceKind::Hardy: {
            double lg = log_factorial(n - 1 + k) - log_factorial(n - 1) - log_factorial(k);
            return std::exp(lg + k * std::log(x));
        }
        case SpaceKind::Bergman: {
            double lg = std::lgamma(n + k + space.s + 1.0) - log_factorial(k) -
                        std::lgamma(n + space.s + 1.0);
            return std::exp(lg + k * std::log(x));
        }
        default:
            if (k == 0) return 1.0;
            return std::exp(k * std::log(x)) / k;
    }
}

}  // namespace

double kernel_tail_bound(const SpaceSpec& space, double w_norm_sq, int max_order) {
    if (w_norm_sq <= 0.0) return 0.0;
    if (w_norm_sq >= 1.0) throw std::invalid_argument("tail bound needs ||w|| < 1");
    double sum = 0.0;
    for (int k = max_order + 1; k < max_order + 100000; ++k) {
        double term = kernel_shell(space, w_norm_sq, k);
        sum += term;
        if (term < 1e-18 * (sum + 1e-300)) break;
    }
    return sum;
}

KernelVector coefficient_vector_of_kernel(const SpaceSpec& space, const CVec& w,
                                          const GradedBasis& basis) {
    if (w.size() != space.dim || basis.dim() != space.dim)
        throw std::invalid_argument("dimension mismatch");
    KernelVector kv;
    kv.coeffs.resize(basis.size());
    CVec wc = w.conjugate();
    for (int p = 0; p < basis.size(); ++p) {
        const MultiIndex& alpha = basis.at(p);
        kv.coeffs(p) = monomial_value(alpha, wc) / std::sqrt(monomial_norm_sq(space, alpha));
    }
    kv.tail_bound = kernel_tail_bound(space, w.squaredNorm(), basis.max_order());
    return kv;
}

Cplx coefficient_inner(const SpaceSpec& space, const GradedBasis& basis,
                       const Eigen::VectorXcd& f, const Eigen::VectorXcd& g) {
    if (f.size() != basis.size() || g.size() != basis.size())
        throw std::invalid_argument("coefficient vector size mismatch");
    Cplx sum = 0.0;
    for (int p = 0; p < basis.size(); ++p)
        sum += f(p) * std::conj(g(p)) * monomial_norm_sq(space, basis.at(p));
    return sum;
}

Cplx evaluate_coefficients(const GradedBasis& basis, const Eigen::VectorXcd& f, const CVec& z) {
    Cplx sum = 0.0;
    for (int p = 0; p < basis.size(); ++p) sum += f(p) * monomial_value(basis.at(p), z);
    return sum;
}

Cplx monomial_value(const MultiIndex& alpha, const CVec& z) {
    Cplx v = 1.0;
    for (int i = 0; i < alpha.dim(); ++i) {
        Cplx zi = z(i);
        for (int k = 0; k < alpha[i]; ++k) v *= zi;
    }
    return v;
}

}  // namespace ballop
