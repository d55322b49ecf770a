#pragma once

#include <complex>

#include "ballop/lft.hpp"
#include "ballop/multiindex.hpp"
#include "ballop/space_spec.hpp"

namespace ballop {

/// Interior point ||w|| < 1 at which kernels are evaluated.
class KernelPoint {
public:
    explicit KernelPoint(CVec w);
    const CVec& vec() const { return w_; }

private:
    CVec w_;
};

/// K_w(z): (1 - <z,w>)^{-t} for Hardy/Bergman (principal branch, valid since
/// Re(1 - <z,w>) > 0 on the open ball), 1 + log(1/(1 - <z,w>)) for Dirichlet.
Cplx kernel_eval(const SpaceSpec& space, const CVec& w, const CVec& z);

/// ||K_w||^2 = K_w(w).
double kernel_norm_sq(const SpaceSpec& space, const CVec& w);

/// <C_psi* k_a, C_phi* k_b> in closed form via C_psi* K_a = K_{psi(a)}:
/// (1-|a|^2)^{t/2} (1-|b|^2)^{t/2} (1 - <phi(b), psi(a)>)^{-t}.
/// Hardy/Bergman only.
Cplx backward_cross_inner(const SpaceSpec& space, const LinearFractionalMap& phi,
                          const LinearFractionalMap& psi, const CVec& a, const CVec& b);

/// Truncated coefficient vector of K_w over the orthonormalized graded basis
/// e_alpha = z^alpha / sqrt(omega_alpha); entry = conj(w)^alpha / sqrt(omega_alpha).
struct KernelVector {
    Eigen::VectorXcd coeffs;
    double tail_bound = 0.0;  // ||K_w - truncation||^2, summed radial shells
};

KernelVector coefficient_vector_of_kernel(const SpaceSpec& space, const CVec& w,
                                          const GradedBasis& basis);

/// Norm-squared tail sum_{k > max_order} of the radial kernel shells at x = ||w||^2.
double kernel_tail_bound(const SpaceSpec& space, double w_norm_sq, int max_order);

/// <f, g> from monomial coefficient vectors over `basis`, weighted by the
/// space's monomial norms.
Cplx coefficient_inner(const SpaceSpec& space, const GradedBasis& basis,
                       const Eigen::VectorXcd& f, const Eigen::VectorXcd& g);

/// Evaluate a coefficient vector (monomial coefficients over `basis`) at z.
Cplx evaluate_coefficients(const GradedBasis& basis, const Eigen::VectorXcd& f, const CVec& z);

/// z^alpha
Cplx monomial_value(const MultiIndex& alpha, const CVec& z);

}  // namespace ballop
