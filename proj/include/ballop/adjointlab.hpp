#pragma once

#include <vector>

#include "ballop/lft.hpp"
#include "ballop/opalg.hpp"
#include "ballop/power_series.hpp"
#include "ballop/space_spec.hpp"

namespace ballop {

/// Auxiliary data (g, h, sigma) of the adjoint factorization
/// C_phi* = T_g C_sigma T_h*, with g(z) = (<z,-B> + conj d)^{-t},
/// h(z) = (<z,C> + d)^t and sigma the Krein adjoint. Built from the
/// phase-normalized representative (d real positive) so principal-branch
/// powers are continuous on the closed ball.
struct AuxiliaryTriple {
    LinearFractionalMap phi;    // phase-normalized representative
    LinearFractionalMap sigma;
    double t = 1.0;
    bool g_bounded = true;      // ||B|| < |d|: g's series converges on the closed ball
    PowerSeries g_series;       // meaningful when g_bounded

    Cplx g_eval(const CVec& z) const;
    Cplx h_eval(const CVec& z) const;
};

AuxiliaryTriple auxiliary_functions(const SpaceSpec& space, const LinearFractionalMap& phi,
                                    int series_order = 24);

/// Residual of the scalar form of the adjoint factorization applied to a
/// kernel: | g(z) conj(h(w)) (1 - <sigma(z), w>)^{-t} - (1 - <z, phi(w)>)^{-t} |.
double adjoint_identity_residual(const SpaceSpec& space, const AuxiliaryTriple& aux,
                                 const CVec& z, const CVec& w);
double adjoint_identity_residual(const SpaceSpec& space, const LinearFractionalMap& phi,
                                 const CVec& z, const CVec& w);

/// Rescales a disk map so that ad - bc = 1.
LinearFractionalMap determinant_normalized(const LinearFractionalMap& disk_phi);

/// Residual of h(z) conj(g(phi(z))) = |cz + d|^{2t} for a det-normalized
/// disk map. The identity is exact at t = 1 for automorphisms; at other t
/// it is measured, not asserted.
double normalization_identity_residual(double t, const LinearFractionalMap& disk_phi, Cplx z);

struct OperatorResidualReport {
    double residual = 0.0;   // spectral norm on the degrees <= block_order section
    int block_order = 0;
    int working_order = 0;
    double stability = 0.0;  // residual change at the last escalation probe
};

/// Residual of the automorphism adjoint form C_phi* = T_f C_{phi^{-1}},
/// f = ((1-|phi(0)|^2)/|1-<z,phi(0)>|^2)^t, with T_f realized through the
/// factorization f = (1-|phi(0)|^2)^t u ubar, u = (1-<z,phi(0)>)^{-t}.
OperatorResidualReport adjoint_inverse_form_residual(const SpaceSpec& space,
                                                     const LinearFractionalMap& phi,
                                                     int block_order);

/// || (C_phi T_f - T_{f o phi} C_phi) k_{r zeta} || for f = conj(v) u with u, v
/// polynomials and phi an automorphism, computed exactly per radius through
/// the operator reduction X k_w = -c1 P(G Q(Vbar F)): no basis truncation in
/// r, feasible arbitrarily close to the sphere. N <= 2.
double kernel_semicommutator_value(const SpaceSpec& space, const LinearFractionalMap& phi,
                                   const PowerSeries& u, const PowerSeries& v,
                                   const BoundaryPoint& zeta, double r);

struct KernelDecaySample {
    double r = 0.0;
    double value = 0.0;
};

struct SemiCommutatorReport {
    double factorization_residual = 0.0;  // exact-block residual of
                                          // C_phi T_f = T_{1/K_a} T_{f o phi} T_{K_a} C_phi
    double rudin_residual = 0.0;          // pointwise check of the change-of-variable identity
    std::vector<KernelDecaySample> kernel_samples;
    double kernel_limit = 0.0;
    double kernel_error = 0.0;
    bool kernel_converged = false;
    int block_order = 0;
    int working_order = 0;
};

/// Exact factorization residual plus the kernel decay scan for the
/// semi-commutator C_phi T_f - T_{f o phi} C_phi.
SemiCommutatorReport semicommutator_factorization_report(const SpaceSpec& space,
                                                         const LinearFractionalMap& phi,
                                                         const PowerSeries& u,
                                                         const PowerSeries& v, int block_order,
                                                         const BoundaryPoint& zeta, int k_min = 2,
                                                         int k_max = 0 /* 0 = per-dim default */);

}  // namespace ballop
