#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ballop/lft.hpp"
#include "ballop/power_series.hpp"
#include "ballop/space_spec.hpp"

namespace ballop {

/// Dirichlet inner product of coefficient functions:
/// f(0) conj(g(0)) + sum_{|alpha|>=1} f_a conj(g_a) |alpha| alpha!/|alpha|!.
Cplx dirichlet_inner(const PowerSeries& f, const PowerSeries& g);
double dirichlet_norm_sq(const PowerSeries& f);

/// Truncated Dirichlet kernel K_w = 1 + log(1/(1 - <z,w>)) as a series;
/// exact to the requested order.
PowerSeries dirichlet_kernel_series(const CVec& w, int max_order);

/// K_w o phi as a truncated series (exact: the log of the affine ratio is
/// expanded factor by factor, principal branch pinned at z = 0).
PowerSeries dirichlet_kernel_composed(const CVec& w, const LinearFractionalMap& phi,
                                      int max_order);

/// Adjoint of C_phi on the Dirichlet space:
/// C_phi* f = f(0) K_{phi(0)} + f o sigma - f(sigma(0)), sigma the Krein
/// adjoint of phi. Exact to max_order when f's coefficients are complete.
PowerSeries dirichlet_adjoint_apply(const LinearFractionalMap& phi, const PowerSeries& f,
                                    int max_order);

/// [C_psi*, C_phi] f expanded through the adjoint formula, with the
/// composition part carried by the composed maps (exact to max_order):
/// (C_sigma C_phi - C_phi C_sigma) f + f(phi(0)) K_{psi(0)} + f(sigma(0))
/// - f(phi(sigma(0))) - f(0) K_{psi(0)} o phi,  sigma = Krein adjoint of psi.
PowerSeries dirichlet_commutator_apply(const LinearFractionalMap& phi,
                                       const LinearFractionalMap& psi, const PowerSeries& f,
                                       int max_order);

/// Same commutator computed compositionally (adjoint-apply after compose,
/// minus compose after adjoint-apply) at working degree max_order + margin;
/// agrees with the formula route within truncation tolerance.
PowerSeries dirichlet_commutator_apply_compositional(const LinearFractionalMap& phi,
                                                     const LinearFractionalMap& psi,
                                                     const PowerSeries& f, int max_order,
                                                     int margin = 40);

/// Section of [C_psi*, C_phi] over the orthonormalized Dirichlet basis,
/// assembled exactly from composition matrices of the composed maps plus the
/// rank-2 kernel corrections.
Eigen::MatrixXcd dirichlet_commutator_section(const LinearFractionalMap& phi,
                                              const LinearFractionalMap& psi, int max_order);

/// True when every monomial to probe_order maps to a function of Dirichlet
/// norm below tol (the zero-commutator test behind the non-degeneracy
/// hypothesis).
bool dirichlet_commutator_is_zero(const LinearFractionalMap& phi, const LinearFractionalMap& psi,
                                  int probe_order = 8, double tol = 1e-9);

enum class DifferenceVerdict { EqualMaps, BothCompact, NonCompactDifference };

struct DifferenceReport {
    DifferenceVerdict verdict = DifferenceVerdict::EqualMaps;
    double sup_phi = 0.0;
    double sup_psi = 0.0;
    /// Singular value at the half-basis index of the section of C_phi - C_psi
    /// on the Dirichlet graded basis, per probed order (evidence only).
    std::vector<int> probe_orders;
    std::vector<double> floors;
};

/// C_phi - C_psi is compact on the Dirichlet space iff the maps coincide or
/// both sup-norms sit below 1; the verdict reports which branch fired plus
/// the singular-value corroboration.
DifferenceReport difference_compactness_verdict(const LinearFractionalMap& phi,
                                                const LinearFractionalMap& psi);

/// Singular value of the section at the half-basis index: decays with the
/// probe order for compact operators, stabilizes above zero otherwise.
double halfway_singular_value(const Eigen::MatrixXcd& section, int dim, int max_order);

}  // namespace ballop
