#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "ballop/lft.hpp"
#include "ballop/power_series.hpp"
#include "ballop/space_spec.hpp"

namespace ballop {

/// Thrown when a truncated matrix fails to stabilize under working-degree
/// escalation; carries the last measured entry change.
class TruncationError : public std::runtime_error {
public:
    TruncationError(const std::string& what, double entry_change, int working_order)
        : std::runtime_error(what), entry_change(entry_change), working_order(working_order) {}
    double entry_change;
    int working_order;
};

/// Finite section of an operator over the orthonormalized graded basis
/// e_alpha = z^alpha / sqrt(omega_alpha), |alpha| <= max_order. Adjoints in
/// this basis are conjugate transposes.
struct GradedOperator {
    SpaceSpec space;
    int max_order = 0;
    Eigen::MatrixXcd mat;
    int exact_order = 0;      // columns exact for inputs of order <= exact_order
    double stability = 0.0;   // entry change measured at the accepted escalation
    int working_order = 0;    // internal degree the section was assembled at

    GradedOperator adjoint() const;
};

/// Matrix of C_phi f = f o phi. Columns are exact for every |alpha| <= D
/// (composition needs only forward coefficients). phi must certify as a
/// self-map.
GradedOperator composition_matrix(const SpaceSpec& space, const LinearFractionalMap& phi, int max_order);

/// Matrix of f -> u f; entry (gamma, beta) = coeff_{gamma-beta}(u)
/// sqrt(omega_gamma / omega_beta) when gamma >= beta componentwise.
GradedOperator multiplication_matrix(const SpaceSpec& space, const PowerSeries& u, int max_order);

/// Toeplitz matrix with mixed symbol conj(v) u (co-analytic times analytic,
/// multiply-then-project): realized exactly as adjoint(mult(v)) * mult(u) at
/// the working degree, restricted to degrees <= D. The working degree is
/// escalated (+4, twice) until the restricted entries move less than tol
/// under a +2 probe; otherwise a TruncationError carries the report.
GradedOperator mixed_toeplitz_matrix(const SpaceSpec& space, const PowerSeries& u,
                                     const PowerSeries& v, int max_order, int working_order,
                                     double tol = 1e-9);

/// Section of [C_psi*, C_phi] = C_psi* C_phi - C_phi C_psi* assembled at
/// working degree (default 2 D) with the same stability escalation.
GradedOperator commutator_matrix(const SpaceSpec& space, const LinearFractionalMap& phi,
                                 const LinearFractionalMap& psi, int max_order,
                                 double tol = 1e-9);

/// Top-k singular values, descending.
std::vector<double> singular_values(const GradedOperator& op, int k);

double spectral_norm(const Eigen::MatrixXcd& m);

/// Coefficients of u o phi to the requested order (exact: composition only
/// consumes forward coefficients of u up to its own truncation).
PowerSeries compose_series(const PowerSeries& u, const LinearFractionalMap& phi, int max_order);

/// Monomial-coefficient columns of phi^alpha for |alpha| <= D; building
/// block shared by composition_matrix and compose_series.
std::vector<Eigen::VectorXcd> lft_monomial_powers(const LinearFractionalMap& phi, int max_order);

}  // namespace ballop
