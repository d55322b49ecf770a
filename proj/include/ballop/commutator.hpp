#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ballop/lft.hpp"
#include "ballop/space_spec.hpp"

namespace ballop {

/// A precondition of one of the limit statements failed (boundary images
/// differ, angular derivative infinite, wrong map class, ...).
class HypothesisError : public std::runtime_error {
public:
    explicit HypothesisError(const std::string& what) : std::runtime_error(what) {}
};

/// Radial scan of <C_psi* k_{r zeta2}, C_phi* k_{r zeta1}> against the
/// angular-derivative prediction (2 / (d_phi(zeta1) + d_psi(zeta2)))^t.
struct LimitScan {
    std::vector<double> radii;
    std::vector<Cplx> values;
    Cplx extrapolated{0.0, 0.0};
    double error_estimate = 0.0;
    bool converged = false;
    double predicted = 0.0;
    double d_phi = 0.0;
    double d_psi = 0.0;
    bool agrees = false;  // |extrapolated - predicted| <= max(1e-5, error)
};

LimitScan kernel_cross_limit_scan(const SpaceSpec& space, const LinearFractionalMap& phi,
                                  const LinearFractionalMap& psi, const BoundaryPoint& zeta1,
                                  const BoundaryPoint& zeta2, int k_min = 4, int k_max = 20);

/// <C_phi k_a, C_psi k_b>. Disk: boundary trapezoid (Hardy) or radial
/// Gauss-Jacobi times angular trapezoid (Bergman), node counts adapted to
/// the kernel depth. Ball: graded-matrix route at the given order.
Cplx forward_cross_inner(const SpaceSpec& space, const LinearFractionalMap& phi,
                         const LinearFractionalMap& psi, const CVec& a, const CVec& b,
                         int matrix_order = 16);

struct KernelScoreReport {
    double score = 0.0;                    // max over directions of the extrapolated gap
    std::vector<double> direction_scores;
    std::vector<double> floors;            // half-basis singular values at D, D+4
    int directions = 0;
    int max_order = 0;
    int k_max = 0;
};

/// Compactness evidence for [C_psi*, C_phi] on Hardy/Bergman: for seeded
/// boundary directions omega, scans the gap between the forward and backward
/// kernel pairings along zeta_i = (map)^{-1}(omega) and extrapolates r -> 1;
/// zero gaps witness compactness, stable positive gaps rule it out.
KernelScoreReport commutator_kernel_score(const SpaceSpec& space, const LinearFractionalMap& phi,
                                          const LinearFractionalMap& psi, int directions,
                                          int max_order, std::uint64_t seed = 0, int k_max = 0);

struct CommutatorVerdict {
    bool predicate = false;        // the algebraic characterization of compactness
    double score = 0.0;            // kernel-scan evidence (Hardy/Bergman)
    double floor = 0.0;            // singular-value evidence
    bool compact = false;          // verdict when coherent
    bool inconclusive = false;     // predicate and evidence disagree
    std::string label;
    // side data for reports
    double sup_phi = 0.0;
    double sup_psi = 0.0;
    bool zero_commutator = false;
};

/// Hardy/Bergman automorphism commutator: compact iff the maps commute and
/// both are unitary. Inputs must be non-identity automorphisms.
CommutatorVerdict automorphism_commutator_verdict(const SpaceSpec& space,
                                                  const LinearFractionalMap& phi,
                                                  const LinearFractionalMap& psi,
                                                  int directions = 16, int max_order = 12,
                                                  std::uint64_t seed = 0);

/// Dirichlet, general linear-fractional self-maps: with a nonzero
/// commutator, non-trivially compact iff both sup-norms are 1 and phi
/// commutes with the Krein adjoint of psi.
CommutatorVerdict dirichlet_selfmap_commutator_verdict(const LinearFractionalMap& phi,
                                                       const LinearFractionalMap& psi,
                                                       int max_order = 12);

/// Dirichlet, automorphisms: compact iff the maps commute.
CommutatorVerdict dirichlet_automorphism_commutator_verdict(const LinearFractionalMap& phi,
                                                            const LinearFractionalMap& psi,
                                                            int max_order = 12);

enum class DiskPairCase { BothParabolicSharedPoint, HyperbolicConjugatePair, Neither };

struct DiskPairReport {
    DiskPairCase pair_case = DiskPairCase::Neither;
    Cplx shared_point{0.0, 0.0};
    Cplx second_phi{0.0, 0.0};
    Cplx second_psi{0.0, 0.0};
    bool second_phi_infinite = false;
    bool second_psi_infinite = false;
    double floor = 0.0;  // Dirichlet commutator evidence
};

/// Disk pairs with a non-automorphism member, both of sup-norm one:
/// non-trivially compact on the Dirichlet space iff both maps are parabolic
/// with a shared boundary fixed point, or both hyperbolic with fixed points
/// (zeta, a) and (zeta, 1/conj(a)).
DiskPairReport disk_nonautomorphism_pair_classify(const LinearFractionalMap& phi,
                                                  const LinearFractionalMap& psi,
                                                  int max_order = 12);

/// |(psi^{-1})'(zeta1) psi'(zeta2)| for disk automorphism pairs sharing a
/// boundary image; equals 1 in the compact regime.
double derivative_product_invariant(const LinearFractionalMap& psi, const BoundaryPoint& zeta1,
                                    const BoundaryPoint& zeta2);

}  // namespace ballop
