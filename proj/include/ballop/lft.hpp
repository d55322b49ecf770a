#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <vector>

namespace ballop {

using Cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

/// Hermitian inner product <z, w> = sum_j z_j conj(w_j).
inline Cplx herm(const CVec& z, const CVec& w) { return w.dot(z); }

/// A linear-fractional map of the unit ball,
///   phi(z) = (A z + B) / (<z, C> + d),
/// stored as blocks of the (N+1)x(N+1) projective matrix [[A, B], [C*, d]].
/// The denominator never vanishes on the closed ball, which is equivalent
/// to |d| > ||C||; the constructor enforces it.
class LinearFractionalMap {
public:
    LinearFractionalMap(CMat a, CVec b, CVec c, Cplx d);

    static LinearFractionalMap identity(int dim);
    static LinearFractionalMap from_projective(const CMat& m);

    int dim() const { return static_cast<int>(b_.size()); }
    const CMat& a() const { return a_; }
    const CVec& b() const { return b_; }
    const CVec& c() const { return c_; }
    Cplx d() const { return d_; }

    CMat projective() const;

    /// Unit Frobenius norm, first significant entry (row-major) made real
    /// positive. Two maps are equal iff normalized matrices agree entrywise.
    CMat normalized_projective() const;

    /// Representative rescaled so that d is real and positive. Same map;
    /// fixes the branch data used by the adjoint auxiliary functions.
    LinearFractionalMap phase_normalized() const;

    Cplx denominator(const CVec& z) const { return herm(z, c_) + d_; }
    CVec eval(const CVec& z) const;

    LinearFractionalMap inverse() const;

private:
    CMat a_;
    CVec b_;
    CVec c_;
    Cplx d_;
};

/// phi after rho: eval(compose(phi, rho), z) == eval(phi, eval(rho, z)).
LinearFractionalMap compose(const LinearFractionalMap& phi, const LinearFractionalMap& rho);

/// Krein adjoint sigma(z) = (A* z - C) / (<z, -B> + conj(d)). An involution
/// on map data; equals the inverse map when phi is an automorphism.
LinearFractionalMap krein_adjoint(const LinearFractionalMap& phi);

/// Involutive Moebius automorphism exchanging 0 and a (||a|| < 1).
LinearFractionalMap ball_automorphism(const CVec& a);

/// z -> U z for unitary U.
LinearFractionalMap unitary_map(const CMat& u);

/// Disk map (a z + b) / (c z + d) as a 1-dimensional LFT.
LinearFractionalMap disk_map(Cplx a, Cplx b, Cplx c, Cplx d);

bool approx_equal(const LinearFractionalMap& phi, const LinearFractionalMap& psi,
                  double tol = 1e-10);
bool is_identity_map(const LinearFractionalMap& phi, double tol = 1e-10);

/// true iff normalized projective matrices of phi o psi and psi o phi agree
/// entrywise within tol.
bool commutes(const LinearFractionalMap& phi, const LinearFractionalMap& psi, double tol = 1e-10);

/// sup over the closed ball of ||phi(z)||, attained on the sphere. Coarse
/// sphere grid (disk: 4096-point theta grid) plus local golden-section
/// refinement; absolute accuracy about 1e-8.
double sup_norm(const LinearFractionalMap& phi);

bool is_self_map(const LinearFractionalMap& phi, double tol = 1e-10);

/// Self-map whose Krein adjoint composes with it to the identity and is
/// itself a self-map.
bool is_automorphism(const LinearFractionalMap& phi, double tol = 1e-8);

/// Boundary point zeta on the unit sphere (checked to 1e-12).
class BoundaryPoint {
public:
    explicit BoundaryPoint(CVec zeta);
    static BoundaryPoint direction(const CVec& v);  // normalizes v
    const CVec& vec() const { return zeta_; }
    int dim() const { return static_cast<int>(zeta_.size()); }

private:
    CVec zeta_;
};

struct BoundaryImage {
    CVec point;
    bool on_sphere = false;  // ||point|| within 1e-10 of 1
};

/// Radial limit of phi at zeta; LFTs extend continuously to the closed ball.
BoundaryImage boundary_image(const LinearFractionalMap& phi, const BoundaryPoint& zeta);

/// Radial angular-derivative data at a boundary point. The quotient
/// q(r) = (1 - |phi(r zeta)|) / (1 - r) is sampled on r_k = 1 - 2^{-k},
/// k = 4..40, and Richardson-extrapolated. `value` is +infinity when the
/// quotient diverges (no finite angular derivative).
struct AngularDerivative {
    double value = 0.0;
    double error_estimate = 0.0;
    double grid_min = 0.0;      // min of q over the sampled grid
    bool finite = false;
    bool grid_disagrees = false;  // |extrapolated - grid_min| > 1e-6
};

AngularDerivative angular_derivative(const LinearFractionalMap& phi, const BoundaryPoint& zeta);

enum class DiskMapKind { Parabolic, Hyperbolic, InteriorOnly, Identity };

/// Fixed-point classification of a disk LFT self-map: parabolic (one
/// boundary fixed point of multiplicity two), hyperbolic (boundary fixed
/// point plus a distinct second one, possibly at infinity), or interior-only.
struct DiskFixedPointClass {
    DiskMapKind kind = DiskMapKind::InteriorOnly;
    std::vector<Cplx> points;        // parabolic: 1 entry; hyperbolic: boundary point first
    bool second_at_infinity = false; // hyperbolic with the companion point at infinity
};

DiskFixedPointClass disk_fixed_points(const LinearFractionalMap& phi);

}  // namespace ballop
