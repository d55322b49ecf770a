#include "ballop/commutator.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "ballop/dirichletops.hpp"
#include "ballop/multiindex.hpp"
#include "ballop/opalg.hpp"
#include "ballop/parallel.hpp"
#include "ballop/quadrature.hpp"
#include "ballop/richardson.hpp"
#include "ballop/spaces.hpp"

namespace ballop {

namespace {

double finite_or_throw(const AngularDerivative& ad, const char* who) {
    if (!ad.finite)
        throw HypothesisError(std::string(who) + ": no finite angular derivative at the boundary point");
    return ad.value;
}

}  // namespace

LimitScan kernel_cross_limit_scan(const SpaceSpec& space, const LinearFractionalMap& phi,
                                  const LinearFractionalMap& psi, const BoundaryPoint& zeta1,
                                  const BoundaryPoint& zeta2, int k_min, int k_max) {
    if (!space.has_kernel_exponent())
        throw std::invalid_argument("limit scans live on Hardy/Bergman spaces");
    BoundaryImage i1 = boundary_image(phi, zeta1);
    BoundaryImage i2 = boundary_image(psi, zeta2);
    if (!i1.on_sphere || !i2.on_sphere)
        throw HypothesisError("boundary image leaves the sphere");
    if ((i1.point - i2.point).norm() > 1e-8)
        throw HypothesisError("boundary images of the two maps differ");

    LimitScan scan;
    scan.d_phi = finite_or_throw(angular_derivative(phi, zeta1), "phi");
    scan.d_psi = finite_or_throw(angular_derivative(psi, zeta2), "psi");
    double t = space.kernel_exponent();
    scan.predicted = std::pow(2.0 / (scan.d_phi + scan.d_psi), t);

    k_max = std::min(k_max, 26);  // kernel normalizations underflow past 2^-26
    std::vector<Cplx> vals;
    for (int k = k_min; k <= k_max; ++k) {
        double r = 1.0 - std::ldexp(1.0, -k);
        Cplx v = backward_cross_inner(space, phi, psi, zeta2.vec() * r, zeta1.vec() * r);
        scan.radii.push_back(r);
        scan.values.push_back(v);
        vals.push_back(v);
    }
    ExtrapolationResult ex = richardson_extrapolate(vals, 1e-6);
    scan.extrapolated = ex.limit;
    scan.error_estimate = ex.error_estimate;
    scan.converged = ex.converged;
    scan.agrees =
        std::abs(ex.limit - Cplx(scan.predicted, 0.0)) <= std::max(1e-5, ex.error_estimate);
    return scan;
}

namespace {

// Taylor coefficients of the composed kernel k_w o phi on the disk:
// k_w(phi(z)) = C0 (1+pz)^t (1+qz)^{-t} / value-at-0 normalization, generated
// by the first-order ODE recurrence.
struct ComposedKernelSeries {
    Cplx c0, p, q;
    double t;
    Cplx f_prev, f_cur;
    int n = 0;

    ComposedKernelSeries(const SpaceSpec& space, const LinearFractionalMap& phi, Cplx w) {
        t = space.kernel_exponent();
        Cplx a = phi.a()(0, 0), b = phi.b()(0), c = std::conj(phi.c()(0)), d = phi.d();
        Cplx wb = std::conj(w);
        p = c / d;
        q = (c - wb * a) / (d - wb * b);
        CVec z0 = CVec::Zero(1);
        Cplx phi0 = phi.eval(z0)(0);
        c0 = std::pow(1.0 - std::norm(w), t / 2.0) *
             std::exp(-t * std::log(Cplx(1.0, 0.0) - wb * phi0));
        f_prev = 0.0;
        f_cur = 1.0;
    }

    Cplx coeff() const { return c0 * f_cur; }

    void advance() {
        // (n+1) F_{n+1} = (t(p-q) - (p+q) n) F_n - pq (n-1) F_{n-1}
        Cplx next = ((t * (p - q) - (p + q) * static_cast<double>(n)) * f_cur -
                     p * q * static_cast<double>(n - 1) * f_prev) /
                    static_cast<double>(n + 1);
        f_prev = f_cur;
        f_cur = next;
        ++n;
    }

    double decay_scale() const { return std::max(std::abs(p), std::abs(q)); }
};

// Streamed weighted pairing sum_n F_n conj(G_n) omega_n; exact substitute for
// the boundary/area quadrature, stable arbitrarily close to the sphere.
Cplx disk_forward_pairing(const SpaceSpec& space, const LinearFractionalMap& phi,
                          const LinearFractionalMap& psi, Cplx a, Cplx b) {
    ComposedKernelSeries f(space, phi, a);
    ComposedKernelSeries g(space, psi, b);
    double s = (space.kind == SpaceKind::Bergman) ? space.s : 0.0;
    bool bergman = space.kind == SpaceKind::Bergman;

    double rho = std::max(f.decay_scale(), g.decay_scale());
    long n_cap = 4000 + static_cast<long>(80.0 / std::max(1e-8, -std::log(std::min(rho, 0.999999)) ));
    n_cap = std::min(n_cap, 60000000L);

    Cplx sum = 0.0;
    double omega = 1.0;
    for (long n = 0; n <= n_cap; ++n) {
        sum += f.coeff() * std::conj(g.coeff()) * omega;
        if (bergman) omega *= (static_cast<double>(n) + 1.0) / (static_cast<double>(n) + s + 2.0);
        f.advance();
        g.advance();
    }
    return sum;
}

}  // namespace

Cplx forward_cross_inner(const SpaceSpec& space, const LinearFractionalMap& phi,
                         const LinearFractionalMap& psi, const CVec& a, const CVec& b,
                         int matrix_order) {
    if (!space.has_kernel_exponent())
        throw std::invalid_argument("forward cross inner products live on Hardy/Bergman spaces");
    if (space.dim == 1) {
        double rmax = std::max(a.norm(), b.norm());
        auto fa = [&](std::complex<double> zeta) {
            CVec z(1);
            z(0) = zeta;
            Cplx fz = kernel_eval(space, a, phi.eval(z)) /
                      std::sqrt(kernel_norm_sq(space, a));
            Cplx gz = kernel_eval(space, b, psi.eval(z)) /
                      std::sqrt(kernel_norm_sq(space, b));
            return fz * std::conj(gz);
        };
        if (space.kind == SpaceKind::Hardy) {
            long m = std::max(8192L, static_cast<long>(180.0 / (1.0 - rmax)));
            m = std::min(m, 1L << 22);
            return circle_mean(static_cast<int>(m), fa);
        }
        // Bergman: radial Gauss-Jacobi in u = rho^2 against (1-u)^s, angular
        // trapezoid with node counts adapted to the kernel depth.
        int radial = std::max(64, static_cast<int>(8.0 / std::sqrt(1.0 - rmax)));
        radial = std::min(radial, 2048);
        QuadratureRule rule = gauss_jacobi_01(radial, space.s);
        Cplx acc = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            double rho = std::sqrt(rule.nodes[i]);
            long m = std::max(512L,
                              static_cast<long>(90.0 / (0.25 * (1.0 - rmax) + (1.0 - rho))));
            m = std::min(m, 1L << 20);
            Cplx ring = circle_mean(static_cast<int>(m), [&](std::complex<double> zeta) {
                return fa(rho * zeta);
            });
            acc += rule.weights[i] * ring;
        }
        return (space.s + 1.0) * acc;
    }

    // Ball route: graded sections.
    const GradedBasis& basis = shared_basis(space.dim, matrix_order);
    GradedOperator mphi = composition_matrix(space, phi, matrix_order);
    GradedOperator mpsi = composition_matrix(space, psi, matrix_order);
    Eigen::VectorXcd va = coefficient_vector_of_kernel(space, a, basis).coeffs /
                          std::sqrt(kernel_norm_sq(space, a));
    Eigen::VectorXcd vb = coefficient_vector_of_kernel(space, b, basis).coeffs /
                          std::sqrt(kernel_norm_sq(space, b));
    return (mpsi.mat * vb).dot(mphi.mat * va);
}

namespace {

CMat seeded_random_unitary(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    CMat g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = Cplx(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<CMat> qr(g);
    CMat q = qr.householderQ();
    CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
        Cplx d = r(j, j);
        q.col(j) *= (std::abs(d) > 1e-15) ? d / std::abs(d) : Cplx(1.0, 0.0);
    }
    return q;
}

}  // namespace

KernelScoreReport commutator_kernel_score(const SpaceSpec& space, const LinearFractionalMap& phi,
                                          const LinearFractionalMap& psi, int directions,
                                          int max_order, std::uint64_t seed, int k_max) {
    if (!space.has_kernel_exponent())
        throw std::invalid_argument("kernel scores live on Hardy/Bergman spaces");
    const int n = space.dim;
    LinearFractionalMap phi_inv = phi.inverse();
    LinearFractionalMap psi_inv = psi.inverse();

    if (k_max <= 0) k_max = (n == 1) ? 13 : 8;

    KernelScoreReport rep;
    rep.directions = directions;
    rep.max_order = max_order;

    // Ball route: one consistent finite section for both pairings. Fixed
    // working margin; the paired truncation cancels exactly for commuting
    // unitaries, and the D / D+4 floors cross-validate the rest.
    auto fixed_section = [&](int order) {
        GradedOperator mphi = composition_matrix(space, phi, order * 2 + 4);
        GradedOperator mpsi = composition_matrix(space, psi, order * 2 + 4);
        int s = shared_basis(n, order).size();
        Eigen::MatrixXcd full =
            mpsi.mat.adjoint() * mphi.mat - mphi.mat * mpsi.mat.adjoint();
        return Eigen::MatrixXcd(full.topLeftCorner(s, s));
    };
    Eigen::MatrixXcd x;
    if (n > 1) x = fixed_section(max_order);

    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<CVec> omegas;
    for (int i = 0; i < directions; ++i) {
        CMat u = seeded_random_unitary(n, rng);
        omegas.push_back(u.col(0));
    }

    int effective_kmax = k_max;
    if (n > 1) {
        // keep the truncated kernels honest: tail mass below 5 percent
        effective_kmax = 0;
        for (int k = 1; k <= k_max; ++k) {
            double r = 1.0 - std::ldexp(1.0, -k);
            double ratio = kernel_tail_bound(space, r * r, max_order) /
                           std::pow(1.0 - r * r, -space.kernel_exponent());
            if (ratio <= 0.05)
                effective_kmax = k;
            else
                break;
        }
        if (effective_kmax < 3) effective_kmax = 3;
    }
    rep.k_max = effective_kmax;

    rep.direction_scores.assign(static_cast<std::size_t>(directions), 0.0);
    parallel_for(directions, [&](int i) {
        const CVec& omega = omegas[static_cast<std::size_t>(i)];
        CVec z1 = phi_inv.eval(omega);
        CVec z2 = psi_inv.eval(omega);
        z1 /= z1.norm();
        z2 /= z2.norm();

        std::vector<Cplx> gaps;
        for (int k = (n == 1 ? 4 : 1); k <= effective_kmax; ++k) {
            double r = 1.0 - std::ldexp(1.0, -k);
            CVec a = z2 * r, b = z1 * r;
            Cplx fwd, bwd;
            if (n == 1) {
                fwd = disk_forward_pairing(space, phi, psi, a(0), b(0));
                bwd = backward_cross_inner(space, phi, psi, a, b);
            } else {
                const GradedBasis& basis = shared_basis(n, max_order);
                Eigen::VectorXcd va = coefficient_vector_of_kernel(space, a, basis).coeffs /
                                      std::sqrt(kernel_norm_sq(space, a));
                Eigen::VectorXcd vb = coefficient_vector_of_kernel(space, b, basis).coeffs /
                                      std::sqrt(kernel_norm_sq(space, b));
                // <X k_a, k_b> with X the commutator section; the forward and
                // backward parts share one truncation, so exact commutation
                // cancels exactly.
                fwd = vb.dot(x * va);
                bwd = 0.0;
            }
            gaps.push_back(fwd - bwd);
        }
        ExtrapolationResult ex = richardson_extrapolate(gaps, 1e-6, 2.0, 0.5, 0.5);
        rep.direction_scores[static_cast<std::size_t>(i)] = std::abs(ex.limit);
    });
    for (double sc : rep.direction_scores) rep.score = std::max(rep.score, sc);

    // secondary evidence: singular-value floors of the finite sections
    for (int d : {max_order, max_order + 4})
        rep.floors.push_back(halfway_singular_value(fixed_section(d), n, d));
    return rep;
}

CommutatorVerdict automorphism_commutator_verdict(const SpaceSpec& space,
                                                  const LinearFractionalMap& phi,
                                                  const LinearFractionalMap& psi, int directions,
                                                  int max_order, std::uint64_t seed) {
    if (!space.has_kernel_exponent())
        throw std::invalid_argument("this verdict lives on Hardy/Bergman spaces");
    if (!is_automorphism(phi) || !is_automorphism(psi))
        throw std::invalid_argument("both maps must be automorphisms");
    if (is_identity_map(phi) || is_identity_map(psi))
        throw std::invalid_argument("the identity map is excluded");

    CommutatorVerdict v;
    CVec zero = CVec::Zero(space.dim);
    v.sup_phi = sup_norm(phi);
    v.sup_psi = sup_norm(psi);
    bool unitary_pair = phi.eval(zero).norm() < 1e-10 && psi.eval(zero).norm() < 1e-10;
    v.predicate = commutes(phi, psi) && unitary_pair;

    KernelScoreReport score = commutator_kernel_score(space, phi, psi, directions, max_order, seed);
    v.score = score.score;
    v.floor = score.floors.back();

    bool evidence_compact = v.score < 1e-4;
    if (v.predicate == evidence_compact) {
        v.compact = v.predicate;
        v.label = v.compact ? "compact" : "non-compact";
    } else {
        v.inconclusive = true;
        v.label = "inconclusive";
    }
    return v;
}

namespace {

double dirichlet_floor_decay(const LinearFractionalMap& phi, const LinearFractionalMap& psi,
                             int max_order, double* floor_hi) {
    Eigen::MatrixXcd lo = dirichlet_commutator_section(phi, psi, max_order);
    Eigen::MatrixXcd hi = dirichlet_commutator_section(phi, psi, max_order + 4);
    double f_lo = halfway_singular_value(lo, phi.dim(), max_order);
    double f_hi = halfway_singular_value(hi, phi.dim(), max_order + 4);
    if (floor_hi != nullptr) *floor_hi = f_hi;
    return (f_lo > 1e-300) ? f_hi / f_lo : 0.0;
}

// Section evidence: decaying half-basis singular values point to compactness.
bool dirichlet_evidence_compact(const LinearFractionalMap& phi, const LinearFractionalMap& psi,
                                int max_order, double* floor_out) {
    double f_hi = 0.0;
    double decay = dirichlet_floor_decay(phi, psi, max_order, &f_hi);
    if (floor_out != nullptr) *floor_out = f_hi;
    return f_hi <= 1e-4 || decay <= 0.45;
}

}  // namespace

CommutatorVerdict dirichlet_selfmap_commutator_verdict(const LinearFractionalMap& phi,
                                                       const LinearFractionalMap& psi,
                                                       int max_order) {
    if (!is_self_map(phi) || !is_self_map(psi))
        throw std::invalid_argument("both maps must be self-maps of the ball");

    CommutatorVerdict v;
    v.sup_phi = sup_norm(phi);
    v.sup_psi = sup_norm(psi);

    if (dirichlet_commutator_is_zero(phi, psi)) {
        v.zero_commutator = true;
        v.compact = true;
        v.predicate = false;
        v.label = "zero-commutator (trivially compact)";
        return v;
    }

    LinearFractionalMap sigma = krein_adjoint(psi);
    bool norms_one = v.sup_phi >= 1.0 - 1e-8 && v.sup_psi >= 1.0 - 1e-8;
    v.predicate = norms_one && commutes(phi, sigma);

    bool trivially_compact =
        v.sup_phi < 1.0 - 1e-8 || v.sup_psi < 1.0 - 1e-8;  // a compact factor kills both products

    bool evidence = dirichlet_evidence_compact(phi, psi, max_order, &v.floor);
    bool compact_claim = v.predicate || trivially_compact;
    if (compact_claim == evidence) {
        v.compact = compact_claim;
        v.label = v.predicate ? "non-trivially compact"
                              : (trivially_compact ? "trivially compact" : "non-compact");
    } else {
        v.inconclusive = true;
        v.label = "inconclusive";
    }
    return v;
}

CommutatorVerdict dirichlet_automorphism_commutator_verdict(const LinearFractionalMap& phi,
                                                            const LinearFractionalMap& psi,
                                                            int max_order) {
    if (!is_automorphism(phi) || !is_automorphism(psi))
        throw std::invalid_argument("both maps must be automorphisms");

    CommutatorVerdict v;
    v.sup_phi = sup_norm(phi);
    v.sup_psi = sup_norm(psi);
    v.predicate = commutes(phi, psi);
    bool evidence = dirichlet_evidence_compact(phi, psi, max_order, &v.floor);
    if (v.predicate == evidence) {
        v.compact = v.predicate;
        v.label = v.compact ? "compact" : "non-compact";
    } else {
        v.inconclusive = true;
        v.label = "inconclusive";
    }
    return v;
}

DiskPairReport disk_nonautomorphism_pair_classify(const LinearFractionalMap& phi,
                                                  const LinearFractionalMap& psi, int max_order) {
    if (phi.dim() != 1 || psi.dim() != 1)
        throw std::invalid_argument("disk classification needs dimension 1");
    if (is_automorphism(phi) && is_automorphism(psi))
        throw std::invalid_argument("both maps are automorphisms; use the automorphism verdict");
    if (!is_self_map(phi) || !is_self_map(psi))
        throw std::invalid_argument("both maps must be self-maps");
    if (sup_norm(phi) < 1.0 - 1e-8 || sup_norm(psi) < 1.0 - 1e-8)
        throw HypothesisError("the classification needs sup-norm one on both maps");

    DiskFixedPointClass cphi = disk_fixed_points(phi);
    DiskFixedPointClass cpsi = disk_fixed_points(psi);

    DiskPairReport rep;
    rep.floor = 0.0;
    {
        double f = 0.0;
        dirichlet_evidence_compact(phi, psi, max_order, &f);
        rep.floor = f;
    }

    if (cphi.kind == DiskMapKind::Parabolic && cpsi.kind == DiskMapKind::Parabolic) {
        if (std::abs(cphi.points[0] - cpsi.points[0]) < 1e-8) {
            rep.pair_case = DiskPairCase::BothParabolicSharedPoint;
            rep.shared_point = cphi.points[0];
        }
        return rep;
    }
    if (cphi.kind == DiskMapKind::Hyperbolic && cpsi.kind == DiskMapKind::Hyperbolic) {
        Cplx z1 = cphi.points[0], z2 = cpsi.points[0];
        if (std::abs(z1 - z2) > 1e-6) return rep;
        rep.shared_point = z1;
        rep.second_phi_infinite = cphi.second_at_infinity;
        rep.second_psi_infinite = cpsi.second_at_infinity;
        if (!cphi.second_at_infinity && cphi.points.size() > 1) rep.second_phi = cphi.points[1];
        if (!cpsi.second_at_infinity && cpsi.points.size() > 1) rep.second_psi = cpsi.points[1];

        bool match;
        if (rep.second_phi_infinite)
            match = !rep.second_psi_infinite && std::abs(rep.second_psi) < 1e-6;
        else if (rep.second_psi_infinite)
            match = std::abs(rep.second_phi) < 1e-6;
        else
            match = std::abs(rep.second_psi - Cplx(1.0, 0.0) / std::conj(rep.second_phi)) < 1e-6;
        if (match) rep.pair_case = DiskPairCase::HyperbolicConjugatePair;
        return rep;
    }
    return rep;
}

double derivative_product_invariant(const LinearFractionalMap& psi, const BoundaryPoint& zeta1,
                                    const BoundaryPoint& zeta2) {
    if (psi.dim() != 1) throw std::invalid_argument("derivative invariant is disk-only");
    auto deriv_abs = [](const LinearFractionalMap& m, Cplx z) {
        Cplx a = m.a()(0, 0), b = m.b()(0), c = std::conj(m.c()(0)), d = m.d();
        return std::abs((a * d - b * c) / ((c * z + d) * (c * z + d)));
    };
    return deriv_abs(psi.inverse(), zeta1.vec()(0)) * deriv_abs(psi, zeta2.vec()(0));
}

}  // namespace ballop
