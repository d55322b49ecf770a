#include "ballop/lft.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "ballop/richardson.hpp"

namespace ballop {

namespace {

constexpr double kDenominatorFloor = 1e-14;

double phase_arg_tol(const CMat& m) { return 1e-12 * m.norm(); }

}  // namespace

LinearFractionalMap::LinearFractionalMap(CMat a, CVec b, CVec c, Cplx d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(d) {
    const int n = static_cast<int>(b_.size());
    if (n < 1) throw std::invalid_argument("linear-fractional map needs dimension >= 1");
    if (a_.rows() != n || a_.cols() != n || c_.size() != n)
        throw std::invalid_argument("linear-fractional map block sizes disagree");
    if (std::abs(d_) <= c_.norm() + kDenominatorFloor)
        throw std::invalid_argument(
            "not a ball map: denominator may vanish on the closed ball (|d| <= ||C||)");
}

LinearFractionalMap LinearFractionalMap::identity(int dim) {
    return {CMat::Identity(dim, dim), CVec::Zero(dim), CVec::Zero(dim), Cplx(1.0, 0.0)};
}

LinearFractionalMap LinearFractionalMap::from_projective(const CMat& m) {
    const int n = static_cast<int>(m.rows()) - 1;
    if (n < 1 || m.cols() != m.rows()) throw std::invalid_argument("projective matrix must be (N+1)x(N+1)");
    CMat a = m.topLeftCorner(n, n);
    CVec b = m.topRightCorner(n, 1);
    CVec c = m.bottomLeftCorner(1, n).adjoint();  // last row holds C*
    Cplx d = m(n, n);
    return {std::move(a), std::move(b), std::move(c), d};
}

CMat LinearFractionalMap::projective() const {
    const int n = dim();
    CMat m(n + 1, n + 1);
    m.topLeftCorner(n, n) = a_;
    m.topRightCorner(n, 1) = b_;
    m.bottomLeftCorner(1, n) = c_.adjoint();
    m(n, n) = d_;
    return m;
}

CMat LinearFractionalMap::normalized_projective() const {
    CMat m = projective();
    m /= m.norm();
    const double tol = phase_arg_tol(m);
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
            if (std::abs(m(i, j)) > tol) {
                m /= m(i, j) / std::abs(m(i, j));
                return m;
            }
        }
    }
    return m;
}

LinearFractionalMap LinearFractionalMap::phase_normalized() const {
    Cplx scale = std::conj(d_) / std::abs(d_);
    return {a_ * scale, b_ * scale, c_ * std::conj(scale), d_ * scale};
}

CVec LinearFractionalMap::eval(const CVec& z) const {
    Cplx den = denominator(z);
    if (std::abs(den) < kDenominatorFloor)
        throw std::runtime_error("singular map: denominator vanished");
    return (a_ * z + b_) / den;
}

LinearFractionalMap LinearFractionalMap::inverse() const {
    CMat inv = projective().inverse();
    return from_projective(inv);
}

LinearFractionalMap compose(const LinearFractionalMap& phi, const LinearFractionalMap& rho) {
    if (phi.dim() != rho.dim()) throw std::invalid_argument("map dimensions disagree");
    return LinearFractionalMap::from_projective(phi.projective() * rho.projective());
}

LinearFractionalMap krein_adjoint(const LinearFractionalMap& phi) {
    return {phi.a().adjoint(), -phi.c(), -phi.b(), std::conj(phi.d())};
}

LinearFractionalMap ball_automorphism(const CVec& a) {
    const int n = static_cast<int>(a.size());
    double na = a.norm();
    if (na >= 1.0) throw std::invalid_argument("automorphism base point must satisfy ||a|| < 1");
    double s = std::sqrt(1.0 - na * na);
    CMat proj = CMat::Zero(n, n);
    if (na > 0.0) proj = (a * a.adjoint()) / Cplx(na * na, 0.0);
    CMat amat = -(s * CMat::Identity(n, n) + (1.0 - s) * proj);
    return {std::move(amat), a, -a, Cplx(1.0, 0.0)};
}

LinearFractionalMap unitary_map(const CMat& u) {
    const int n = static_cast<int>(u.rows());
    if (u.cols() != n || n < 1) throw std::invalid_argument("unitary block must be square");
    if ((u.adjoint() * u - CMat::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("matrix is not unitary");
    return {u, CVec::Zero(n), CVec::Zero(n), Cplx(1.0, 0.0)};
}

LinearFractionalMap disk_map(Cplx a, Cplx b, Cplx c, Cplx d) {
    CMat am(1, 1);
    am(0, 0) = a;
    CVec bv(1), cv(1);
    bv(0) = b;
    cv(0) = std::conj(c);  // <z, C> = z conj(C) must equal c z
    return {std::move(am), std::move(bv), std::move(cv), d};
}

bool approx_equal(const LinearFractionalMap& phi, const LinearFractionalMap& psi, double tol) {
    if (phi.dim() != psi.dim()) return false;
    return (phi.normalized_projective() - psi.normalized_projective()).cwiseAbs().maxCoeff() <=
           tol;
}

bool is_identity_map(const LinearFractionalMap& phi, double tol) {
    return approx_equal(phi, LinearFractionalMap::identity(phi.dim()), tol);
}

bool commutes(const LinearFractionalMap& phi, const LinearFractionalMap& psi, double tol) {
    return approx_equal(compose(phi, psi), compose(psi, phi), tol);
}

namespace {

double image_norm(const LinearFractionalMap& phi, const CVec& z) { return phi.eval(z).norm(); }

// Golden-section maximization of g on [lo, hi].
double golden_max(const std::function<double(double)>& g, double lo, double hi, double tol,
                  double* arg = nullptr) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - gr * (hi - lo);
    double d = lo + gr * (hi - lo);
    double gc = g(c), gd = g(d);
    while (hi - lo > tol) {
        if (gc > gd) {
            hi = d;
            d = c;
            gd = gc;
            c = hi - gr * (hi - lo);
            gc = g(c);
        } else {
            lo = c;
            c = d;
            gc = gd;
            d = lo + gr * (hi - lo);
            gd = g(d);
        }
    }
    double mid = 0.5 * (lo + hi);
    if (arg != nullptr) *arg = mid;
    return std::max(gc, gd);
}

// Real 2N-vector <-> complex N-vector on the ssphere.
CVec to_complex(const Eigen::VectorXd& x) {
    const int n = static_cast<int>(x.size()) / 2;
    CVec z(n);
    for (int i = 0; i < n; ++i) z(i) = Cplx(x(2 * i), x(2 * i + 1));
    return z;
}

double sphere_value(const LinearFractionalMap& phi, const Eigen::VectorXd& x) {
    return image_norm(phi, to_complex(x / x.norm()));
}

// Cyclic golden-section ascent in tangent charts around the current point.
double polish_on_sphere(const LinearFractionalMap& phi, Eigen::VectorXd x) {
    const int m = static_cast<int>(x.size());
    x /= x.norm();
    double best = sphere_value(phi, x);
    double h = 0.4;
    while (h > 1e-9) {
        for (int axis = 0; axis < m; ++axis) {
            Eigen::VectorXd t = Eigen::VectorXd::Zero(m);
            t(axis) = 1.0;
            t -= t.dot(x) * x;
            double tn = t.norm();
            if (tn < 1e-12) continue;
            t /= tn;
            double arg = 0.0;
            auto g = [&](double u) {
                Eigen::VectorXd y = x + u * t;
                return sphere_value(phi, y);
            };
            double val = golden_max(g, -h, h, h * 1e-4, &arg);
            if (val > best) {
                best = val;
                x = (x + arg * t).normalized();
            }
        }
        h *= 0.35;
    }
    return best;
}

double sup_norm_disk(const LinearFractionalMap& phi) {
    const int grid = 4096;
    auto val = [&](double theta) {
        CVec z(1);
        z(0) = std::polar(1.0, theta);
        return image_norm(phi, z);
    };
    double best = -1.0;
    double best_theta = 0.0;
    for (int j = 0; j < grid; ++j) {
        double theta = 2.0 * std::numbers::pi * j / grid;
        double v = val(theta);
        if (v > best) {
            best = v;
            best_theta = theta;
        }
    }
    double step = 2.0 * std::numbers::pi / grid;
    double refined = golden_max(val, best_theta - step, best_theta + step, 1e-12);
    return std::max(best, refined);
}

}  // namespace

double sup_norm(const LinearFractionalMap& phi) {
    const int n = phi.dim();
    if (n == 1) return sup_norm_disk(phi);

    // Coarse sphere samples: canonical complex lines plus a seeded cloud.
    std::vector<Eigen::VectorXd> starts;
    std::vector<std::pair<double, Eigen::VectorXd>> ranked;
    const int m = 2 * n;

    auto consider = [&](const Eigen::VectorXd& x) {
        ranked.emplace_back(sphere_value(phi, x), x);
    };

    for (int i = 0; i < m; ++i) {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
        x(i) = 1.0;
        consider(x);
        x(i) = -1.0;
        consider(x);
    }

    std::mt19937_64 rng(0x5eedba11ULL ^ static_cast<std::uint64_t>(n));
    std::normal_distribution<double> gauss;
    const int cloud = (n == 2) ? 20000 : 60000;
    for (int i = 0; i < cloud; ++i) {
        Eigen::VectorXd x(m);
        for (int j = 0; j < m; ++j) x(j) = gauss(rng);
        if (x.norm() < 1e-9) continue;
        x.normalize();
        consider(x);
    }

    std::partial_sort(ranked.begin(), ranked.begin() + std::min<std::size_t>(8, ranked.size()),
                      ranked.end(),
                      [](const auto& l, const auto& r) { return l.first > r.first; });

    double best = ranked.front().first;
    const int polish_count = std::min<int>(8, static_cast<int>(ranked.size()));
    for (int i = 0; i < polish_count; ++i)
        best = std::max(best, polish_on_sphere(phi, ranked[static_cast<std::size_t>(i)].second));
    return best;
}

bool is_self_map(const LinearFractionalMap& phi, double tol) {
    return sup_norm(phi) <= 1.0 + tol;
}

bool is_automorphism(const LinearFractionalMap& phi, double tol) {
    LinearFractionalMap sigma = krein_adjoint(phi);
    if (!approx_equal(compose(sigma, phi), LinearFractionalMap::identity(phi.dim()), tol))
        return false;
    return is_self_map(phi, tol) && is_self_map(sigma, tol);
}

BoundaryPoint::BoundaryPoint(CVec zeta) : zeta_(std::move(zeta)) {
    if (std::abs(zeta_.norm() - 1.0) > 1e-12)
        throw std::invalid_argument("boundary point must have unit norm");
}

BoundaryPoint BoundaryPoint::direction(const CVec& v) {
    double n = v.norm();
    if (n < 1e-14) throw std::invalid_argument("cannot normalize the zero vector");
    return BoundaryPoint(v / n);
}

BoundaryImage boundary_image(const LinearFractionalMap& phi, const BoundaryPoint& zeta) {
    BoundaryImage img;
    img.point = phi.eval(zeta.vec());
    img.on_sphere = std::abs(img.point.norm() - 1.0) <= 1e-10;
    return img;
}

AngularDerivative angular_derivative(const LinearFractionalMap& phi, const BoundaryPoint& zeta) {
    // p(r) = |den(r zeta)|^2 - ||num(r zeta)||^2 is a real quadratic in r;
    // synthetic division by (1 - r) keeps the quotient stable near r = 1.
    const CVec& z = zeta.vec();
    Cplx zc = herm(z, phi.c());
    CVec az = phi.a() * z;
    double p0 = std::norm(phi.d()) - phi.b().squaredNorm();
    double p1 = 2.0 * (std::conj(phi.d()) * zc).real() - 2.0 * herm(az, phi.b()).real();
    double p2 = std::norm(zc) - az.squaredNorm();
    double bq = -p2;
    double aq = -p2 - p1;
    double psum = p0 + p1 + p2;

    AngularDerivative res;
    std::vector<std::complex<double>> q;
    double grid_min = std::numeric_limits<double>::infinity();
    for (int k = 4; k <= 40; ++k) {
        double h = std::ldexp(1.0, -k);  // 1 - r
        double r = 1.0 - h;
        Cplx den = phi.denominator(z * r);
        double img_norm = (phi.a() * (z * r) + phi.b()).norm() / std::abs(den);
        double quotient = (aq + bq * r + psum / h) / ((1.0 + img_norm) * std::norm(den));
        if (!std::isfinite(quotient) || quotient > 1e8) {
            res.value = std::numeric_limits<double>::infinity();
            res.finite = false;
            res.grid_min = grid_min;
            return res;
        }
        // liminf proxy over the converged part of the grid, short of the
        // depths where the (1-r) cancellation noise reaches 1e-7
        if (k >= 18 && k <= 28) grid_min = std::min(grid_min, quotient);
        q.emplace_back(quotient, 0.0);
    }

    ExtrapolationResult ex = richardson_extrapolate(q, 1e-8);
    res.grid_min = grid_min;
    res.error_estimate = ex.error_estimate;
    if (!ex.converged) {
        res.value = std::numeric_limits<double>::infinity();
        res.finite = false;
        return res;
    }
    res.value = ex.limit.real();
    res.finite = true;
    // a genuinely smaller liminf must beat both the threshold and the
    // distance the quotient still moves across the window
    double conv_scale = std::abs(q[18 - 4].real() - q[22 - 4].real());
    res.grid_disagrees = (res.value - grid_min) > std::max(1e-6, 4.0 * conv_scale);
    return res;
}

DiskFixedPointClass disk_fixed_points(const LinearFractionalMap& phi) {
    if (phi.dim() != 1) throw std::invalid_argument("fixed-point classification is disk-only");
    if (is_identity_map(phi)) throw std::invalid_argument("identity map has no classification");

    // phi(z) = (a z + b)/(c z + d) fixed points solve c z^2 + (d - a) z - b = 0.
    Cplx a = phi.a()(0, 0), b = phi.b()(0), c = std::conj(phi.c()(0)), d = phi.d();
    double scale = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});

    DiskFixedPointClass cls;
    const double boundary_tol = 1e-7;
    const double coincide_tol = 1e-7;

    std::vector<Cplx> roots;
    bool infinite_root = false;
    if (std::abs(c) <= 1e-13 * scale) {
        // Affine: one finite fixed point (slope != 1) and a companion at infinity.
        if (std::abs(d - a) <= 1e-13 * scale) {
            cls.kind = DiskMapKind::InteriorOnly;  // translation-like; cannot be a self-map
            return cls;
        }
        roots.push_back(b / (d - a));
        infinite_root = true;
    } else {
        Cplx disc = std::sqrt((d - a) * (d - a) + 4.0 * c * b);
        Cplx base = a - d;
        // pick the sign giving the larger |base + disc| for stability
        Cplx q = (std::abs(base + disc) >= std::abs(base - disc)) ? (base + disc) : (base - disc);
        q *= 0.5;
        if (std::abs(q) <= 1e-13 * scale) {
            roots.push_back(Cplx(0.0, 0.0));
            roots.push_back(Cplx(0.0, 0.0));
        } else {
            roots.push_back(q / c);
            roots.push_back(-b / q);
        }
    }

    auto on_boundary = [&](Cplx r) { return std::abs(std::abs(r) - 1.0) <= boundary_tol; };

    if (!infinite_root && std::abs(roots[0] - roots[1]) <= coincide_tol) {
        Cplx r = 0.5 * (roots[0] + roots[1]);
        if (on_boundary(r)) {
            cls.kind = DiskMapKind::Parabolic;
            cls.points = {r};
        } else {
            cls.kind = DiskMapKind::InteriorOnly;
            cls.points = {r};
        }
        return cls;
    }

    // Distinct roots (possibly one at infinity).
    std::vector<Cplx> boundary, other;
    for (Cplx r : roots)
        (on_boundary(r) ? boundary : other).push_back(r);

    if (boundary.empty()) {
        cls.kind = DiskMapKind::InteriorOnly;
        cls.points = roots;
        cls.second_at_infinity = infinite_root;
        return cls;
    }

    cls.kind = DiskMapKind::Hyperbolic;
    if (boundary.size() == 2) {
        // Both on the circle (automorphism case): attracting point first.
        Cplx det = a * d - b * c;
        auto deriv = [&](Cplx z) { return std::abs(det / ((c * z + d) * (c * z + d))); };
        if (deriv(boundary[0]) <= deriv(boundary[1]))
            cls.points = {boundary[0], boundary[1]};
        else
            cls.points = {boundary[1], boundary[0]};
    } else {
        cls.points = {boundary[0]};
        if (!other.empty()) cls.points.push_back(other[0]);
        cls.second_at_infinity = infinite_root;
    }
    return cls;
}

}  // namespace ballop
