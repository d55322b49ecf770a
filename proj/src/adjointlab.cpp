#include "ballop/adjointlab.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "ballop/multiindex.hpp"
#include "ballop/parallel.hpp"
#include "ballop/richardson.hpp"

namespace ballop {

namespace {

Cplx principal_pow(Cplx base, double e) { return std::exp(e * std::log(base)); }

}  // namespace

Cplx AuxiliaryTriple::g_eval(const CVec& z) const {
    Cplx base = herm(z, -phi.b()) + std::conj(phi.d());
    return principal_pow(base, -t);
}

Cplx AuxiliaryTriple::h_eval(const CVec& z) const {
    Cplx base = herm(z, phi.c()) + phi.d();
    return principal_pow(base, t);
}

AuxiliaryTriple auxiliary_functions(const SpaceSpec& space, const LinearFractionalMap& phi,
                                    int series_order) {
    if (!space.has_kernel_exponent())
        throw std::invalid_argument("auxiliary functions live on Hardy/Bergman spaces");
    LinearFractionalMap pn = phi.phase_normalized();
    double t = space.kernel_exponent();
    bool bounded = pn.b().norm() < std::abs(pn.d());
    PowerSeries g(pn.dim(), 0);
    if (bounded) {
        g = affine_power_series(std::conj(pn.d()), (-pn.b()).conjugate(), -t, series_order);
    }
    return AuxiliaryTriple{pn, krein_adjoint(pn), t, bounded, std::move(g)};
}

double adjoint_identity_residual(const SpaceSpec& space, const AuxiliaryTriple& aux,
                                 const CVec& z, const CVec& w) {
    double t = aux.t;
    Cplx lhs = aux.g_eval(z) * std::conj(aux.h_eval(w)) *
               principal_pow(Cplx(1.0, 0.0) - herm(aux.sigma.eval(z), w), -t);
    Cplx rhs = principal_pow(Cplx(1.0, 0.0) - herm(z, aux.phi.eval(w)), -t);
    (void)space;
    return std::abs(lhs - rhs);
}

double adjoint_identity_residual(const SpaceSpec& space, const LinearFractionalMap& phi,
                                 const CVec& z, const CVec& w) {
    return adjoint_identity_residual(space, auxiliary_functions(space, phi, 0), z, w);
}

LinearFractionalMap determinant_normalized(const LinearFractionalMap& disk_phi) {
    if (disk_phi.dim() != 1)
        throw std::invalid_argument("determinant normalization is disk-only");
    Cplx a = disk_phi.a()(0, 0), b = disk_phi.b()(0);
    Cplx c = std::conj(disk_phi.c()(0)), d = disk_phi.d();
    Cplx det = a * d - b * c;
    if (std::abs(det) < 1e-14) throw std::invalid_argument("map is degenerate");
    Cplx s = Cplx(1.0, 0.0) / std::sqrt(det);
    return disk_map(a * s, b * s, c * s, d * s);
}

double normalization_identity_residual(double t, const LinearFractionalMap& disk_phi, Cplx z) {
    if (disk_phi.dim() != 1) throw std::invalid_argument("identity is disk-only");
    Cplx a = disk_phi.a()(0, 0), b = disk_phi.b()(0);
    Cplx c = std::conj(disk_phi.c()(0)), d = disk_phi.d();
    Cplx det = a * d - b * c;
    if (std::abs(det - Cplx(1.0, 0.0)) > 1e-10)
        throw std::invalid_argument("map must be normalized to determinant 1");
    CVec zv(1);
    zv(0) = z;
    Cplx phi_z = disk_phi.eval(zv)(0);
    Cplx h = principal_pow(c * z + d, t);
    Cplx g_at_phi = principal_pow(-std::conj(b) * phi_z + std::conj(d), -t);
    double rhs = std::pow(std::abs(c * z + d), 2.0 * t);
    return std::abs(h * std::conj(g_at_phi) - rhs);
}

namespace {

Eigen::MatrixXcd inverse_form_residual_block(const SpaceSpec& space,
                                             const LinearFractionalMap& phi, int block, int w) {
    double t = space.kernel_exponent();
    CVec p = phi.eval(CVec::Zero(phi.dim()));
    PowerSeries u = affine_power_series(Cplx(1.0, 0.0), (-p).conjugate(), -t, w);
    GradedOperator mu = multiplication_matrix(space, u, w);
    double common = std::pow(1.0 - p.squaredNorm(), t);
    Eigen::MatrixXcd tf = common * (mu.mat.adjoint() * mu.mat);
    GradedOperator mphi = composition_matrix(space, phi, w);
    GradedOperator minv = composition_matrix(space, phi.inverse(), w);
    int s = shared_basis(space.dim, block).size();
    Eigen::MatrixXcd r = mphi.mat.adjoint() - tf * minv.mat;
    return r.topLeftCorner(s, s);
}

}  // namespace

OperatorResidualReport adjoint_inverse_form_residual(const SpaceSpec& space,
                                                     const LinearFractionalMap& phi,
                                                     int block_order) {
    if (!space.has_kernel_exponent())
        throw std::invalid_argument("the inverse adjoint form lives on Hardy/Bergman spaces");
    if (!is_automorphism(phi))
        throw std::invalid_argument("the inverse adjoint form needs an automorphism");

    OperatorResidualReport rep;
    rep.block_order = block_order;
    int w = std::max(2 * block_order, block_order + 8);
    double res = spectral_norm(inverse_form_residual_block(space, phi, block_order, w));
    for (int attempt = 0; attempt < 3; ++attempt) {
        double probe = spectral_norm(inverse_form_residual_block(space, phi, block_order, w + 4));
        rep.stability = std::abs(probe - res);
        rep.residual = probe;
        rep.working_order = w + 4;
        if (rep.stability <= 1e-9 * std::max(1.0, probe) || attempt == 2) break;
        w += 4;
        res = probe;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Kernel semi-commutator engine.
//
// For an automorphism phi with a = phi^{-1}(0) and f = conj(v) u,
//   (C_phi T_f - T_{f o phi} C_phi) K_w = -c1 P(G Q(Vbar F)),
// where w' = phi^{-1}(w), G(z) = (1 - <z,a>)^t, U = u o phi, V = v o phi,
// F = U K_{w'}, c1 = (1 - <a,w'>)^t / (1 - |a|^2)^t and Q = I - P. After a
// unitary rotation aligning w' with e_1 the kernel coefficients live on the
// first axis, so the whole computation runs on a window of fibers indexed by
// the transverse degree. Multiplications and Toeplitz shifts by the affine
// factors of U, V, G are exact one-step recurrences; no truncation in r.
// ---------------------------------------------------------------------------

namespace {

struct FiberedWindow {
    SpaceKind kind = SpaceKind::Hardy;
    int n = 1;       // ambient dimension (1 or 2)
    double s = 0.0;  // Bergman parameter
    int ilen = 0;
    int jcount = 1;
    std::vector<Eigen::VectorXcd> fibers;

    void init(const SpaceSpec& space, int ilen_, int jcount_) {
        kind = space.kind;
        n = space.dim;
        s = space.s;
        ilen = ilen_;
        jcount = (n == 1) ? 1 : jcount_;
        fibers.assign(static_cast<std::size_t>(jcount), Eigen::VectorXcd::Zero(ilen));
    }

    // omega_{gamma}/omega_{gamma - e_1} at gamma = (i, j): i/(N-1+i+j) Hardy,
    // i/(N+i+j+s) Bergman.
    double up1(int i, int j) const {
        double order = static_cast<double>(i + j);
        double den = (kind == SpaceKind::Hardy) ? (n - 1 + order) : (n + order + s);
        return static_cast<double>(i) / den;
    }
    double up2(int i, int j) const {
        double order = static_cast<double>(i + j);
        double den = (kind == SpaceKind::Hardy) ? (n - 1 + order) : (n + order + s);
        return static_cast<double>(j) / den;
    }

    double norm_sq() const {
        double acc = 0.0;
        for (const auto& f : fibers) acc += f.squaredNorm();
        return acc;
    }
};

// In-place multiplication by c0 + lam1 z_1 + lam2 z_2 (descending sweep).
void mult_affine(FiberedWindow& x, Cplx c0, Cplx lam1, Cplx lam2) {
    for (int j = x.jcount - 1; j >= 0; --j) {
        auto& fj = x.fibers[static_cast<std::size_t>(j)];
        const Eigen::VectorXcd* fjm1 =
            (j > 0) ? &x.fibers[static_cast<std::size_t>(j) - 1] : nullptr;
        for (int i = x.ilen - 1; i >= 0; --i) {
            Cplx v = c0 * fj(i);
            if (i > 0) v += lam1 * fj(i - 1) * std::sqrt(x.up1(i, j));
            if (fjm1 != nullptr && lam2 != Cplx(0.0, 0.0))
                v += lam2 * (*fjm1)(i)*std::sqrt(x.up2(i, j));
            fj(i) = v;
        }
    }
}

// In-place division: solves mult_affine(y) = x (ascending sweep).
void div_affine(FiberedWindow& x, Cplx c0, Cplx lam1, Cplx lam2) {
    for (int j = 0; j < x.jcount; ++j) {
        auto& fj = x.fibers[static_cast<std::size_t>(j)];
        const Eigen::VectorXcd* fjm1 =
            (j > 0) ? &x.fibers[static_cast<std::size_t>(j) - 1] : nullptr;
        for (int i = 0; i < x.ilen; ++i) {
            Cplx v = fj(i);
            if (i > 0) v -= lam1 * fj(i - 1) * std::sqrt(x.up1(i, j));
            if (fjm1 != nullptr && lam2 != Cplx(0.0, 0.0))
                v -= lam2 * (*fjm1)(i)*std::sqrt(x.up2(i, j));
            fj(i) = v / c0;
        }
    }
}

// In-place T with symbol conj(c0 + lam1 z_1 + lam2 z_2) (ascending sweep):
// y_gamma = conj(c0) x_gamma + sum_dir conj(lam) x_{gamma+e} sqrt(w_{gamma+e}/w_gamma).
void shiftsum_conj(FiberedWindow& x, Cplx c0, Cplx lam1, Cplx lam2) {
    Cplx c0c = std::conj(c0), l1c = std::conj(lam1), l2c = std::conj(lam2);
    for (int j = 0; j < x.jcount; ++j) {
        auto& fj = x.fibers[static_cast<std::size_t>(j)];
        const Eigen::VectorXcd* fjp1 =
            (j + 1 < x.jcount) ? &x.fibers[static_cast<std::size_t>(j) + 1] : nullptr;
        for (int i = 0; i < x.ilen; ++i) {
            Cplx v = c0c * fj(i);
            if (i + 1 < x.ilen) v += l1c * fj(i + 1) * std::sqrt(x.up1(i + 1, j));
            if (fjp1 != nullptr && l2c != Cplx(0.0, 0.0))
                v += l2c * (*fjp1)(i)*std::sqrt(x.up2(i, j + 1));
            fj(i) = v;
        }
    }
}

// In-place solve of shiftsum_conj(y) = x (descending sweep): the Toeplitz
// operator with symbol conj(1/affine).
void solve_shiftsum_conj(FiberedWindow& x, Cplx c0, Cplx lam1, Cplx lam2) {
    Cplx c0c = std::conj(c0), l1c = std::conj(lam1), l2c = std::conj(lam2);
    for (int j = x.jcount - 1; j >= 0; --j) {
        auto& fj = x.fibers[static_cast<std::size_t>(j)];
        const Eigen::VectorXcd* fjp1 =
            (j + 1 < x.jcount) ? &x.fibers[static_cast<std::size_t>(j) + 1] : nullptr;
        for (int i = x.ilen - 1; i >= 0; --i) {
            Cplx v = fj(i);
            if (i + 1 < x.ilen) v -= l1c * fj(i + 1) * std::sqrt(x.up1(i + 1, j));
            if (fjp1 != nullptr && l2c != Cplx(0.0, 0.0))
                v -= l2c * (*fjp1)(i)*std::sqrt(x.up2(i, j + 1));
            fj(i) = v / c0c;
        }
    }
}

struct SymbolTerm {
    int i = 0, j = 0;
    Cplx coeff;
};

std::vector<SymbolTerm> sparse_terms(const PowerSeries& p, double drop) {
    std::vector<SymbolTerm> terms;
    double peak = p.coeffs().cwiseAbs().maxCoeff();
    const GradedBasis& b = p.basis();
    for (int q = 0; q < b.size(); ++q) {
        Cplx c = p.coeff_at(q);
        if (std::abs(c) <= drop * peak) continue;
        const MultiIndex& mu = b.at(q);
        terms.push_back({mu[0], p.dim() == 2 ? mu[1] : 0, c});
    }
    return terms;
}

// sqrt(omega_gamma / omega_{gamma - mu}) via a staircase of single steps.
double down_ratio_sqrt(const FiberedWindow& x, int i, int j, int mi, int mj) {
    double r = 1.0;
    for (int k = 0; k < mi; ++k) r *= x.up1(i - k, j);
    for (int l = 0; l < mj; ++l) r *= x.up2(i - mi, j - l);
    return std::sqrt(r);
}

// In-place multiplication by a sparse polynomial symbol. Descending sweep:
// every read is at a strictly lower index, still holding the old value.
void mult_poly(FiberedWindow& x, const std::vector<SymbolTerm>& terms) {
    for (int j = x.jcount - 1; j >= 0; --j) {
        auto& xj = x.fibers[static_cast<std::size_t>(j)];
        for (int i = x.ilen - 1; i >= 0; --i) {
            Cplx v = 0.0;
            for (const SymbolTerm& t : terms) {
                if (t.i > i || t.j > j) continue;
                v += t.coeff * x.fibers[static_cast<std::size_t>(j - t.j)](i - t.i) *
                     down_ratio_sqrt(x, i, j, t.i, t.j);
            }
            xj(i) = v;
        }
    }
}

// In-place T with symbol conj(poly); ascending sweep, reads only upward.
void shiftsum_poly_conj(FiberedWindow& x, const std::vector<SymbolTerm>& terms) {
    for (int j = 0; j < x.jcount; ++j) {
        auto& xj = x.fibers[static_cast<std::size_t>(j)];
        for (int i = 0; i < x.ilen; ++i) {
            Cplx v = 0.0;
            for (const SymbolTerm& t : terms) {
                if (i + t.i >= x.ilen || j + t.j >= x.jcount) continue;
                v += std::conj(t.coeff) *
                     x.fibers[static_cast<std::size_t>(j + t.j)](i + t.i) *
                     down_ratio_sqrt(x, i + t.i, j + t.j, t.i, t.j);
            }
            xj(i) = v;
        }
    }
}

// Numerator of u o lft as a polynomial: u o lft = numerator / den^{deg u}.
std::pair<PowerSeries, int> compose_poly_numerator(const PowerSeries& u,
                                                   const LinearFractionalMap& lft) {
    int du = series_degree(u, 0.0);
    const int n = lft.dim();
    std::vector<PowerSeries> num_rows;
    for (int j = 0; j < n; ++j)
        num_rows.push_back(PowerSeries::affine(lft.a().row(j).transpose(), lft.b()(j), du));
    PowerSeries den = PowerSeries::linear_form(lft.c(), lft.d(), du);

    PowerSeries acc(n, du);
    const GradedBasis& ub = u.basis();
    for (int q = 0; q < ub.size(); ++q) {
        Cplx cu = u.coeff_at(q);
        if (cu == Cplx(0.0, 0.0)) continue;
        const MultiIndex& beta = ub.at(q);
        if (beta.order() > du) continue;
        PowerSeries term = PowerSeries::constant(n, du, cu);
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < beta[j]; ++k)
                term = multiply(term, num_rows[static_cast<std::size_t>(j)]);
        for (int k = 0; k < du - beta.order(); ++k) term = multiply(term, den);
        acc += term;
    }
    return {acc, du};
}

CMat unitary_from_first_column(const CVec& x) {
    const int n = static_cast<int>(x.size());
    CMat u = CMat::Zero(n, n);
    u.col(0) = x;
    int filled = 1;
    for (int k = 0; k < n && filled < n; ++k) {
        CVec cand = CVec::Zero(n);
        cand(k) = 1.0;
        for (int j = 0; j < filled; ++j) cand -= u.col(j) * u.col(j).dot(cand);
        if (cand.norm() > 1e-6) u.col(filled++) = cand / cand.norm();
    }
    return u;
}

constexpr long kWindowBudget = 14000000;  // complex entries per window

// Least-squares fit of a decay sequence v(h). The one-variable tests decay
// like sqrt(h); the two-variable ones like h log(1/h). The basis is chosen
// from the tail ratio, and the fitted constant term is the limit estimate.
struct DecayFit {
    double limit = 0.0;
    double error = 0.0;
};

DecayFit fit_decay_limit(const std::vector<double>& h, const std::vector<double>& v) {
    DecayFit fit;
    if (h.size() < 7) {
        ExtrapolationResult ex = richardson_extrapolate_real(v, 1e-4, 2.0, 0.5, 0.5);
        fit.limit = ex.limit.real();
        fit.error = ex.error_estimate;
        return fit;
    }
    const std::size_t nn = h.size();
    double tail_ratio = (std::abs(v[nn - 2]) > 1e-300) ? std::abs(v[nn - 1] / v[nn - 2]) : 0.5;
    double p_est = (tail_ratio > 1e-300) ? std::log2(1.0 / tail_ratio) : 1.0;
    bool sqrt_family = p_est <= 0.72;

    auto solve = [&](std::size_t skip) -> double {
        const std::size_t m = nn - skip;
        Eigen::MatrixXd a(m, 5);
        Eigen::VectorXd b(m);
        double peak = 1e-300;
        for (std::size_t q = 0; q < m; ++q) peak = std::max(peak, std::abs(v[q + skip]));
        for (std::size_t q = 0; q < m; ++q) {
            double hq = h[q + skip];
            double lq = std::log2(1.0 / hq);
            double wgt = 1.0 / (std::abs(v[q + skip]) + 1e-3 * peak);
            a(q, 0) = wgt;
            if (sqrt_family) {
                a(q, 1) = wgt * std::sqrt(hq);
                a(q, 2) = wgt * hq;
                a(q, 3) = wgt * hq * lq;
                a(q, 4) = wgt * hq * std::sqrt(hq);
            } else {
                a(q, 1) = wgt * hq;
                a(q, 2) = wgt * hq * lq;
                a(q, 3) = wgt * hq * std::sqrt(hq);
                a(q, 4) = wgt * hq * hq * lq * lq;
            }
            b(q) = wgt * v[q + skip];
        }
        Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
        return c(0);
    };
    double primary = solve(std::min<std::size_t>(2, nn - 6));
    double alt = solve(std::min<std::size_t>(3, nn - 5));
    fit.limit = primary;
    fit.error = std::abs(primary - alt) + 1e-14;
    return fit;
}

}  // namespace

double kernel_semicommutator_value(const SpaceSpec& space, const LinearFractionalMap& phi,
                                   const PowerSeries& u, const PowerSeries& v,
                                   const BoundaryPoint& zeta, double r) {
    if (!space.has_kernel_exponent())
        throw std::invalid_argument("kernel semi-commutator test lives on Hardy/Bergman spaces");
    const int n = space.dim;
    if (n > 2) throw std::invalid_argument("kernel semi-commutator engine supports N <= 2");
    LinearFractionalMap sigma = krein_adjoint(phi);
    if (!approx_equal(compose(sigma, phi), LinearFractionalMap::identity(n), 1e-8))
        throw std::invalid_argument("kernel semi-commutator test needs an automorphism");
    double t = space.kernel_exponent();

    LinearFractionalMap inv = phi.inverse();
    CVec a = inv.eval(CVec::Zero(n));
    CVec w = zeta.vec() * r;
    CVec wp = inv.eval(w);
    double rho = wp.norm();

    CMat urot = (rho > 1e-14) ? unitary_from_first_column(wp / rho) : CMat::Identity(n, n);
    LinearFractionalMap lft_r = compose(phi, unitary_map(urot));
    CVec atil = urot.adjoint() * a;

    auto [num_u, du] = compose_poly_numerator(u, lft_r);
    auto [num_v, dv] = compose_poly_numerator(v, lft_r);
    std::vector<SymbolTerm> terms_u = sparse_terms(num_u, 1e-16);
    std::vector<SymbolTerm> terms_v = sparse_terms(num_v, 1e-16);

    Cplx den_c0 = lft_r.d();
    Cplx den_l1 = std::conj(lft_r.c()(0));
    Cplx den_l2 = (n == 2) ? std::conj(lft_r.c()(1)) : Cplx(0.0, 0.0);

    Cplx g_l1 = -std::conj(atil(0));
    Cplx g_l2 = (n == 2) ? -std::conj(atil(1)) : Cplx(0.0, 0.0);

    // Fractional part of t handled by a truncated series in <z, atil>.
    int t_int = static_cast<int>(std::floor(t + 1e-12));
    double t_frac = t - t_int;
    std::vector<SymbolTerm> frac_terms;
    if (t_frac > 1e-12) {
        double decay = std::max(atil.norm(), 0.05);
        int order = std::min(240, static_cast<int>(std::ceil(34.0 / -std::log(decay))) + 8);
        PowerSeries gf =
            affine_power_series(Cplx(1.0, 0.0), (-atil).conjugate(), t_frac, order);
        frac_terms = sparse_terms(gf, 1e-15);
    }

    // Window sizing: transverse fiber count from the geometric spread of the
    // affine recurrences, length from the kernel decay cutoff.
    int jcount = 1;
    if (n == 2) {
        double spread = std::max({atil.norm(), (std::abs(den_l1) + std::abs(den_l2)) /
                                                   std::abs(den_c0)});
        spread = std::min(std::max(spread, 0.05), 0.93);
        jcount = static_cast<int>(std::ceil(40.0 / -std::log(spread))) + 3 * (du + dv + t_int) + 12;
        jcount = std::min(jcount, 160);
    }
    int pad = 4 * (du + dv + t_int + 4) + jcount;
    long ilen = 0;
    {
        double term = 1.0, peak = 1.0, val = 1.0;
        long i = 0;
        while (term > peak * 1e-28 && i < 20000000) {
            double up = (space.kind == SpaceKind::Hardy)
                            ? static_cast<double>(i + 1) / (n + i)
                            : static_cast<double>(i + 1) / (n + i + 1 + space.s);
            val *= rho / std::sqrt(up);
            term = val * val;
            peak = std::max(peak, term);
            ++i;
        }
        ilen = i + pad;
    }
    if (ilen * jcount > kWindowBudget)
        throw TruncationError("kernel semi-commutator window exceeds the memory budget",
                              static_cast<double>(ilen) * jcount, static_cast<int>(ilen));

    FiberedWindow k0;
    k0.init(space, static_cast<int>(ilen), jcount);
    {
        auto& f0 = k0.fibers[0];
        double lv = 0.0;  // log of rho^i / sqrt(omega(i,0))
        f0(0) = 1.0;
        for (int i = 1; i < k0.ilen; ++i) {
            lv += std::log(rho) - 0.5 * std::log(k0.up1(i, 0));
            f0(i) = std::exp(lv);
        }
    }

    // k0 -> F = (u o phi o U) K  (numerator poly then du divisions)
    mult_poly(k0, terms_u);
    for (int k = 0; k < du; ++k) div_affine(k0, den_c0, den_l1, den_l2);

    // W2 = G T_{conj(V)} F
    FiberedWindow w2 = k0;
    shiftsum_poly_conj(w2, terms_v);
    for (int k = 0; k < dv; ++k) solve_shiftsum_conj(w2, den_c0, den_l1, den_l2);
    for (int k = 0; k < t_int; ++k) mult_affine(w2, Cplx(1.0, 0.0), g_l1, g_l2);
    if (!frac_terms.empty()) mult_poly(w2, frac_terms);

    // k0 -> W1 = T_{conj(V)} (G F)
    for (int k = 0; k < t_int; ++k) mult_affine(k0, Cplx(1.0, 0.0), g_l1, g_l2);
    if (!frac_terms.empty()) mult_poly(k0, frac_terms);
    shiftsum_poly_conj(k0, terms_v);
    for (int k = 0; k < dv; ++k) solve_shiftsum_conj(k0, den_c0, den_l1, den_l2);

    double diff_sq = 0.0;
    for (int j = 0; j < k0.jcount; ++j)
        diff_sq += (k0.fibers[static_cast<std::size_t>(j)] -
                    w2.fibers[static_cast<std::size_t>(j)])
                       .squaredNorm();

    Cplx c1 = principal_pow((Cplx(1.0, 0.0) - herm(wp, a)) / (1.0 - a.squaredNorm()), t);
    return std::abs(c1) * std::pow(1.0 - r * r, t / 2.0) * std::sqrt(diff_sq);
}

namespace {

double factorization_residual_block(const SpaceSpec& space, const LinearFractionalMap& phi,
                                    const PowerSeries& u, const PowerSeries& v, int block,
                                    int w) {
    double t = space.kernel_exponent();
    CVec a = phi.inverse().eval(CVec::Zero(phi.dim()));

    GradedOperator mphi = composition_matrix(space, phi, w);
    GradedOperator tf =
        mixed_toeplitz_matrix(space, u.truncated(w), v.truncated(w), w,
                              w + series_degree(u, 0.0) + series_degree(v, 0.0) + 2);

    PowerSeries ka = affine_power_series(Cplx(1.0, 0.0), (-a).conjugate(), -t, w);
    PowerSeries inv_ka = affine_power_series(Cplx(1.0, 0.0), (-a).conjugate(), t, w);
    GradedOperator tka = multiplication_matrix(space, ka, w);
    GradedOperator tika = multiplication_matrix(space, inv_ka, w);

    PowerSeries ucomp = compose_series(u.truncated(w + 10), phi, w + 10);
    PowerSeries vcomp = compose_series(v.truncated(w + 10), phi, w + 10);
    GradedOperator tfphi = mixed_toeplitz_matrix(space, ucomp, vcomp, w, w + 8, 1e-5);

    int s = shared_basis(space.dim, block).size();
    Eigen::MatrixXcd lhs = (mphi.mat * tf.mat).topLeftCorner(s, s);
    Eigen::MatrixXcd rhs = (tika.mat * tfphi.mat * tka.mat * mphi.mat).topLeftCorner(s, s);
    return spectral_norm(lhs - rhs);
}

}  // namespace

SemiCommutatorReport semicommutator_factorization_report(const SpaceSpec& space,
                                                         const LinearFractionalMap& phi,
                                                         const PowerSeries& u,
                                                         const PowerSeries& v, int block_order,
                                                         const BoundaryPoint& zeta, int k_min,
                                                         int k_max) {
    if (!space.has_kernel_exponent())
        throw std::invalid_argument("semi-commutator report lives on Hardy/Bergman spaces");
    if (!is_automorphism(phi))
        throw std::invalid_argument("semi-commutator factorization needs an automorphism");

    SemiCommutatorReport rep;
    rep.block_order = block_order;
    rep.working_order = std::max(2 * block_order, block_order + 28);
    rep.factorization_residual =
        factorization_residual_block(space, phi, u, v, block_order, rep.working_order);

    // Pointwise change-of-variable identity behind the factorization.
    {
        LinearFractionalMap inv = phi.inverse();
        CVec a = inv.eval(CVec::Zero(phi.dim()));
        std::mt19937_64 rng(7);
        std::normal_distribution<double> gauss;
        double worst = 0.0;
        for (int trial = 0; trial < 200; ++trial) {
            CVec z(phi.dim()), eta(phi.dim());
            for (int i = 0; i < phi.dim(); ++i) {
                z(i) = Cplx(gauss(rng), gauss(rng));
                eta(i) = Cplx(gauss(rng), gauss(rng));
            }
            z *= 0.8 / std::max(1.0, z.norm() / 0.99);
            if (z.norm() >= 1.0) z *= 0.5;
            eta /= eta.norm();
            CVec inv_eta = inv.eval(eta);
            Cplx lhs = (Cplx(1.0, 0.0) - herm(phi.eval(z), eta)) *
                       (Cplx(1.0, 0.0) - herm(z, a)) * (Cplx(1.0, 0.0) - herm(a, inv_eta));
            Cplx rhs = (1.0 - a.squaredNorm()) * (Cplx(1.0, 0.0) - herm(z, inv_eta));
            worst = std::max(worst, std::abs(lhs - rhs));
        }
        rep.rudin_residual = worst;
    }

    if (k_max <= 0) k_max = (space.dim == 1) ? 13 : ((space.kind == SpaceKind::Hardy) ? 11 : 7);
    std::vector<double> steps, sampled;
    for (int k = k_min; k <= k_max; ++k) {
        double r = 1.0 - std::ldexp(1.0, -k);
        double value;
        try {
            value = kernel_semicommutator_value(space, phi, u, v, zeta, r);
        } catch (const TruncationError&) {
            break;  // window budget reached; extrapolate from what we have
        }
        rep.kernel_samples.push_back({r, value});
        steps.push_back(1.0 - r);
        sampled.push_back(value);
    }
    if (!sampled.empty()) {
        DecayFit fit = fit_decay_limit(steps, sampled);
        rep.kernel_limit = fit.limit;
        rep.kernel_error = fit.error;
        rep.kernel_converged = std::abs(fit.limit) + fit.error <= 1e-4;
    }
    return rep;
}

}  // namespace ballop
