#include "ballop/power_series.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "ballop/spaces.hpp"

namespace ballop {

const GradedBasis& shared_basis(int dim, int max_order) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<GradedBasis>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(dim, max_order);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::make_unique<GradedBasis>(dim, max_order)).first;
    return *it->second;
}

PowerSeries::PowerSeries(int dim, int max_order) : dim_(dim), max_order_(max_order) {
    coeffs_ = Eigen::VectorXcd::Zero(shared_basis(dim, max_order).size());
}

PowerSeries PowerSeries::constant(int dim, int max_order, Cplx value) {
    PowerSeries s(dim, max_order);
    s.coeffs_(0) = value;
    return s;
}

PowerSeries PowerSeries::linear_form(const CVec& c, Cplx d, int max_order) {
    return affine(c.conjugate(), d, max_order);
}

PowerSeries PowerSeries::affine(const CVec& coeffs, Cplx constant, int max_order) {
    const int n = static_cast<int>(coeffs.size());
    PowerSeries s(n, max_order);
    s.coeffs_(0) = constant;
    if (max_order >= 1) {
        const GradedBasis& basis = s.basis();
        for (int j = 0; j < n; ++j) {
            std::vector<int> e(static_cast<std::size_t>(n), 0);
            e[static_cast<std::size_t>(j)] = 1;
            s.coeffs_(basis.position(MultiIndex(e))) = coeffs(j);
        }
    }
    return s;
}

Cplx PowerSeries::coeff(const MultiIndex& alpha) const {
    int p = basis().find(alpha);
    return p < 0 ? Cplx(0.0, 0.0) : coeffs_(p);
}

void PowerSeries::set_coeff(const MultiIndex& alpha, Cplx value) {
    coeffs_(basis().position(alpha)) = value;
}

Cplx PowerSeries::evaluate(const CVec& z) const {
    return evaluate_coefficients(basis(), coeffs_, z);
}

PowerSeries PowerSeries::truncated(int new_max_order) const {
    PowerSeries out(dim_, new_max_order);
    const GradedBasis& src = basis();
    const GradedBasis& dst = out.basis();
    int keep = std::min(src.size(), dst.size());
    out.coeffs_.head(keep) = coeffs_.head(keep);  // graded prefixes coincide
    return out;
}

PowerSeries& PowerSeries::operator+=(const PowerSeries& o) {
    if (dim_ != o.dim_ || max_order_ != o.max_order_)
        throw std::invalid_argument("series shapes disagree");
    coeffs_ += o.coeffs_;
    return *this;
}

PowerSeries& PowerSeries::operator-=(const PowerSeries& o) {
    if (dim_ != o.dim_ || max_order_ != o.max_order_)
        throw std::invalid_argument("series shapes disagree");
    coeffs_ -= o.coeffs_;
    return *this;
}

PowerSeries& PowerSeries::operator*=(Cplx s) {
    coeffs_ *= s;
    return *this;
}

PowerSeries multiply(const PowerSeries& a, const PowerSeries& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("series dimensions disagree");
    const int n = a.dim();
    int d = std::min(a.max_order(), b.max_order());
    PowerSeries out(a.dim(), d);
    const GradedBasis& ba = a.basis();
    const GradedBasis& bb = b.basis();
    const GradedBasis& bo = out.basis();
    int ebuf[8];
    for (int p = 0; p < ba.size(); ++p) {
        Cplx ca = a.coeff_at(p);
        if (ca == Cplx(0.0, 0.0)) continue;
        const MultiIndex& alpha = ba.at(p);
        if (alpha.order() > d) break;
        const int* ae = alpha.entries().data();
        int qmax = bb.grade_begin(std::min(d - alpha.order(), bb.max_order()) + 1);
        for (int q = 0; q < qmax; ++q) {
            Cplx cb = b.coeff_at(q);
            if (cb == Cplx(0.0, 0.0)) continue;
            const int* be = bb.at(q).entries().data();
            int pos;
            if (n <= 3) {
                for (int i = 0; i < n; ++i) ebuf[i] = ae[i] + be[i];
                pos = GradedBasis::packed_position(n, ebuf);
            } else {
                std::vector<int> e(static_cast<std::size_t>(n));
                for (int i = 0; i < n; ++i) e[static_cast<std::size_t>(i)] = ae[i] + be[i];
                pos = bo.position(MultiIndex(std::move(e)));
            }
            out.coeffs()(pos) += ca * cb;
        }
    }
    return out;
}

int series_degree(const PowerSeries& p, double drop) {
    double peak = std::max(p.coeffs().cwiseAbs().maxCoeff(), 1e-300);
    int deg = 0;
    const GradedBasis& b = p.basis();
    for (int q = 0; q < b.size(); ++q)
        if (std::abs(p.coeff_at(q)) > drop * peak) deg = std::max(deg, b.at(q).order());
    return deg;
}

double generalized_binomial(double m, int k) {
    double b = 1.0;
    for (int j = 1; j <= k; ++j) b *= (m - (j - 1)) / j;
    return b;
}

PowerSeries pow_series(const PowerSeries& u, double m, int max_order) {
    Cplx u0 = u.constant_term();
    if (std::abs(u0) < 1e-300) throw std::invalid_argument("series power needs u(0) != 0");
    PowerSeries v = u.truncated(max_order);
    v *= Cplx(1.0, 0.0) / u0;
    v.coeffs()(0) -= 1.0;

    Cplx scale = std::pow(u0, Cplx(m, 0.0));
    PowerSeries acc = PowerSeries::constant(u.dim(), max_order, scale);
    PowerSeries vpow = PowerSeries::constant(u.dim(), max_order, Cplx(1.0, 0.0));
    for (int k = 1; k <= max_order; ++k) {
        vpow = multiply(vpow, v);
        acc += vpow * (scale * generalized_binomial(m, k));
    }
    return acc;
}

PowerSeries affine_power_series(Cplx c0, const CVec& coeffs, double m, int max_order) {
    if (std::abs(c0) < 1e-300) throw std::invalid_argument("affine power needs c0 != 0");
    const int n = static_cast<int>(coeffs.size());
    PowerSeries out(n, max_order);
    const GradedBasis& basis = out.basis();
    out.coeffs()(0) = std::pow(c0, Cplx(m, 0.0));
    // coeff(alpha) = coeff(alpha - e_j) (m - k + 1)/alpha_j * lambda_j/c0, k = |alpha|
    for (int p = 1; p < basis.size(); ++p) {
        const MultiIndex& alpha = basis.at(p);
        int j = 0;
        while (alpha[j] == 0) ++j;
        std::vector<int> prev = alpha.entries();
        prev[static_cast<std::size_t>(j)] -= 1;
        int prev_pos = basis.position(MultiIndex(std::move(prev)));
        double k = alpha.order();
        out.coeffs()(p) = out.coeff_at(prev_pos) * ((m - k + 1.0) / alpha[j]) * (coeffs(j) / c0);
    }
    return out;
}

PowerSeries expand_lft_denominator(const LinearFractionalMap& phi, double m, int max_order) {
    if (std::abs(phi.d()) <= phi.c().norm())
        throw std::invalid_argument("denominator series diverges on the closed ball");
    return affine_power_series(phi.d(), phi.c().conjugate(), -m, max_order);
}

}  // namespace ballop
