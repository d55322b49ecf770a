#include "ballop/opalg.hpp"

#include <cmath>
#include <functional>
#include <unordered_map>

#include "ballop/multiindex.hpp"

namespace ballop {

GradedOperator GradedOperator::adjoint() const {
    GradedOperator out = *this;
    out.mat = mat.adjoint();
    return out;
}

std::vector<Eigen::VectorXcd> lft_monomial_powers(const LinearFractionalMap& phi, int max_order) {
    const int n = phi.dim();
    const GradedBasis& basis = shared_basis(n, max_order);

    // Numerator rows as affine series and denominator expansions per order.
    std::vector<PowerSeries> numerator;
    numerator.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        numerator.push_back(
            PowerSeries::affine(phi.a().row(j).transpose(), phi.b()(j), max_order));
    std::vector<PowerSeries> denpow;
    denpow.reserve(static_cast<std::size_t>(max_order) + 1);
    for (int m = 0; m <= max_order; ++m)
        denpow.push_back(expand_lft_denominator(phi, static_cast<double>(m), max_order));

    // P_alpha = prod_j numerator_j^{alpha_j}, built along the graded order.
    std::vector<PowerSeries> nums(static_cast<std::size_t>(basis.size()),
                                  PowerSeries(n, max_order));
    nums[0] = PowerSeries::constant(n, max_order, Cplx(1.0, 0.0));
    std::vector<Eigen::VectorXcd> cols(static_cast<std::size_t>(basis.size()));
    cols[0] = denpow[0].coeffs();

    for (int p = 1; p < basis.size(); ++p) {
        const MultiIndex& alpha = basis.at(p);
        int j = 0;
        while (alpha[j] == 0) ++j;
        std::vector<int> prev = alpha.entries();
        prev[static_cast<std::size_t>(j)] -= 1;
        int prev_pos = basis.position(MultiIndex(std::move(prev)));
        nums[static_cast<std::size_t>(p)] = multiply(nums[static_cast<std::size_t>(prev_pos)],
                                                     numerator[static_cast<std::size_t>(j)]);
        cols[static_cast<std::size_t>(p)] =
            multiply(nums[static_cast<std::size_t>(p)],
                     denpow[static_cast<std::size_t>(alpha.order())])
                .coeffs();
    }
    return cols;
}

GradedOperator composition_matrix(const SpaceSpec& space, const LinearFractionalMap& phi,
                                  int max_order) {
    if (phi.dim() != space.dim) throw std::invalid_argument("map/space dimension mismatch");
    if (!is_self_map(phi))
        throw std::invalid_argument("composition matrix needs a certified self-map");

    const GradedBasis& basis = shared_basis(space.dim, max_order);
    std::vector<Eigen::VectorXcd> cols = lft_monomial_powers(phi, max_order);

    std::vector<double> sqrt_w(static_cast<std::size_t>(basis.size()));
    for (int p = 0; p < basis.size(); ++p)
        sqrt_w[static_cast<std::size_t>(p)] = std::sqrt(monomial_norm_sq(space, basis.at(p)));

    GradedOperator op{space, max_order, Eigen::MatrixXcd(basis.size(), basis.size()), max_order,
                      0.0, max_order};
    for (int p = 0; p < basis.size(); ++p)
        for (int g = 0; g < basis.size(); ++g)
            op.mat(g, p) = cols[static_cast<std::size_t>(p)](g) *
                           (sqrt_w[static_cast<std::size_t>(g)] / sqrt_w[static_cast<std::size_t>(p)]);
    return op;
}

GradedOperator multiplication_matrix(const SpaceSpec& space, const PowerSeries& u, int max_order) {
    if (u.dim() != space.dim) throw std::invalid_argument("series/space dimension mismatch");
    const GradedBasis& basis = shared_basis(space.dim, max_order);

    std::vector<double> sqrt_w(static_cast<std::size_t>(basis.size()));
    for (int p = 0; p < basis.size(); ++p)
        sqrt_w[static_cast<std::size_t>(p)] = std::sqrt(monomial_norm_sq(space, basis.at(p)));

    GradedOperator op{space, max_order,
                      Eigen::MatrixXcd::Zero(basis.size(), basis.size()), max_order, 0.0,
                      max_order};
    const int n = space.dim;
    const GradedBasis& ubasis = u.basis();
    int ebuf[8];
    // iterate over the symbol's support and scatter along the diagonal band
    for (int q = 0; q < ubasis.size(); ++q) {
        Cplx cu = u.coeff_at(q);
        if (cu == Cplx(0.0, 0.0)) continue;
        const MultiIndex& mu = ubasis.at(q);
        if (mu.order() > max_order) break;
        const int* me = mu.entries().data();
        for (int b = 0; b < basis.size(); ++b) {
            const MultiIndex& beta = basis.at(b);
            if (beta.order() + mu.order() > max_order) break;
            const int* be = beta.entries().data();
            int g;
            if (n <= 3) {
                for (int i = 0; i < n; ++i) ebuf[i] = be[i] + me[i];
                g = GradedBasis::packed_position(n, ebuf);
            } else {
                std::vector<int> e(static_cast<std::size_t>(n));
                for (int i = 0; i < n; ++i) e[static_cast<std::size_t>(i)] = be[i] + me[i];
                g = basis.position(MultiIndex(std::move(e)));
            }
            op.mat(g, b) = cu * (sqrt_w[static_cast<std::size_t>(g)] /
                                 sqrt_w[static_cast<std::size_t>(b)]);
        }
    }
    return op;
}

namespace {

Eigen::MatrixXcd toeplitz_section(const SpaceSpec& space, const PowerSeries& u,
                                  const PowerSeries& v, int max_order, int working_order) {
    GradedOperator mu = multiplication_matrix(space, u, working_order);
    GradedOperator mv = multiplication_matrix(space, v, working_order);
    int s = shared_basis(space.dim, max_order).size();
    Eigen::MatrixXcd full = mv.mat.adjoint() * mu.mat;
    return full.topLeftCorner(s, s);
}

}  // namespace

GradedOperator mixed_toeplitz_matrix(const SpaceSpec& space, const PowerSeries& u,
                                     const PowerSeries& v, int max_order, int working_order,
                                     double tol) {
    if (working_order < max_order)
        throw std::invalid_argument("working degree must be >= output degree");
    int w = working_order;
    double change = 0.0;
    for (int attempt = 0; attempt < 3; ++attempt) {
        Eigen::MatrixXcd base = toeplitz_section(space, u, v, max_order, w);
        Eigen::MatrixXcd probe = toeplitz_section(space, u, v, max_order, w + 2);
        change = (probe - base).cwiseAbs().maxCoeff();
        if (change <= tol) {
            GradedOperator op{space, max_order, std::move(probe), max_order, change, w + 2};
            return op;
        }
        w += 4;
    }
    throw TruncationError("mixed Toeplitz section did not stabilize", change, w);
}

namespace {

Eigen::MatrixXcd commutator_section(const SpaceSpec& space, const LinearFractionalMap& phi,
                                    const LinearFractionalMap& psi, int max_order,
                                    int working_order) {
    GradedOperator mphi = composition_matrix(space, phi, working_order);
    GradedOperator mpsi = composition_matrix(space, psi, working_order);
    int s = shared_basis(space.dim, max_order).size();
    Eigen::MatrixXcd x =
        mpsi.mat.adjoint() * mphi.mat - mphi.mat * mpsi.mat.adjoint();
    return x.topLeftCorner(s, s);
}

}  // namespace

GradedOperator commutator_matrix(const SpaceSpec& space, const LinearFractionalMap& phi,
                                 const LinearFractionalMap& psi, int max_order, double tol) {
    int w = 2 * max_order;
    double change = 0.0;
    for (int attempt = 0; attempt < 3; ++attempt) {
        Eigen::MatrixXcd base = commutator_section(space, phi, psi, max_order, w);
        Eigen::MatrixXcd probe = commutator_section(space, phi, psi, max_order, w + 4);
        change = (probe - base).cwiseAbs().maxCoeff();
        if (change <= tol) {
            GradedOperator op{space, max_order, std::move(probe), max_order, change, w + 4};
            return op;
        }
        w += 4;
    }
    throw TruncationError("commutator section did not stabilize", change, w);
}

std::vector<double> singular_values(const GradedOperator& op, int k) {
    if (k > op.mat.rows()) throw std::invalid_argument("requested more singular values than rows");
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(op.mat);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) out.push_back(svd.singularValues()(i));
    return out;
}

double spectral_norm(const Eigen::MatrixXcd& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0.0;
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues()(0);
}

PowerSeries compose_series(const PowerSeries& u, const LinearFractionalMap& phi, int max_order) {
    if (u.dim() != phi.dim()) throw std::invalid_argument("series/map dimension mismatch");
    const int n = u.dim();
    if (series_degree(u) > max_order)
        throw std::invalid_argument("compose_series needs max_order >= deg(u)");

    // Numerator power chains only for the support of u (and its ancestors
    // along the first-nonzero recursion), not the full table.
    std::vector<PowerSeries> numerator;
    numerator.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        numerator.push_back(
            PowerSeries::affine(phi.a().row(j).transpose(), phi.b()(j), max_order));

    std::unordered_map<std::uint64_t, PowerSeries> chain;
    chain.emplace(MultiIndex(std::vector<int>(static_cast<std::size_t>(n), 0)).key(),
                  PowerSeries::constant(n, max_order, Cplx(1.0, 0.0)));
    std::function<const PowerSeries&(const MultiIndex&)> num_power =
        [&](const MultiIndex& alpha) -> const PowerSeries& {
        auto it = chain.find(alpha.key());
        if (it != chain.end()) return it->second;
        int j = 0;
        while (alpha[j] == 0) ++j;
        std::vector<int> prev = alpha.entries();
        prev[static_cast<std::size_t>(j)] -= 1;
        const PowerSeries& base = num_power(MultiIndex(std::move(prev)));
        PowerSeries next = multiply(base, numerator[static_cast<std::size_t>(j)]);
        return chain.emplace(alpha.key(), std::move(next)).first->second;
    };

    // Denominator powers den^{-m} for the orders that actually occur.
    PowerSeries den_inv = expand_lft_denominator(phi, 1.0, max_order);
    std::vector<PowerSeries> denpow;
    denpow.push_back(PowerSeries::constant(n, max_order, Cplx(1.0, 0.0)));

    PowerSeries out(n, max_order);
    const GradedBasis& ubasis = u.basis();
    for (int p = 0; p < ubasis.size(); ++p) {
        Cplx cu = u.coeff_at(p);
        if (cu == Cplx(0.0, 0.0)) continue;
        const MultiIndex& alpha = ubasis.at(p);
        while (static_cast<int>(denpow.size()) <= alpha.order())
            denpow.push_back(multiply(denpow.back(), den_inv));
        PowerSeries term = multiply(num_power(alpha), denpow[static_cast<std::size_t>(alpha.order())]);
        out += term * cu;
    }
    return out;
}

}  // namespace ballop
