#pragma once

#include <Eigen/Dense>
#include <complex>

#include "ballop/lft.hpp"
#include "ballop/multiindex.hpp"

namespace ballop {

/// Interned graded bases; construction is cheap but callers share freely.
const GradedBasis& shared_basis(int dim, int max_order);

/// Polynomial / truncated power series over the graded monomial basis.
/// Multiplication discards only terms of order above the truncation degree,
/// so degree-<=D coefficients of products of exact inputs stay exact.
class PowerSeries {
public:
    PowerSeries(int dim, int max_order);  // zero series

    static PowerSeries constant(int dim, int max_order, Cplx value);
    /// d + <z, c> = d + sum_j conj(c_j) z_j
    static PowerSeries linear_form(const CVec& c, Cplx d, int max_order);
    /// constant + sum_j coeffs_j z_j (plain, unconjugated coefficients)
    static PowerSeries affine(const CVec& coeffs, Cplx constant, int max_order);

    int dim() const { return dim_; }
    int max_order() const { return max_order_; }
    const GradedBasis& basis() const { return shared_basis(dim_, max_order_); }

    Cplx coeff(const MultiIndex& alpha) const;  // 0 beyond truncation
    Cplx coeff_at(int pos) const { return coeffs_(pos); }
    void set_coeff(const MultiIndex& alpha, Cplx value);
    const Eigen::VectorXcd& coeffs() const { return coeffs_; }
    Eigen::VectorXcd& coeffs() { return coeffs_; }

    Cplx constant_term() const { return coeffs_(0); }
    Cplx evaluate(const CVec& z) const;

    PowerSeries truncated(int new_max_order) const;

    PowerSeries& operator+=(const PowerSeries& o);
    PowerSeries& operator-=(const PowerSeries& o);
    PowerSeries& operator*=(Cplx s);

    friend PowerSeries operator+(PowerSeries a, const PowerSeries& b) { return a += b; }
    friend PowerSeries operator-(PowerSeries a, const PowerSeries& b) { return a -= b; }
    friend PowerSeries operator*(PowerSeries a, Cplx s) { return a *= s; }

private:
    int dim_;
    int max_order_;
    Eigen::VectorXcd coeffs_;
};

/// Product truncated at min(a.max_order, b.max_order).
PowerSeries multiply(const PowerSeries& a, const PowerSeries& b);

/// Generalized binomial coefficient binom(m, k) by the product recurrence.
double generalized_binomial(double m, int k);

/// u(z)^m for real m via the binomial series in v = u/u(0) - 1 (exact under
/// truncation since v has no constant term). Principal branch of u(0)^m.
PowerSeries pow_series(const PowerSeries& u, double m, int max_order);

/// (c0 + sum_j coeffs_j z_j)^m by the multinomial recurrence; exact
/// coefficients in O(1) per entry. Principal branch of c0^m.
PowerSeries affine_power_series(Cplx c0, const CVec& coeffs, double m, int max_order);

/// Truncated expansion of (<z, C> + d)^{-m}; requires |d| > ||C|| so the
/// series converges on the closed ball.
PowerSeries expand_lft_denominator(const LinearFractionalMap& phi, double m, int max_order);

/// Highest order carrying a coefficient above drop * max|coeff|.
int series_degree(const PowerSeries& p, double drop = 0.0);

}  // namespace ballop
