#include "ballop/multiindex.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ballop {

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw std::invalid_argument("multi-index needs dimension >= 1");
    for (int e : entries_) {
        if (e < 0) throw std::invalid_argument("multi-index entries must be non-negative");
        if (e >= 1024) throw std::invalid_argument("multi-index entry exceeds supported range");
    }
    order_ = std::accumulate(entries_.begin(), entries_.end(), 0);
}

MultiIndex MultiIndex::bumped(int j) const {
    std::vector<int> e = entries_;
    e[static_cast<std::size_t>(j)] += 1;
    return MultiIndex(std::move(e));
}

bool MultiIndex::dominates(const MultiIndex& beta) const {
    if (dim() != beta.dim()) return false;
    for (int i = 0; i < dim(); ++i)
        if ((*this)[i] < beta[i]) return false;
    return true;
}

MultiIndex MultiIndex::minus(const MultiIndex& beta) const {
    std::vector<int> e(entries_.size());
    for (int i = 0; i < dim(); ++i) e[static_cast<std::size_t>(i)] = (*this)[i] - beta[i];
    return MultiIndex(std::move(e));
}

std::uint64_t MultiIndex::key() const {
    std::uint64_t k = 0;
    for (int e : entries_) k = (k << 10) | static_cast<std::uint64_t>(e);
    return k;
}

namespace {

void enumerate_grade(int dim, int slot, int remaining, std::vector<int>& scratch,
                     std::vector<MultiIndex>& out) {
    if (slot == dim - 1) {
        scratch[static_cast<std::size_t>(slot)] = remaining;
        out.emplace_back(scratch);
        return;
    }
    for (int e = remaining; e >= 0; --e) {
        scratch[static_cast<std::size_t>(slot)] = e;
        enumerate_grade(dim, slot + 1, remaining - e, scratch, out);
    }
}

}  // namespace

GradedBasis::GradedBasis(int dim, int max_order) : dim_(dim), max_order_(max_order) {
    if (dim < 1) throw std::invalid_argument("basis dimension must be >= 1");
    if (max_order < 0) throw std::invalid_argument("basis max order must be >= 0");
    list_.reserve(static_cast<std::size_t>(count(dim, max_order)));
    std::vector<int> scratch(static_cast<std::size_t>(dim), 0);
    grade_begin_.reserve(static_cast<std::size_t>(max_order) + 2);
    for (int k = 0; k <= max_order; ++k) {
        grade_begin_.push_back(static_cast<int>(list_.size()));
        enumerate_grade(dim, 0, k, scratch, list_);
    }
    grade_begin_.push_back(static_cast<int>(list_.size()));
    index_.reserve(list_.size() * 2);
    for (int p = 0; p < size(); ++p) index_.emplace(list_[static_cast<std::size_t>(p)].key(), p);
}

int GradedBasis::packed_position(int dim, const int* entries) {
    switch (dim) {
        case 1:
            return entries[0];
        case 2: {
            int k = entries[0] + entries[1];
            return k * (k + 1) / 2 + entries[1];
        }
        case 3: {
            int k = entries[0] + entries[1] + entries[2];
            int rest = k - entries[0];
            return k * (k + 1) * (k + 2) / 6 + rest * (rest + 1) / 2 + entries[2];
        }
        default:
            return -1;
    }
}

int GradedBasis::find(const MultiIndex& alpha) const {
    if (alpha.dim() != dim_ || alpha.order() > max_order_) return -1;
    if (dim_ <= 3) return packed_position(dim_, alpha.entries().data());
    auto it = index_.find(alpha.key());
    return it == index_.end() ? -1 : it->second;
}

int GradedBasis::position(const MultiIndex& alpha) const {
    int p = find(alpha);
    if (p < 0) throw std::out_of_range("multi-index not in basis");
    return p;
}

std::int64_t GradedBasis::count(int dim, int max_order) {
    std::int64_t c = 1;
    for (int i = 1; i <= dim; ++i) c = c * (max_order + i) / i;
    return c;
}

double factorial_exact(int n) {
    if (n < 0) throw std::invalid_argument("factorial of negative integer");
    if (n > 170) throw std::overflow_error("factorial overflows double");
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

double log_multi_factorial(const MultiIndex& alpha) {
    double s = 0.0;
    for (int i = 0; i < alpha.dim(); ++i) s += log_factorial(alpha[i]);
    return s;
}

namespace {

// Exact product route, valid while every factorial stays below 170!.
bool small_enough_for_exact(const MultiIndex& alpha, int extra) {
    return alpha.order() + extra <= 20;
}

}  // namespace

double hardy_monomial_norm_sq(int dim, const MultiIndex& alpha) {
    if (alpha.dim() != dim) throw std::invalid_argument("multi-index dimension mismatch");
    if (small_enough_for_exact(alpha, dim - 1)) {
        double num = factorial_exact(dim - 1);
        for (int i = 0; i < dim; ++i) num *= factorial_exact(alpha[i]);
        return num / factorial_exact(dim - 1 + alpha.order());
    }
    double lg = log_factorial(dim - 1) + log_multi_factorial(alpha) -
                log_factorial(dim - 1 + alpha.order());
    return std::exp(lg);
}

double bergman_monomial_norm_sq(int dim, double s, const MultiIndex& alpha) {
    if (s <= -1.0) throw std::invalid_argument("Bergman weight requires s > -1");
    if (alpha.dim() != dim) throw std::invalid_argument("multi-index dimension mismatch");
    double lg = log_multi_factorial(alpha) + std::lgamma(dim + s + 1.0) -
                std::lgamma(dim + alpha.order() + s + 1.0);
    return std::exp(lg);
}

double dirichlet_monomial_norm_sq(const MultiIndex& alpha) {
    int k = alpha.order();
    if (k == 0) return 1.0;
    if (small_enough_for_exact(alpha, 0)) {
        double num = static_cast<double>(k);
        for (int i = 0; i < alpha.dim(); ++i) num *= factorial_exact(alpha[i]);
        return num / factorial_exact(k);
    }
    double lg = std::log(static_cast<double>(k)) + log_multi_factorial(alpha) - log_factorial(k);
    return std::exp(lg);
}

double weighted_dirichlet_norm_sq(double s, int dim, const MultiIndex& alpha) {
    return std::pow(alpha.order() + 1.0, 1.0 - s) * hardy_monomial_norm_sq(dim, alpha);
}

double monomial_norm_sq(const SpaceSpec& space, const MultiIndex& alpha) {
    switch (space.kind) {
        case SpaceKind::Hardy: return hardy_monomial_norm_sq(space.dim, alpha);
        case SpaceKind::Bergman: return bergman_monomial_norm_sq(space.dim, space.s, alpha);
        default: return dirichlet_monomial_norm_sq(alpha);
    }
}

}  // namespace ballop
