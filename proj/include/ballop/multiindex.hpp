#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "ballop/space_spec.hpp"

namespace ballop {

/// A multi-index alpha = (alpha_1, ..., alpha_N) of non-negative integers.
/// The total order |alpha| is cached at construction.
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> entries);

    int dim() const { return static_cast<int>(entries_.size()); }
    int order() const { return order_; }
    int operator[](int i) const { return entries_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& entries() const { return entries_; }

    /// alpha + e_j
    MultiIndex bumped(int j) const;
    /// Componentwise alpha >= beta.
    bool dominates(const MultiIndex& beta) const;
    /// alpha - beta; requires dominates(beta).
    MultiIndex minus(const MultiIndex& beta) const;

    /// Packing for hash lookups; entries must stay below 1024.
    std::uint64_t key() const;

    bool operator==(const MultiIndex& o) const { return entries_ == o.entries_; }

private:
    std::vector<int> entries_;
    int order_ = 0;
};

/// All multi-indices with |alpha| <= max_order in graded lexicographic order:
/// grade by total order, and within a grade the first component decreases
/// first, so for N=2 grade 1 enumerates (1,0) then (0,1). The map
/// position <-> index is a stable bijection.
class GradedBasis {
public:
    GradedBasis(int dim, int max_order);

    int dim() const { return dim_; }
    int max_order() const { return max_order_; }
    int size() const { return static_cast<int>(list_.size()); }
    const MultiIndex& at(int pos) const { return list_[static_cast<std::size_t>(pos)]; }

    /// Position of alpha in the enumeration, or -1 if |alpha| > max_order.
    int find(const MultiIndex& alpha) const;
    int position(const MultiIndex& alpha) const;  // throws when absent

    /// First position of grade k (== size of the basis up to order k-1).
    int grade_begin(int k) const { return grade_begin_[static_cast<std::size_t>(k)]; }

    static std::int64_t count(int dim, int max_order);  // C(max_order + dim, dim)

    /// Graded-lex position by closed-form index arithmetic (dim <= 3);
    /// falls back to the hash for higher dimensions. No range check.
    static int packed_position(int dim, const int* entries);

private:
    int dim_;
    int max_order_;
    std::vector<MultiIndex> list_;
    std::vector<int> grade_begin_;
    std::unordered_map<std::uint64_t, int> index_;
};

double factorial_exact(int n);     // exact in double up to n = 170
double log_factorial(int n);       // lgamma route
double log_multi_factorial(const MultiIndex& alpha);  // log(alpha!)

/// ||z^alpha||^2 in the Hardy space: (N-1)! alpha! / (N-1+|alpha|)!
double hardy_monomial_norm_sq(int dim, const MultiIndex& alpha);

/// ||z^alpha||^2 in the weighted Bergman space A^2_s:
/// alpha! Gamma(N+s+1) / Gamma(N+|alpha|+s+1), s > -1.
double bergman_monomial_norm_sq(int dim, double s, const MultiIndex& alpha);

/// ||z^alpha||^2 in the Dirichlet space: 1 for alpha = 0,
/// |alpha| alpha! / |alpha|! otherwise.
double dirichlet_monomial_norm_sq(const MultiIndex& alpha);

/// Weighted Dirichlet scale weight (|alpha|+1)^{1-s} * omega_alpha with
/// omega_alpha the Hardy weight. Recovers the Hardy norm at s = 1 and the
/// Bergman family at s = 2 up to a ratio bounded between 1/N and 1.
double weighted_dirichlet_norm_sq(double s, int dim, const MultiIndex& alpha);

/// Dispatch on the space descriptor.
double monomial_norm_sq(const SpaceSpec& space, const MultiIndex& alpha);

}  // namespace ballop
