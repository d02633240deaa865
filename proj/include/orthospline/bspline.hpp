#pragma once

#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "orthospline/banded.hpp"
#include "orthospline/knots.hpp"
#include "orthospline/quadrature.hpp"

namespace orthospline {

using PartitionPtr = std::shared_ptr<const Partition>;

inline PartitionPtr share(Partition p) { return std::make_shared<const Partition>(std::move(p)); }

/// Nonzero B-splines at a point: values[r] = N_{first + r}(x), r = 0..k-1.
struct BasisValues {
    int first = 0;
    std::vector<double> values;
};

/// L-infinity normalized B-splines at x via the triangular recursion.
/// Right-continuous at interior knots, left limit at the right end.
BasisValues eval_basis(const Partition& part, double x);

/// Allocation-free variant for a known span mu (see Partition::find_span).
/// Writes N_{mu-k+1..mu}(x) into out[0..k-1]; x may lie on either closed end
/// of the span, giving the one-sided values of that polynomial piece.
void eval_basis_on_span(const Partition& part, int span, double x, std::span<double> out);

/// Coefficient vector over the B-spline basis of a shared partition.
class Spline {
public:
    Spline(PartitionPtr part, std::vector<double> coeffs);

    [[nodiscard]] const Partition& partition() const noexcept { return *part_; }
    [[nodiscard]] const PartitionPtr& partition_ptr() const noexcept { return part_; }
    [[nodiscard]] std::span<const double> coeffs() const noexcept { return coeffs_; }
    [[nodiscard]] int order() const noexcept { return part_->order(); }

    /// Throws DomainError outside [lo, hi].
    [[nodiscard]] double operator()(double x) const;
    /// Value of the polynomial piece on `span` at x (no domain check).
    [[nodiscard]] double eval_on_span(int span, double x) const;

    [[nodiscard]] Spline scaled(double c) const;

private:
    PartitionPtr part_;
    std::vector<double> coeffs_;
};

/// L2 inner product, exact up to rounding (Gauss rule on the merged breakpoints).
double inner_product(const Spline& f, const Spline& g);

struct RefinementTerm {
    int index = 0;
    double weight = 0.0;
};

/// Coarse B-splines written in the fine basis after inserting one knot.
struct RefinementMap {
    PartitionPtr coarse;
    PartitionPtr fine;
    int i0 = 0;
    std::vector<std::vector<RefinementTerm>> rows;  ///< rows[i] expresses coarse N~_i

    /// Fine-basis coefficients of the spline with the given coarse coefficients.
    [[nodiscard]] std::vector<double> refine(std::span<const double> coarse_coeffs) const;
};

/// Boehm's knot-insertion relation. Throws PartitionMismatch unless `fine`
/// equals `coarse` with one knot inserted at position i0.
RefinementMap boehm_refine(PartitionPtr coarse, PartitionPtr fine, int i0);

/// Gram matrix a_ij = <N_i, N_j> with its band Cholesky factor and, on
/// request, the dense inverse b_ij.
class GramSystem {
public:
    /// Dense inverses are only materialized up to this size.
    static constexpr int kMaxDenseInverse = 20000;

    [[nodiscard]] const Partition& partition() const noexcept { return *part_; }
    [[nodiscard]] const PartitionPtr& partition_ptr() const noexcept { return part_; }
    [[nodiscard]] int size() const noexcept { return band_.size(); }
    [[nodiscard]] const SymmetricBand& band() const noexcept { return band_; }
    [[nodiscard]] double entry(int i, int j) const { return band_(i, j); }

    [[nodiscard]] std::vector<double> solve(std::span<const double> rhs) const { return chol_.solve(rhs); }
    /// Column j of the inverse via one band solve.
    [[nodiscard]] std::vector<double> inverse_column(int j) const;

    [[nodiscard]] bool has_inverse() const noexcept { return inverse_.has_value(); }
    /// Throws InverseNotAvailable when not materialized.
    [[nodiscard]] double inverse(int i, int j) const;
    /// Row-major M x M inverse. Throws InverseNotAvailable when not materialized.
    [[nodiscard]] std::span<const double> inverse_matrix() const;

private:
    friend GramSystem gram_matrix(PartitionPtr part, const QuadratureRule& rule, bool with_inverse);
    GramSystem(PartitionPtr part, SymmetricBand band);

    PartitionPtr part_;
    SymmetricBand band_;
    BandCholesky chol_;
    std::optional<std::vector<double>> inverse_;
};

/// Throws QuadratureTooCoarse when rule.size() < k, NotPositiveDefinite when
/// the factorization breaks down.
GramSystem gram_matrix(PartitionPtr part, const QuadratureRule& rule, bool with_inverse = false);

/// Convenience overload with the exact rule q = k.
GramSystem gram_matrix(PartitionPtr part, bool with_inverse = false);

/// ||f||_{L^p(a,b)}; p = infinity is accepted. Finite p splits knot intervals
/// at sign changes of f and integrates |f|^p by adaptive (k+2)-point Gauss
/// rules to about 1e-13 relative. p = infinity
/// samples 8k Chebyshev points per interval plus the interval ends.
double lp_norm(const Spline& f, double p, double a, double b);
/// Integral of |f|^p over [lo, hi] inside knot span `span`, finite p, by the
/// same rule as lp_norm.
double power_integral_on_span(const Spline& f, int span, double lo, double hi, double p);
double lp_norm(const Spline& f, double p);

/// The knot interval [tau_i, tau_{i+1}] of maximal length inside
/// [tau_j, tau_{j+k}], leftmost on ties.
std::pair<double, double> longest_subinterval(const Partition& part, int j);

struct StabilityRatio {
    /// ||f||_p / ||(a_j nu_j^{1/p})||_{l^p}
    double norm_ratio = 0.0;
    /// max_j |a_j| / (|J_j|^{-1/p} ||f||_{L^p(J_j)})
    double coefficient_quotient = 0.0;
};

StabilityRatio deboor_stability_ratio(const Spline& f, double p);

}  // namespace orthospline
