#pragma once

#include <span>
#include <utility>
#include <vector>

#include "orthospline/bspline.hpp"

namespace orthospline {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    [[nodiscard]] double length() const noexcept { return hi - lo; }
    [[nodiscard]] bool contains(double x) const noexcept { return lo <= x && x <= hi; }
    [[nodiscard]] bool within(const Interval& outer) const noexcept { return outer.lo <= lo && hi <= outer.hi; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// The grid interval J attached to an inserted knot tau_{i0}, together with
/// the selection data it came from.
struct CharInterval {
    int level = 0;
    int i0 = 0;
    int j0 = 0;                  ///< selected B-spline index j^(0)
    Interval J0;                 ///< [tau_{j0}, tau_{j0+k}]
    Interval J;                  ///< longest knot interval inside J0, leftmost on ties
    std::vector<int> lambda0;    ///< indices with near-minimal support
    std::vector<int> lambda1;    ///< indices of lambda0 with maximal |alpha|
};

/// Lambda0 = {j : nu_j <= 2 min nu}, Lambda1 = argmax |alpha_j| over Lambda0
/// (ties grouped at relative tolerance 1e-12), j0 = min Lambda1.
/// `alpha` holds alpha_j for j = i0-k..i0.
CharInterval characteristic_interval(const Partition& part, int i0, std::span<const double> alpha, int level = -1);

/// Knot-count distances to J over a partition. Knots are counted with
/// multiplicity.
class DistanceCounter {
public:
    DistanceCounter(PartitionPtr part, Interval J);

    /// Knots strictly between x and the nearer end of J plus every copy of that
    /// end; 0 when x lies in J.
    [[nodiscard]] int d_point(double x) const;

    /// 0 when the closed V meets J; otherwise the knots in the closed gap
    /// between V and J (facing ends count only when they are knots).
    [[nodiscard]] int d_interval(const Interval& V) const;

    [[nodiscard]] const Interval& J() const noexcept { return j_; }

private:
    [[nodiscard]] int count_closed(double a, double b) const;
    [[nodiscard]] int count_open_closed(double a, double b) const;
    [[nodiscard]] int count_closed_open(double a, double b) const;

    PartitionPtr part_;
    Interval j_;
};

/// Length of the longest monotone (nondecreasing or nonincreasing) subsequence.
int monotone_subsequence(std::span<const double> xs);

class OrthoSystem;

/// card{ n >= 2 : J_n within [x, y], |J_n| >= (1 - beta)(y - x) } over the
/// characteristic intervals of `system`. Throws NotAKnot unless x < y are both
/// points of the sequence, DomainError unless 0 <= beta <= 1/2.
int char_multiplicity_census(const OrthoSystem& system, double x, double y, double beta);

struct CensusResult {
    int k = 0;
    int N = 0;
    double beta = 0.0;
    int max_count = 0;
    Interval argmax_window;
};

/// Maximum of the census over every pair of sequence points x < y.
CensusResult max_census(const OrthoSystem& system, double beta);

/// Same computation from an explicit list of intervals and window endpoints
/// (sorted, distinct).
CensusResult max_census(std::span<const Interval> intervals, std::span<const double> endpoints, double beta);

}  // namespace orthospline
