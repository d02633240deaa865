#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace orthospline {

/// Admissible point sequence t_0 = 0, t_1 = 1, t_2, t_3, ... in (0,1) where no
/// interior value occurs more than `order` times. Construct via validate_admissible.
class KnotSequence {
public:
    [[nodiscard]] int order() const noexcept { return order_; }
    [[nodiscard]] std::span<const double> points() const noexcept { return points_; }
    [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return points_[i]; }

    /// Largest level n for which partition_at is defined.
    [[nodiscard]] int max_level() const noexcept { return static_cast<int>(points_.size()) - 1; }

    /// The first n+1 points as a sequence of its own.
    [[nodiscard]] KnotSequence prefix(int n) const;

    friend bool operator==(const KnotSequence&, const KnotSequence&) = default;

private:
    friend KnotSequence validate_admissible(int order, std::vector<double> raw_points);
    KnotSequence(int order, std::vector<double> points) : order_(order), points_(std::move(points)) {}

    int order_ = 1;
    std::vector<double> points_;
};

/// Checks boundary, range and multiplicity. Never reorders the input.
KnotSequence validate_admissible(int order, std::vector<double> raw_points);

/// Knot vector tau_0 <= ... <= tau_{M+k-1} with k-fold end knots and tau_i < tau_{i+k}.
///
/// Indices are 0-based: the B-spline N_j is supported on [tau_j, tau_{j+k}],
/// j = 0..M-1. `level()` is n for partitions produced by partition_at and -1
/// for partitions built directly from a knot vector.
class Partition {
public:
    /// Validates an explicit knot vector; the end knots define the interval.
    static Partition from_knots(int order, std::vector<double> knots, int level = -1);

    [[nodiscard]] int order() const noexcept { return order_; }
    [[nodiscard]] int size() const noexcept { return static_cast<int>(knots_.size()) - order_; }
    [[nodiscard]] int level() const noexcept { return level_; }
    [[nodiscard]] std::span<const double> knots() const noexcept { return knots_; }
    [[nodiscard]] double operator[](int i) const { return knots_[static_cast<std::size_t>(i)]; }
    [[nodiscard]] double lo() const noexcept { return knots_.front(); }
    [[nodiscard]] double hi() const noexcept { return knots_.back(); }

    /// nu_j = tau_{j+k} - tau_j.
    [[nodiscard]] double support_length(int j) const { return (*this)[j + order_] - (*this)[j]; }

    /// Index mu with tau_mu <= x < tau_{mu+1} and k-1 <= mu <= M-1. At the right
    /// end the last nonempty interval is used (left limit).
    [[nodiscard]] int find_span(double x) const;

    /// Sorted distinct knot values (the grid points).
    [[nodiscard]] std::vector<double> breakpoints() const;

    /// The same partition with tau_i removed.
    [[nodiscard]] Partition without_knot(int i) const;

    friend bool operator==(const Partition& a, const Partition& b) {
        return a.order_ == b.order_ && a.knots_ == b.knots_;
    }

private:
    Partition(int order, std::vector<double> knots, int level)
        : order_(order), level_(level), knots_(std::move(knots)) {}

    int order_ = 1;
    int level_ = -1;
    std::vector<double> knots_;
};

/// Partition T_n built from t_0..t_n. n = 1 gives the polynomial partition 0^k 1^k.
Partition partition_at(const KnotSequence& seq, int n);

struct InsertEvent {
    int level = 0;
    int i0 = 0;  ///< position of t_n in partition_at(seq, level); last copy on ties
};

InsertEvent insert_event(const KnotSequence& seq, int n);

enum class KnotLaw { UniformIid, DyadicShuffled };

KnotLaw parse_knot_law(const std::string& name);
std::string to_string(KnotLaw law);

/// Deterministic generator of admissible prefixes with `n_points` points total.
KnotSequence random_admissible(std::uint64_t seed, int order, int n_points, KnotLaw law);

}  // namespace orthospline
