#pragma once

#include <span>
#include <vector>

namespace orthospline {

/// Symmetric band matrix with `bandwidth` sub-diagonals, lower triangle stored.
class SymmetricBand {
public:
    SymmetricBand(int n, int bandwidth);

    [[nodiscard]] int size() const noexcept { return n_; }
    [[nodiscard]] int bandwidth() const noexcept { return bw_; }

    /// Entry (i, j); zero outside the band.
    [[nodiscard]] double operator()(int i, int j) const;
    /// Mutable access to the stored entry, |i - j| <= bandwidth.
    double& at(int i, int j);

    /// y = A x
    [[nodiscard]] std::vector<double> multiply(std::span<const double> x) const;

private:
    [[nodiscard]] std::size_t offset(int row, int col) const {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(bw_ + 1) +
               static_cast<std::size_t>(col - row + bw_);
    }

    int n_;
    int bw_;
    std::vector<double> data_;
};

/// Band Cholesky A = L L^T; O(n bw^2) factorization, O(n bw) per solve.
class BandCholesky {
public:
    /// Throws Error(NotPositiveDefinite) when a pivot is not positive.
    explicit BandCholesky(const SymmetricBand& a);

    [[nodiscard]] int size() const noexcept { return n_; }
    void solve_in_place(std::span<double> rhs) const;
    [[nodiscard]] std::vector<double> solve(std::span<const double> rhs) const;

private:
    int n_;
    int bw_;
    std::vector<double> l_;  // row-major band of L, same layout as SymmetricBand
};

}  // namespace orthospline
