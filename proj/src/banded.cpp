#include "orthospline/banded.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "orthospline/error.hpp"

namespace orthospline {

SymmetricBand::SymmetricBand(int n, int bandwidth)
    : n_(n), bw_(bandwidth), data_(static_cast<std::size_t>(n) * static_cast<std::size_t>(bandwidth + 1), 0.0) {}

double SymmetricBand::operator()(int i, int j) const {
    if (i < j) std::swap(i, j);
    if (i - j > bw_) return 0.0;
    return data_[offset(i, j)];
}

double& SymmetricBand::at(int i, int j) {
    if (i < j) std::swap(i, j);
    if (i - j > bw_) {
        throw Error(ErrorCode::IndexOutOfRange, "entry outside band");
    }
    return data_[offset(i, j)];
}

std::vector<double> SymmetricBand::multiply(std::span<const double> x) const {
    std::vector<double> y(static_cast<std::size_t>(n_), 0.0);
    for (int i = 0; i < n_; ++i) {
        const int lo = std::max(0, i - bw_);
        const int hi = std::min(n_ - 1, i + bw_);
        double s = 0.0;
        for (int j = lo; j <= hi; ++j) {
            s += (*this)(i, j) * x[static_cast<std::size_t>(j)];
        }
        y[static_cast<std::size_t>(i)] = s;
    }
    return y;
}

BandCholesky::BandCholesky(const SymmetricBand& a)
    : n_(a.size()), bw_(a.bandwidth()), l_(static_cast<std::size_t>(a.size()) * static_cast<std::size_t>(a.bandwidth() + 1), 0.0) {
    const auto idx = [this](int row, int col) {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(bw_ + 1) +
               static_cast<std::size_t>(col - row + bw_);
    };
    for (int i = 0; i < n_; ++i) {
        const int lo = std::max(0, i - bw_);
        for (int j = lo; j <= i; ++j) {
            double s = a(i, j);
            const int klo = std::max(lo, j - bw_);
            for (int m = klo; m < j; ++m) {
                s -= l_[idx(i, m)] * l_[idx(j, m)];
            }
            if (j == i) {
                if (!(s > 0.0)) {
                    throw Error(ErrorCode::NotPositiveDefinite, "pivot " + std::to_string(i));
                }
                l_[idx(i, i)] = std::sqrt(s);
            } else {
                l_[idx(i, j)] = s / l_[idx(j, j)];
            }
        }
    }
}

void BandCholesky::solve_in_place(std::span<double> x) const {
    const auto idx = [this](int row, int col) {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(bw_ + 1) +
               static_cast<std::size_t>(col - row + bw_);
    };
    for (int i = 0; i < n_; ++i) {
        double s = x[static_cast<std::size_t>(i)];
        for (int j = std::max(0, i - bw_); j < i; ++j) {
            s -= l_[idx(i, j)] * x[static_cast<std::size_t>(j)];
        }
        x[static_cast<std::size_t>(i)] = s / l_[idx(i, i)];
    }
    for (int i = n_ - 1; i >= 0; --i) {
        double s = x[static_cast<std::size_t>(i)];
        for (int j = i + 1; j <= std::min(n_ - 1, i + bw_); ++j) {
            s -= l_[idx(j, i)] * x[static_cast<std::size_t>(j)];
        }
        x[static_cast<std::size_t>(i)] = s / l_[idx(i, i)];
    }
}

std::vector<double> BandCholesky::solve(std::span<const double> rhs) const {
    std::vector<double> x(rhs.begin(), rhs.end());
    solve_in_place(x);
    return x;
}

}  // namespace orthospline
