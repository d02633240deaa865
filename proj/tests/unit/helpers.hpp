#pragma once

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "orthospline/error.hpp"

namespace testing {

inline orthospline::ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const orthospline::Error& e) {
        return e.code();
    }
    FAIL("expected an orthospline::Error");
    return orthospline::ErrorCode::DomainError;
}

/// Knot vector with k-fold ends around the given interior knots.
inline std::vector<double> clamped(int k, std::vector<double> interior) {
    std::vector<double> t(static_cast<std::size_t>(k), 0.0);
    t.insert(t.end(), interior.begin(), interior.end());
    t.insert(t.end(), static_cast<std::size_t>(k), 1.0);
    return t;
}

}  // namespace testing

#define CHECK_ERROR_CODE(expr, expected) CHECK(::testing::code_of([&] { (void)(expr); }) == (expected))

namespace testing {

/// Plain recursive Cox-de Boor with the 0/0 = 0 convention, right-continuous;
/// at the right end of the interval the last nonempty knot span is used.
inline double naive_bspline(const std::vector<double>& t, int j, int k, double x) {
    if (k == 1) {
        const double hi = t.back();
        if (x == hi) {
            // left limit: the last nonempty span carries the value
            std::size_t last = t.size() - 1;
            while (last > 0 && t[last - 1] == hi) --last;
            return static_cast<std::size_t>(j) + 1 == last ? 1.0 : 0.0;
        }
        return (t[static_cast<std::size_t>(j)] <= x && x < t[static_cast<std::size_t>(j) + 1]) ? 1.0 : 0.0;
    }
    const auto J = static_cast<std::size_t>(j);
    const auto K = static_cast<std::size_t>(k);
    double v = 0.0;
    if (t[J + K - 1] > t[J]) v += (x - t[J]) / (t[J + K - 1] - t[J]) * naive_bspline(t, j, k - 1, x);
    if (t[J + K] > t[J + 1]) v += (t[J + K] - x) / (t[J + K] - t[J + 1]) * naive_bspline(t, j + 1, k - 1, x);
    return v;
}

/// Composite Simpson over each knot span, fine enough to serve as an oracle
/// for smooth piecewise integrands.
template <class F>
double simpson(F&& f, const std::vector<double>& breaks, int panels = 64) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double a = breaks[i];
        const double b = breaks[i + 1];
        if (b <= a) continue;
        const double h = (b - a) / panels;
        // interior points only, so one-sided pieces are integrated correctly
        double s = 0.0;
        for (int m = 0; m <= panels; ++m) {
            double x = a + m * h;
            if (m == 0) x = a + 1e-11 * (b - a);
            if (m == panels) x = b - 1e-11 * (b - a);
            const double w = (m == 0 || m == panels) ? 1.0 : (m % 2 ? 4.0 : 2.0);
            s += w * f(x);
        }
        total += s * h / 3.0;
    }
    return total;
}

}  // namespace testing

namespace testing {

/// Gauss-Jordan inverse with partial pivoting, row-major.
inline std::vector<double> dense_inverse(std::vector<double> a, int n) {
    const auto N = static_cast<std::size_t>(n);
    std::vector<double> inv(N * N, 0.0);
    for (std::size_t i = 0; i < N; ++i) inv[i * N + i] = 1.0;
    for (std::size_t c = 0; c < N; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < N; ++r)
            if (std::abs(a[r * N + c]) > std::abs(a[piv * N + c])) piv = r;
        for (std::size_t j = 0; j < N; ++j) {
            std::swap(a[c * N + j], a[piv * N + j]);
            std::swap(inv[c * N + j], inv[piv * N + j]);
        }
        const double d = a[c * N + c];
        for (std::size_t j = 0; j < N; ++j) {
            a[c * N + j] /= d;
            inv[c * N + j] /= d;
        }
        for (std::size_t r = 0; r < N; ++r) {
            if (r == c) continue;
            const double f = a[r * N + c];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < N; ++j) {
                a[r * N + j] -= f * a[c * N + j];
                inv[r * N + j] -= f * inv[c * N + j];
            }
        }
    }
    return inv;
}

}  // namespace testing
