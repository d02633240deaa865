#pragma once

#include <optional>
#include <span>
#include <vector>

#include "orthospline/bspline.hpp"

namespace orthospline {

struct SignViolation {
    int row = 0;
    int col = 0;
    double value = 0.0;  ///< (-1)^{i+j} b_ij
};

/// Checks (-1)^{i+j} b_ij >= -rel_tol * max|b| over a row-major n x n matrix.
/// Returns the first violation in row-major order.
std::optional<SignViolation> checkerboard_check(std::span<const double> inverse, int n, double rel_tol = 1e-12);

/// Same check on a GramSystem's materialized inverse (InverseNotAvailable otherwise).
std::optional<SignViolation> checkerboard_check(const GramSystem& gram, double rel_tol = 1e-12);

/// max_i 1 / (c_ii d_ii) for an SPD matrix C and its inverse D (both row-major n x n).
/// For SPD matrices this never exceeds 1.
double diag_inverse_bound(std::span<const double> matrix, std::span<const double> inverse, int n);

double diag_inverse_bound(const GramSystem& gram);

/// Geometric envelope C * gamma^|i-j| fitted to |b_ij| (tau_{max(i,j)+k} - tau_{min(i,j)}).
struct DecayProfile {
    double gamma = 0.0;
    double C = 0.0;
    double residual = 0.0;  ///< max log(m_d / (C gamma^d)) over fitted offsets; <= 0
    int M = 0;
    int k = 0;
    int d_max = 0;             ///< largest offset above the noise floor
    std::vector<double> m;     ///< m_d for every offset d = 0..M-1
};

/// Fits the envelope over offsets whose m_d exceeds 1e-13 m_0. The slope is
/// taken from the upper half of that range, where the linear growth of the
/// length factor no longer biases it. Exactly diagonal inverses report gamma = 0.
/// Throws DegenerateFit when M < 2k or fewer than 3 offsets carry signal.
DecayProfile decay_profile(const GramSystem& gram);

}  // namespace orthospline
