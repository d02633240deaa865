#include "orthospline/gram.hpp"

#include <algorithm>
#include <cmath>

#include "orthospline/error.hpp"

namespace orthospline {

std::optional<SignViolation> checkerboard_check(std::span<const double> inverse, int n, double rel_tol) {
    double scale = 0.0;
    for (double v : inverse) scale = std::max(scale, std::abs(v));
    const double tol = rel_tol * scale;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double b = inverse[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)];
            const double signed_value = ((i + j) % 2 == 0) ? b : -b;
            if (signed_value < -tol) {
                return SignViolation{i, j, signed_value};
            }
        }
    }
    return std::nullopt;
}

std::optional<SignViolation> checkerboard_check(const GramSystem& gram, double rel_tol) {
    return checkerboard_check(gram.inverse_matrix(), gram.size(), rel_tol);
}

double diag_inverse_bound(std::span<const double> matrix, std::span<const double> inverse, int n) {
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto d = static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(i);
        worst = std::max(worst, 1.0 / (matrix[d] * inverse[d]));
    }
    return worst;
}

double diag_inverse_bound(const GramSystem& gram) {
    const int n = gram.size();
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        worst = std::max(worst, 1.0 / (gram.entry(i, i) * gram.inverse(i, i)));
    }
    return worst;
}

DecayProfile decay_profile(const GramSystem& gram) {
    const Partition& t = gram.partition();
    const int k = t.order();
    const int n = gram.size();
    if (n < 2 * k) {
        throw Error(ErrorCode::DegenerateFit, "need M >= 2k");
    }
    DecayProfile prof;
    prof.M = n;
    prof.k = k;
    prof.m.assign(static_cast<std::size_t>(n), 0.0);
    const auto inv = gram.inverse_matrix();
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const double b = std::abs(inv[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)]);
            const double len = t[j + k] - t[i];
            auto& slot = prof.m[static_cast<std::size_t>(j - i)];
            slot = std::max(slot, b * len);
        }
    }
    const double m0 = prof.m[0];
    const double floor = 1e-13 * m0;
    int d_max = 0;
    while (d_max + 1 < n && prof.m[static_cast<std::size_t>(d_max + 1)] > floor) ++d_max;
    prof.d_max = d_max;

    bool diagonal = true;
    for (int d = 1; d < n; ++d) {
        if (prof.m[static_cast<std::size_t>(d)] != 0.0) diagonal = false;
    }
    if (diagonal) {
        prof.gamma = 0.0;
        prof.C = m0;
        prof.residual = 0.0;
        return prof;
    }
    if (d_max + 1 < 3) {
        throw Error(ErrorCode::DegenerateFit, "fewer than 3 offsets above the noise floor");
    }
    int d_lo = d_max / 2;
    if (d_max - d_lo + 1 < 3) d_lo = 0;

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double count = d_max - d_lo + 1;
    for (int d = d_lo; d <= d_max; ++d) {
        const double y = std::log(prof.m[static_cast<std::size_t>(d)]);
        sx += d;
        sy += y;
        sxx += static_cast<double>(d) * d;
        sxy += d * y;
    }
    const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    prof.gamma = std::exp(slope);

    // Inflate C until the envelope dominates every fitted offset.
    double log_c = -INFINITY;
    for (int d = 0; d <= d_max; ++d) {
        log_c = std::max(log_c, std::log(prof.m[static_cast<std::size_t>(d)]) - d * slope);
    }
    prof.C = std::exp(log_c);
    double residual = -INFINITY;
    for (int d = 0; d <= d_max; ++d) {
        residual = std::max(residual, std::log(prof.m[static_cast<std::size_t>(d)]) - log_c - d * slope);
    }
    prof.residual = residual;
    return prof;
}

}  // namespace orthospline
