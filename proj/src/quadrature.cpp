#include "orthospline/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "orthospline/error.hpp"

namespace orthospline {

QuadratureRule::QuadratureRule(int q) {
    if (q < 1) {
        throw Error(ErrorCode::QuadratureTooCoarse, "node count must be positive");
    }
    nodes_.resize(static_cast<std::size_t>(q));
    weights_.resize(static_cast<std::size_t>(q));
    // Newton on P_q from the Chebyshev-like initial guesses; nodes are symmetric.
    const int half = (q + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (q + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int j = 2; j <= q; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = q * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes_[static_cast<std::size_t>(i)] = -x;
        nodes_[static_cast<std::size_t>(q - 1 - i)] = x;
        weights_[static_cast<std::size_t>(i)] = w;
        weights_[static_cast<std::size_t>(q - 1 - i)] = w;
    }
    if (q % 2 == 1) {
        nodes_[static_cast<std::size_t>(q / 2)] = 0.0;
    }
}

void legendre_values(double x, std::span<double> out) {
    if (out.empty()) return;
    out[0] = 1.0;
    if (out.size() > 1) out[1] = x;
    for (std::size_t j = 2; j < out.size(); ++j) {
        const double jj = static_cast<double>(j);
        out[j] = ((2.0 * jj - 1.0) * x * out[j - 1] - (jj - 1.0) * out[j - 2]) / jj;
    }
}

}  // namespace orthospline
