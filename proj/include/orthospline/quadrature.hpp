#pragma once

#include <span>
#include <vector>

namespace orthospline {

/// q-point Gauss-Legendre rule; exact for polynomials of degree <= 2q-1.
class QuadratureRule {
public:
    explicit QuadratureRule(int q);

    [[nodiscard]] int size() const noexcept { return static_cast<int>(nodes_.size()); }
    /// Nodes and weights on the reference interval [-1, 1].
    [[nodiscard]] std::span<const double> nodes() const noexcept { return nodes_; }
    [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }

    /// Node i mapped to [a, b].
    [[nodiscard]] double node(int i, double a, double b) const {
        return 0.5 * (a + b) + 0.5 * (b - a) * nodes_[static_cast<std::size_t>(i)];
    }
    [[nodiscard]] double weight(int i, double a, double b) const {
        return 0.5 * (b - a) * weights_[static_cast<std::size_t>(i)];
    }

    template <class F>
    [[nodiscard]] double integrate(F&& f, double a, double b) const {
        double sum = 0.0;
        for (int i = 0; i < size(); ++i) {
            sum += weight(i, a, b) * f(node(i, a, b));
        }
        return sum;
    }

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

/// Legendre polynomials P_0..P_{count-1} at x in [-1, 1], normalized P_j(1) = 1.
void legendre_values(double x, std::span<double> out);

}  // namespace orthospline
