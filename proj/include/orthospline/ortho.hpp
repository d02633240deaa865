#pragma once

#include <functional>
#include <span>
#include <vector>

#include "orthospline/bspline.hpp"
#include "orthospline/charint.hpp"

namespace orthospline {

/// alpha_j for j = i0-k..i0 (entry r is alpha_{i0-k+r}): the dual-basis
/// coefficients of the function in the fine space orthogonal to the coarse one.
/// Normalized so alpha_{i0-k} > 0 and max |alpha_j| <= 1.
std::vector<double> alpha_coefficients(const Partition& part, int i0);

/// One orthonormal spline function f_n and the data of its construction.
struct OrthoFunction {
    int level = 0;
    int i0 = 0;
    std::vector<double> alpha;  ///< j = i0-k..i0
    std::vector<double> w;      ///< B-spline coefficients of g = sum alpha_j N_j^*
    double norm2 = 0.0;         ///< ||g||_2
    Spline phi;                 ///< g / ||g||_2
    CharInterval characteristic;
};

/// Builds f_n from the fine Gram system: one band solve A w = alpha and
/// ||g||_2^2 = sum_j alpha_j w_j.
OrthoFunction ortho_function(const GramSystem& gram, int i0, int level = -1);

/// Orthonormal polynomials on [0,1] of degrees 0..k-1 (the system's first k
/// members), both in closed form and as splines on the partition 0^k 1^k.
class PolynomialBlock {
public:
    explicit PolynomialBlock(int order);

    [[nodiscard]] int order() const noexcept { return order_; }
    /// sqrt(2d+1) P_d(2x-1)
    [[nodiscard]] double value(int degree, double x) const;
    [[nodiscard]] const Spline& spline(int degree) const { return splines_[static_cast<std::size_t>(degree)]; }

private:
    int order_;
    std::vector<Spline> splines_;
};

PolynomialBlock initial_block(int order);

/// Orthogonal projection of f 1_V onto polynomials of order k on V, stored as
/// T f = sum_j c_j l_j^V with l_j^V = sqrt(2/|V|) P_j(affine map of V to [-1,1]).
struct LegendreProjection {
    Interval V;
    std::vector<double> coeffs;

    [[nodiscard]] double operator()(double x) const;
};

/// Integrates with a composite Gauss rule (`pieces` panels, max(k, 20) nodes),
/// exact for polynomial f. Throws EmptyInterval when |V| <= 0.
LegendreProjection legendre_projection(const std::function<double(double)>& f, Interval V, int order,
                                       int pieces = 16);

/// Brute-force f_n: orthogonalize a fine B-spline against the refined coarse
/// basis with dense linear algebra. Sign fixed by <phi, N_{i0-k}> > 0.
Spline gram_schmidt_oracle(const KnotSequence& seq, int n);

/// |w_{j0}| / b_{j0 j0}.
double estwj_ratio(const OrthoFunction& of, const GramSystem& gram);

/// The system f_n, n = -k+2..N, for one admissible sequence.
class OrthoSystem {
public:
    /// Throws LevelOutOfRange when N exceeds the sequence.
    static OrthoSystem build(const KnotSequence& seq, int N);

    [[nodiscard]] int order() const noexcept { return seq_.order(); }
    [[nodiscard]] int first_level() const noexcept { return 2 - order(); }
    [[nodiscard]] int max_level() const noexcept { return max_level_; }
    [[nodiscard]] int count() const noexcept { return static_cast<int>(functions_.size()); }
    [[nodiscard]] const KnotSequence& sequence() const noexcept { return seq_; }

    /// f_n for first_level() <= n <= max_level().
    [[nodiscard]] const Spline& function(int n) const;
    /// Construction data of f_n, n >= 2.
    [[nodiscard]] const OrthoFunction& detail(int n) const;
    [[nodiscard]] const CharInterval& characteristic(int n) const { return detail(n).characteristic; }
    /// J_n, with J_n = [0,1] for the polynomial block.
    [[nodiscard]] Interval J(int n) const;

private:
    OrthoSystem(KnotSequence seq, int N) : seq_(std::move(seq)), max_level_(N) {}

    KnotSequence seq_;
    int max_level_;
    std::vector<Spline> functions_;
    std::vector<OrthoFunction> details_;  // index n - 2
};

}  // namespace orthospline
