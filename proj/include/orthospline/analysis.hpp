#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "orthospline/charint.hpp"
#include "orthospline/ortho.hpp"

namespace orthospline {

/// Values of f_n, n = first_level..N, at a fixed list of points (row n, column
/// point), with optional quadrature weights.
struct SampleMatrix {
    int first_level = 0;
    int N = 0;
    std::vector<double> points;
    std::vector<double> weights;  ///< empty for grids
    std::vector<double> values;   ///< row-major, rows() x cols()

    [[nodiscard]] int rows() const noexcept { return N - first_level + 1; }
    [[nodiscard]] int cols() const noexcept { return static_cast<int>(points.size()); }
    [[nodiscard]] std::span<const double> row(int n) const;
};

SampleMatrix sample_system(const OrthoSystem& system, int N, std::vector<double> points,
                           std::vector<double> weights = {});

/// q Gauss nodes on every interval between consecutive breakpoints of the
/// level-N partition merged with `extra_breaks`.
SampleMatrix quadrature_samples(const OrthoSystem& system, int N, int q, std::span<const double> extra_breaks = {});

/// Cell centres (i + 1/2)/G.
SampleMatrix grid_samples(const OrthoSystem& system, int N, int G);

struct Expansion {
    const OrthoSystem* system = nullptr;
    int first_level = 0;
    int N = 0;
    std::vector<double> coeffs;  ///< a_n at index n - first_level

    [[nodiscard]] double coeff(int n) const { return coeffs[static_cast<std::size_t>(n - first_level)]; }
};

/// a_n = <f, f_n> by the quadrature carried in `quad`.
Expansion expand(const std::function<double(double)>& f, const OrthoSystem& system, const SampleMatrix& quad);

/// Breakpoints of f are added to the level-N ones so integration is exact for
/// piecewise polynomials of order <= k + 2 broken there.
Expansion expand(const std::function<double(double)>& f, const OrthoSystem& system, int N,
                 std::span<const double> breakpoints = {});

Expansion expand(const Spline& f, const OrthoSystem& system, int N);

/// sum_n a_n f_n at the sample points.
std::vector<double> reconstruct(const Expansion& e, const SampleMatrix& samples);

/// L^p norm of sampled values against the quadrature weights of `quad`.
double sampled_lp_norm(std::span<const double> values, std::span<const double> weights, double p);

/// Piecewise constant function on G equal cells of [0,1].
struct GridFunction {
    std::vector<double> values;

    [[nodiscard]] int size() const noexcept { return static_cast<int>(values.size()); }
    [[nodiscard]] double centre(int i) const noexcept { return (i + 0.5) / size(); }
};

GridFunction square_function(const Expansion& e, const SampleMatrix& grid);

/// max_m |sum_{n <= m} a_n f_n| in one accumulating pass over n.
GridFunction maximal_function(const Expansion& e, const SampleMatrix& grid);

/// Hardy-Littlewood maximal function of |g| at cell centres, with g read as
/// the step function it samples. Supremum over all intervals containing the
/// centre, one side at a time, each by a tangent query on the lower convex
/// hull of the prefix integral. O(G log G).
GridFunction hl_maximal(const GridFunction& g);

/// Same quantity by direct scan over every cell boundary, O(G^2).
GridFunction hl_maximal_bruteforce(const GridFunction& g);

struct LevelSets {
    double lambda = 0.0;
    double r = 0.0;
    int grid = 0;
    std::vector<Interval> E;  ///< [Sf > lambda] as maximal runs of cells
    std::vector<Interval> B;  ///< [M 1_E > r]
    double measure_E = 0.0;
    double measure_B = 0.0;
    bool contained = false;
    double weak_constant = 0.0;  ///< r |B| / |E|, 0 when E is empty
};

LevelSets level_sets(const Expansion& e, double lambda, double r, const SampleMatrix& grid);

/// Runs of consecutive set cells as closed intervals.
std::vector<Interval> cell_runs(std::span<const char> mask);

struct ExperimentReport {
    int k = 0;
    double p = 0.0;
    int N = 0;
    int trials = 0;
    std::uint64_t seed = 0;
    double ratio_max = 0.0;
    double ratio_min = 0.0;
    double ratio_q95 = 0.0;
    double sq_ratio_max = 0.0;
    double sq_ratio_min = 0.0;
    int grid = 0;  ///< quadrature nodes used for the norms
};

struct SignFlipRatio {
    double ratio = 0.0;     ///< ||sum eps_n a_n f_n||_p / ||f||_p
    double sq_ratio = 0.0;  ///< ||Sf||_p / ||f||_p
};

/// Both ratios for f = sum a_n f_n, a and eps indexed like the rows of `quad`.
SignFlipRatio sign_flip_ratio(const SampleMatrix& quad, std::span<const double> a, std::span<const double> eps,
                              double p);

/// Random in-space f = sum a_n f_n with a_n = g_n / ||f_n||_p, g_n iid N(0,1),
/// and random signs eps; R = ||sum eps_n a_n f_n||_p / ||f||_p. Trial t draws
/// from streams seeded by (seed, t), so runs are reproducible and the first
/// coefficients agree between systems of different length.
ExperimentReport uncond_experiment(const OrthoSystem& system, double p, int trials, std::uint64_t seed);

/// Shares one sample matrix across several exponents.
std::vector<ExperimentReport> uncond_experiment(const OrthoSystem& system, std::span<const double> ps, int trials,
                                                std::uint64_t seed);

ExperimentReport uncond_experiment(const KnotSequence& seq, int N, double p, int trials, std::uint64_t seed);

struct TailAuditReport {
    int k = 0;
    int N = 0;
    double p = 0.0;
    double gamma = 0.0;
    double ratio_max = 0.0;      ///< tail norm over its envelope, max over n and x
    double sup_ratio_max = 0.0;  ///< per knot interval sup |phi| over its envelope
    int argmax_level = 0;
};

/// For n >= 2 and every knot x of the level-n partition outside J_n, compares
/// ||phi_n|| on the tail beyond x with
/// gamma^{d_n(x)} |J_n|^{1/2} / (|J_n| + dist(x, J_n))^{1-1/p}.
TailAuditReport tail_decay_audit(const OrthoSystem& system, double p, double gamma_fit);

}  // namespace orthospline
