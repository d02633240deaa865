#include "orthospline/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "orthospline/error.hpp"
#include "orthospline/parallel.hpp"
#include "orthospline/quadrature.hpp"

namespace orthospline {

std::span<const double> SampleMatrix::row(int n) const {
    if (n < first_level || n > N) {
        throw Error(ErrorCode::LevelOutOfRange, "sample row " + std::to_string(n));
    }
    const auto c = static_cast<std::size_t>(cols());
    return {values.data() + static_cast<std::size_t>(n - first_level) * c, c};
}

SampleMatrix sample_system(const OrthoSystem& system, int N, std::vector<double> points, std::vector<double> weights) {
    if (N < 1 || N > system.max_level()) {
        throw Error(ErrorCode::LevelOutOfRange, "sample level " + std::to_string(N));
    }
    SampleMatrix s;
    s.first_level = system.first_level();
    s.N = N;
    s.points = std::move(points);
    s.weights = std::move(weights);
    const auto c = static_cast<std::size_t>(s.cols());
    s.values.resize(static_cast<std::size_t>(s.rows()) * c);
    parallel_for(s.rows(), [&](int r) {
        const Spline& f = system.function(s.first_level + r);
        double* out = s.values.data() + static_cast<std::size_t>(r) * c;
        for (std::size_t i = 0; i < c; ++i) out[i] = f(s.points[i]);
    });
    return s;
}

SampleMatrix quadrature_samples(const OrthoSystem& system, int N, int q, std::span<const double> extra_breaks) {
    const int level = std::max(N, 1);
    std::vector<double> breaks = partition_at(system.sequence(), level).breakpoints();
    for (double b : extra_breaks) {
        if (b > 0.0 && b < 1.0) breaks.push_back(b);
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    const QuadratureRule rule(q);
    std::vector<double> points;
    std::vector<double> weights;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        for (int j = 0; j < rule.size(); ++j) {
            points.push_back(rule.node(j, breaks[i], breaks[i + 1]));
            weights.push_back(rule.weight(j, breaks[i], breaks[i + 1]));
        }
    }
    return sample_system(system, N, std::move(points), std::move(weights));
}

SampleMatrix grid_samples(const OrthoSystem& system, int N, int G) {
    if (G < 1) {
        throw Error(ErrorCode::DomainError, "grid size must be positive");
    }
    std::vector<double> points(static_cast<std::size_t>(G));
    for (int i = 0; i < G; ++i) points[static_cast<std::size_t>(i)] = (i + 0.5) / G;
    return sample_system(system, N, std::move(points));
}

Expansion expand(const std::function<double(double)>& f, const OrthoSystem& system, const SampleMatrix& quad) {
    if (quad.weights.size() != quad.points.size()) {
        throw Error(ErrorCode::DomainError, "expansion needs quadrature weights");
    }
    std::vector<double> fw(quad.points.size());
    for (std::size_t i = 0; i < fw.size(); ++i) fw[i] = f(quad.points[i]) * quad.weights[i];
    Expansion e{&system, quad.first_level, quad.N, std::vector<double>(static_cast<std::size_t>(quad.rows()))};
    for (int n = quad.first_level; n <= quad.N; ++n) {
        const auto row = quad.row(n);
        double s = 0.0;
        for (std::size_t i = 0; i < fw.size(); ++i) s += fw[i] * row[i];
        e.coeffs[static_cast<std::size_t>(n - quad.first_level)] = s;
    }
    return e;
}

Expansion expand(const std::function<double(double)>& f, const OrthoSystem& system, int N,
                 std::span<const double> breakpoints) {
    const SampleMatrix quad = quadrature_samples(system, N, system.order() + 2, breakpoints);
    return expand(f, system, quad);
}

Expansion expand(const Spline& f, const OrthoSystem& system, int N) {
    const auto breaks = f.partition().breakpoints();
    const SampleMatrix quad = quadrature_samples(system, N, std::max(system.order(), f.order()), breaks);
    return expand([&f](double x) { return f(x); }, system, quad);
}

std::vector<double> reconstruct(const Expansion& e, const SampleMatrix& samples) {
    std::vector<double> out(static_cast<std::size_t>(samples.cols()), 0.0);
    const int top = std::min(e.N, samples.N);
    for (int n = e.first_level; n <= top; ++n) {
        const double a = e.coeff(n);
        if (a == 0.0) continue;
        const auto row = samples.row(n);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += a * row[i];
    }
    return out;
}

double sampled_lp_norm(std::span<const double> values, std::span<const double> weights, double p) {
    if (!(p >= 1.0)) {
        throw Error(ErrorCode::DomainError, "p must be at least 1");
    }
    double acc = 0.0;
    if (std::isinf(p)) {
        for (double v : values) acc = std::max(acc, std::abs(v));
        return acc;
    }
    if (p == 2.0) {
        for (std::size_t i = 0; i < values.size(); ++i) acc += weights[i] * values[i] * values[i];
        return std::sqrt(acc);
    }
    for (std::size_t i = 0; i < values.size(); ++i) acc += weights[i] * std::pow(std::abs(values[i]), p);
    return std::pow(acc, 1.0 / p);
}

GridFunction square_function(const Expansion& e, const SampleMatrix& grid) {
    GridFunction out{std::vector<double>(static_cast<std::size_t>(grid.cols()), 0.0)};
    const int top = std::min(e.N, grid.N);
    for (int n = e.first_level; n <= top; ++n) {
        const double a = e.coeff(n);
        const auto row = grid.row(n);
        for (std::size_t i = 0; i < out.values.size(); ++i) {
            const double v = a * row[i];
            out.values[i] += v * v;
        }
    }
    for (double& v : out.values) v = std::sqrt(v);
    return out;
}

GridFunction maximal_function(const Expansion& e, const SampleMatrix& grid) {
    const auto c = static_cast<std::size_t>(grid.cols());
    std::vector<double> partial(c, 0.0);
    GridFunction out{std::vector<double>(c, 0.0)};
    const int top = std::min(e.N, grid.N);
    for (int n = e.first_level; n <= top; ++n) {
        const double a = e.coeff(n);
        const auto row = grid.row(n);
        for (std::size_t i = 0; i < c; ++i) {
            partial[i] += a * row[i];
            out.values[i] = std::max(out.values[i], std::abs(partial[i]));
        }
    }
    return out;
}

namespace {

struct Point {
    double x;
    double y;
};

/// Best average over [a, centre of cell c] for every c, a ranging over cell
/// boundaries at or left of the cell.
std::vector<double> left_sided(std::span<const double> g) {
    const std::size_t G = g.size();
    const double h = 1.0 / static_cast<double>(G);
    std::vector<double> best(G);
    std::vector<Point> hull;
    double prefix = 0.0;
    const auto slope = [](const Point& a, const Point& b) { return (b.y - a.y) / (b.x - a.x); };
    for (std::size_t c = 0; c < G; ++c) {
        const Point boundary{static_cast<double>(c) * h, prefix};
        while (hull.size() >= 2) {
            const Point& o = hull[hull.size() - 2];
            const Point& a = hull.back();
            const double cross = (a.x - o.x) * (boundary.y - o.y) - (a.y - o.y) * (boundary.x - o.x);
            if (cross > 0.0) break;
            hull.pop_back();
        }
        hull.push_back(boundary);
        const double v = std::abs(g[c]);
        const Point q{(static_cast<double>(c) + 0.5) * h, prefix + 0.5 * h * v};
        std::size_t lo = 0;
        std::size_t hi = hull.size() - 1;
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (slope(hull[mid + 1], q) >= slope(hull[mid], q)) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        best[c] = std::max(v, slope(hull[lo], q));
        prefix += h * v;
    }
    return best;
}

}  // namespace

GridFunction hl_maximal(const GridFunction& g) {
    const std::vector<double> left = left_sided(g.values);
    std::vector<double> reversed(g.values.rbegin(), g.values.rend());
    const std::vector<double> right = left_sided(reversed);
    GridFunction out{std::vector<double>(g.values.size())};
    const std::size_t G = g.values.size();
    for (std::size_t i = 0; i < G; ++i) out.values[i] = std::max(left[i], right[G - 1 - i]);
    return out;
}

GridFunction hl_maximal_bruteforce(const GridFunction& g) {
    const int G = g.size();
    const double h = 1.0 / G;
    std::vector<double> prefix(static_cast<std::size_t>(G) + 1, 0.0);
    for (int i = 0; i < G; ++i) {
        prefix[static_cast<std::size_t>(i) + 1] = prefix[static_cast<std::size_t>(i)] + h * std::abs(g.values[static_cast<std::size_t>(i)]);
    }
    GridFunction out{std::vector<double>(static_cast<std::size_t>(G))};
    for (int c = 0; c < G; ++c) {
        const double v = std::abs(g.values[static_cast<std::size_t>(c)]);
        const double x = (c + 0.5) * h;
        const double px = prefix[static_cast<std::size_t>(c)] + 0.5 * h * v;
        double best = v;
        for (int a = 0; a <= c; ++a) best = std::max(best, (px - prefix[static_cast<std::size_t>(a)]) / (x - a * h));
        for (int b = c + 1; b <= G; ++b) best = std::max(best, (prefix[static_cast<std::size_t>(b)] - px) / (b * h - x));
        out.values[static_cast<std::size_t>(c)] = best;
    }
    return out;
}

std::vector<Interval> cell_runs(std::span<const char> mask) {
    std::vector<Interval> runs;
    const double G = static_cast<double>(mask.size());
    std::size_t i = 0;
    while (i < mask.size()) {
        if (!mask[i]) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < mask.size() && mask[j]) ++j;
        runs.push_back(Interval{static_cast<double>(i) / G, static_cast<double>(j) / G});
        i = j;
    }
    return runs;
}

LevelSets level_sets(const Expansion& e, double lambda, double r, const SampleMatrix& grid) {
    if (!(lambda > 0.0) || !(r > 0.0 && r < 1.0)) {
        throw Error(ErrorCode::DomainError, "level sets need lambda > 0 and 0 < r < 1");
    }
    const GridFunction s = square_function(e, grid);
    const int G = s.size();
    GridFunction indicator{std::vector<double>(static_cast<std::size_t>(G), 0.0)};
    std::vector<char> in_e(static_cast<std::size_t>(G), 0);
    for (int i = 0; i < G; ++i) {
        if (s.values[static_cast<std::size_t>(i)] > lambda) {
            in_e[static_cast<std::size_t>(i)] = 1;
            indicator.values[static_cast<std::size_t>(i)] = 1.0;
        }
    }
    const GridFunction m = hl_maximal(indicator);
    std::vector<char> in_b(static_cast<std::size_t>(G), 0);
    LevelSets ls;
    ls.lambda = lambda;
    ls.r = r;
    ls.grid = G;
    ls.contained = true;
    int count_e = 0;
    int count_b = 0;
    for (int i = 0; i < G; ++i) {
        const auto u = static_cast<std::size_t>(i);
        in_b[u] = m.values[u] > r ? 1 : 0;
        count_e += in_e[u];
        count_b += in_b[u];
        if (in_e[u] && !in_b[u]) ls.contained = false;
    }
    ls.E = cell_runs(in_e);
    ls.B = cell_runs(in_b);
    ls.measure_E = static_cast<double>(count_e) / G;
    ls.measure_B = static_cast<double>(count_b) / G;
    ls.weak_constant = count_e > 0 ? r * ls.measure_B / ls.measure_E : 0.0;
    return ls;
}

namespace {

double quantile95(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(xs.size())));
    return xs[std::max<std::size_t>(rank, 1) - 1];
}

}  // namespace

SignFlipRatio sign_flip_ratio(const SampleMatrix& quad, std::span<const double> a, std::span<const double> eps,
                              double p) {
    if (static_cast<int>(a.size()) != quad.rows() || eps.size() != a.size()) {
        throw Error(ErrorCode::PartitionMismatch, "one coefficient and one sign per system function");
    }
    const auto cols = static_cast<std::size_t>(quad.cols());
    std::vector<double> f(cols, 0.0);
    std::vector<double> tf(cols, 0.0);
    std::vector<double> sq(cols, 0.0);
    for (int r = 0; r < quad.rows(); ++r) {
        const double ar = a[static_cast<std::size_t>(r)];
        const double er = eps[static_cast<std::size_t>(r)];
        const auto row = quad.row(quad.first_level + r);
        for (std::size_t i = 0; i < cols; ++i) {
            const double v = ar * row[i];
            f[i] += v;
            tf[i] += er * v;
            sq[i] += v * v;
        }
    }
    for (double& v : sq) v = std::sqrt(v);
    const double fn = sampled_lp_norm(f, quad.weights, p);
    return SignFlipRatio{sampled_lp_norm(tf, quad.weights, p) / fn, sampled_lp_norm(sq, quad.weights, p) / fn};
}

std::vector<ExperimentReport> uncond_experiment(const OrthoSystem& system, std::span<const double> ps, int trials,
                                                std::uint64_t seed) {
    if (trials < 1) {
        throw Error(ErrorCode::DomainError, "trials must be positive");
    }
    for (double p : ps) {
        if (!(p > 1.0) || std::isinf(p)) {
            throw Error(ErrorCode::DomainError, "experiment needs 1 < p < infinity");
        }
    }
    const int N = system.max_level();
    const SampleMatrix quad = quadrature_samples(system, N, system.order() + 2);
    const int rows = quad.rows();

    std::vector<ExperimentReport> reports;
    for (double p : ps) {
        std::vector<double> scale(static_cast<std::size_t>(rows));
        for (int r = 0; r < rows; ++r) {
            scale[static_cast<std::size_t>(r)] = 1.0 / sampled_lp_norm(quad.row(quad.first_level + r), quad.weights, p);
        }
        std::vector<SignFlipRatio> results(static_cast<std::size_t>(trials));
        parallel_for(trials, [&](int t) {
            std::seed_seq coeff_seed{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                                     static_cast<std::uint32_t>(t), 0u};
            std::seed_seq sign_seed{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                                    static_cast<std::uint32_t>(t), 1u};
            std::mt19937_64 coeff_rng(coeff_seed);
            std::mt19937_64 sign_rng(sign_seed);
            std::normal_distribution<double> normal;
            std::bernoulli_distribution coin;
            std::vector<double> a(static_cast<std::size_t>(rows));
            std::vector<double> eps(static_cast<std::size_t>(rows));
            for (int r = 0; r < rows; ++r) {
                a[static_cast<std::size_t>(r)] = normal(coeff_rng) * scale[static_cast<std::size_t>(r)];
                eps[static_cast<std::size_t>(r)] = coin(sign_rng) ? 1.0 : -1.0;
            }
            results[static_cast<std::size_t>(t)] = sign_flip_ratio(quad, a, eps, p);
        });
        ExperimentReport rep;
        rep.k = system.order();
        rep.p = p;
        rep.N = N;
        rep.trials = trials;
        rep.seed = seed;
        rep.grid = quad.cols();
        std::vector<double> ratios;
        rep.ratio_min = INFINITY;
        rep.sq_ratio_min = INFINITY;
        for (const SignFlipRatio& r : results) {
            ratios.push_back(r.ratio);
            rep.ratio_max = std::max(rep.ratio_max, r.ratio);
            rep.ratio_min = std::min(rep.ratio_min, r.ratio);
            rep.sq_ratio_max = std::max(rep.sq_ratio_max, r.sq_ratio);
            rep.sq_ratio_min = std::min(rep.sq_ratio_min, r.sq_ratio);
        }
        rep.ratio_q95 = quantile95(std::move(ratios));
        reports.push_back(rep);
    }
    return reports;
}

ExperimentReport uncond_experiment(const OrthoSystem& system, double p, int trials, std::uint64_t seed) {
    const double ps[] = {p};
    return uncond_experiment(system, ps, trials, seed).front();
}

ExperimentReport uncond_experiment(const KnotSequence& seq, int N, double p, int trials, std::uint64_t seed) {
    return uncond_experiment(OrthoSystem::build(seq, N), p, trials, seed);
}

namespace {

/// integral of |f|^p over knot interval mu, or its sup for p = infinity.
double interval_mass(const Spline& f, int mu, double p) {
    const Partition& t = f.partition();
    const double a = t[mu];
    const double b = t[mu + 1];
    if (std::isinf(p)) {
        const int cheb = 8 * f.order();
        double m = std::max(std::abs(f.eval_on_span(mu, a)), std::abs(f.eval_on_span(mu, b)));
        for (int i = 0; i < cheb; ++i) {
            const double c = std::cos(std::numbers::pi * (2.0 * i + 1.0) / (2.0 * cheb));
            m = std::max(m, std::abs(f.eval_on_span(mu, 0.5 * (a + b) + 0.5 * (b - a) * c)));
        }
        return m;
    }
    return power_integral_on_span(f, mu, a, b, p);
}

}  // namespace

TailAuditReport tail_decay_audit(const OrthoSystem& system, double p, double gamma_fit) {
    if (!(p >= 1.0) || !(gamma_fit >= 0.0 && gamma_fit < 1.0)) {
        throw Error(ErrorCode::DomainError, "tail audit needs p >= 1 and 0 <= gamma < 1");
    }
    TailAuditReport rep;
    rep.k = system.order();
    rep.N = system.max_level();
    rep.p = p;
    rep.gamma = gamma_fit;
    const bool sup = std::isinf(p);
    const double tail_exp = sup ? 1.0 : 1.0 - 1.0 / p;
    for (int n = 2; n <= system.max_level(); ++n) {
        const OrthoFunction& of = system.detail(n);
        const Spline& phi = of.phi;
        const Partition& t = phi.partition();
        const Interval J = of.characteristic.J;
        const DistanceCounter dc(phi.partition_ptr(), J);
        const int k = t.order();
        const int last = t.size() - 1;

        std::vector<int> spans;
        std::vector<double> mass;
        for (int mu = k - 1; mu <= last; ++mu) {
            if (!(t[mu + 1] > t[mu])) continue;
            spans.push_back(mu);
            mass.push_back(interval_mass(phi, mu, p));
        }
        const std::size_t S = spans.size();
        // Tail masses: left[i] covers spans before i, right[i] spans from i on.
        std::vector<double> left(S + 1, 0.0);
        std::vector<double> right(S + 1, 0.0);
        for (std::size_t i = 0; i < S; ++i) left[i + 1] = sup ? std::max(left[i], mass[i]) : left[i] + mass[i];
        for (std::size_t i = S; i-- > 0;) right[i] = sup ? std::max(right[i + 1], mass[i]) : right[i + 1] + mass[i];
        const auto finish = [&](double m) { return sup ? m : std::pow(m, 1.0 / p); };
        const double sj = std::sqrt(J.length());

        for (std::size_t i = 0; i <= S; ++i) {
            // x is the left end of span i (or 1 when i == S).
            const double x = i < S ? t[spans[i]] : 1.0;
            double tail = 0.0;
            double dist = 0.0;
            if (x < J.lo) {
                tail = finish(left[i]);
                dist = J.lo - x;
            } else if (x > J.hi) {
                tail = finish(right[i]);
                dist = x - J.hi;
            } else {
                continue;
            }
            if (tail == 0.0) continue;
            const double bound = std::pow(gamma_fit, dc.d_point(x)) * sj / std::pow(J.length() + dist, tail_exp);
            const double ratio = tail / bound;
            if (ratio > rep.ratio_max) {
                rep.ratio_max = ratio;
                rep.argmax_level = n;
            }
        }
        for (std::size_t i = 0; i < S; ++i) {
            const double a = t[spans[i]];
            const double b = t[spans[i] + 1];
            const double s = sup ? mass[i] : interval_mass(phi, spans[i], INFINITY);
            if (s == 0.0) continue;
            int d = 0;
            double dist = 0.0;
            if (b < J.lo) {
                d = dc.d_point(b);
                dist = J.lo - b;
            } else if (a > J.hi) {
                d = dc.d_point(a);
                dist = a - J.hi;
            }
            const double bound = std::pow(gamma_fit, d) * sj / (J.length() + dist + (b - a));
            rep.sup_ratio_max = std::max(rep.sup_ratio_max, s / bound);
        }
    }
    return rep;
}

}  // namespace orthospline
