#include "orthospline/bspline.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "orthospline/error.hpp"

namespace orthospline {

namespace {

constexpr int kStackOrder = 16;

void check_domain(const Partition& part, double x) {
    if (!(x >= part.lo() && x <= part.hi())) {
        throw Error(ErrorCode::DomainError, "x = " + std::to_string(x) + " outside partition");
    }
}

}  // namespace

void eval_basis_on_span(const Partition& part, int span, double x, std::span<double> out) {
    const int k = part.order();
    std::array<double, kStackOrder> left_buf{};
    std::array<double, kStackOrder> right_buf{};
    std::vector<double> heap;
    double* left = left_buf.data();
    double* right = right_buf.data();
    if (k > kStackOrder) {
        heap.assign(2 * static_cast<std::size_t>(k), 0.0);
        left = heap.data();
        right = heap.data() + k;
    }
    out[0] = 1.0;
    for (int j = 1; j < k; ++j) {
        left[j] = x - part[span + 1 - j];
        right[j] = part[span + j] - x;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            const double temp = out[static_cast<std::size_t>(r)] / (right[r + 1] + left[j - r]);
            out[static_cast<std::size_t>(r)] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        out[static_cast<std::size_t>(j)] = saved;
    }
}

BasisValues eval_basis(const Partition& part, double x) {
    check_domain(part, x);
    const int k = part.order();
    const int span = part.find_span(x);
    BasisValues result{span - k + 1, std::vector<double>(static_cast<std::size_t>(k))};
    eval_basis_on_span(part, span, x, result.values);
    return result;
}

Spline::Spline(PartitionPtr part, std::vector<double> coeffs) : part_(std::move(part)), coeffs_(std::move(coeffs)) {
    if (static_cast<int>(coeffs_.size()) != part_->size()) {
        throw Error(ErrorCode::PartitionMismatch, "coefficient count " + std::to_string(coeffs_.size()) +
                                                      " != basis size " + std::to_string(part_->size()));
    }
}

double Spline::operator()(double x) const {
    check_domain(*part_, x);
    return eval_on_span(part_->find_span(x), x);
}

double Spline::eval_on_span(int span, double x) const {
    const int k = part_->order();
    std::array<double, kStackOrder> buf{};
    std::vector<double> heap;
    std::span<double> values(buf.data(), static_cast<std::size_t>(std::min(k, kStackOrder)));
    if (k > kStackOrder) {
        heap.resize(static_cast<std::size_t>(k));
        values = heap;
    }
    eval_basis_on_span(*part_, span, x, values);
    double s = 0.0;
    const int first = span - k + 1;
    for (int r = 0; r < k; ++r) {
        s += coeffs_[static_cast<std::size_t>(first + r)] * values[static_cast<std::size_t>(r)];
    }
    return s;
}

Spline Spline::scaled(double c) const {
    std::vector<double> out = coeffs_;
    for (double& v : out) v *= c;
    return Spline(part_, std::move(out));
}

double inner_product(const Spline& f, const Spline& g) {
    std::vector<double> breaks = f.partition().breakpoints();
    const auto gb = g.partition().breakpoints();
    breaks.insert(breaks.end(), gb.begin(), gb.end());
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    const double lo = std::max(f.partition().lo(), g.partition().lo());
    const double hi = std::min(f.partition().hi(), g.partition().hi());
    const QuadratureRule rule(std::max(f.order(), g.order()));
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double a = breaks[i];
        const double b = breaks[i + 1];
        if (a < lo || b > hi) continue;
        const double mid = 0.5 * (a + b);
        const int sf = f.partition().find_span(mid);
        const int sg = g.partition().find_span(mid);
        for (int q = 0; q < rule.size(); ++q) {
            const double x = rule.node(q, a, b);
            sum += rule.weight(q, a, b) * f.eval_on_span(sf, x) * g.eval_on_span(sg, x);
        }
    }
    return sum;
}

std::vector<double> RefinementMap::refine(std::span<const double> coarse_coeffs) const {
    if (static_cast<int>(coarse_coeffs.size()) != coarse->size()) {
        throw Error(ErrorCode::PartitionMismatch, "coarse coefficient count");
    }
    std::vector<double> out(static_cast<std::size_t>(fine->size()), 0.0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (const RefinementTerm& t : rows[i]) {
            out[static_cast<std::size_t>(t.index)] += t.weight * coarse_coeffs[i];
        }
    }
    return out;
}

RefinementMap boehm_refine(PartitionPtr coarse, PartitionPtr fine, int i0) {
    const int k = fine->order();
    const int m = fine->size();
    if (coarse->order() != k || i0 < k || i0 > m - 1 || coarse->size() != m - 1 ||
        !(fine->without_knot(i0) == *coarse)) {
        throw Error(ErrorCode::PartitionMismatch, "fine is not coarse plus one knot at " + std::to_string(i0));
    }
    const Partition& t = *fine;
    RefinementMap map{std::move(coarse), std::move(fine), i0, {}};
    map.rows.resize(static_cast<std::size_t>(m - 1));
    for (int i = 0; i < m - 1; ++i) {
        auto& row = map.rows[static_cast<std::size_t>(i)];
        if (i <= i0 - k - 1) {
            row.push_back({i, 1.0});
        } else if (i <= i0 - 1) {
            row.push_back({i, (t[i0] - t[i]) / (t[i + k] - t[i])});
            row.push_back({i + 1, (t[i + k + 1] - t[i0]) / (t[i + k + 1] - t[i + 1])});
        } else {
            row.push_back({i + 1, 1.0});
        }
    }
    return map;
}

GramSystem::GramSystem(PartitionPtr part, SymmetricBand band)
    : part_(std::move(part)), band_(std::move(band)), chol_(band_) {}

std::vector<double> GramSystem::inverse_column(int j) const {
    std::vector<double> e(static_cast<std::size_t>(size()), 0.0);
    e[static_cast<std::size_t>(j)] = 1.0;
    chol_.solve_in_place(e);
    return e;
}

double GramSystem::inverse(int i, int j) const {
    if (!inverse_) {
        throw Error(ErrorCode::InverseNotAvailable, "dense inverse not materialized");
    }
    return (*inverse_)[static_cast<std::size_t>(i) * static_cast<std::size_t>(size()) + static_cast<std::size_t>(j)];
}

std::span<const double> GramSystem::inverse_matrix() const {
    if (!inverse_) {
        throw Error(ErrorCode::InverseNotAvailable, "dense inverse not materialized");
    }
    return *inverse_;
}

GramSystem gram_matrix(PartitionPtr part, const QuadratureRule& rule, bool with_inverse) {
    const Partition& t = *part;
    const int k = t.order();
    const int m = t.size();
    if (rule.size() < k) {
        throw Error(ErrorCode::QuadratureTooCoarse, "need at least k = " + std::to_string(k) + " nodes");
    }
    SymmetricBand band(m, k - 1);
    std::vector<double> values(static_cast<std::size_t>(k));
    for (int mu = k - 1; mu <= m - 1; ++mu) {
        const double a = t[mu];
        const double b = t[mu + 1];
        if (!(b > a)) continue;
        const int first = mu - k + 1;
        for (int q = 0; q < rule.size(); ++q) {
            const double x = rule.node(q, a, b);
            const double w = rule.weight(q, a, b);
            eval_basis_on_span(t, mu, x, values);
            for (int r = 0; r < k; ++r) {
                for (int s = 0; s <= r; ++s) {
                    band.at(first + r, first + s) += w * values[static_cast<std::size_t>(r)] *
                                                     values[static_cast<std::size_t>(s)];
                }
            }
        }
    }
    GramSystem sys(std::move(part), std::move(band));
    if (with_inverse && m <= GramSystem::kMaxDenseInverse) {
        std::vector<double> inv(static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
        for (int j = 0; j < m; ++j) {
            const auto col = sys.inverse_column(j);
            for (int i = 0; i < m; ++i) {
                inv[static_cast<std::size_t>(i) * static_cast<std::size_t>(m) + static_cast<std::size_t>(j)] =
                    col[static_cast<std::size_t>(i)];
            }
        }
        sys.inverse_ = std::move(inv);
    }
    return sys;
}

GramSystem gram_matrix(PartitionPtr part, bool with_inverse) {
    const QuadratureRule rule(part->order());
    return gram_matrix(std::move(part), rule, with_inverse);
}

namespace {

double piece_power_integral(const Spline& f, int mu, double lo, double hi, double p, const QuadratureRule& rule) {
    const int k = f.order();
    std::vector<double> cuts{lo};
    if (k > 1) {
        const int samples = 4 * k;
        double xa = lo;
        double fa = f.eval_on_span(mu, xa);
        for (int s = 1; s <= samples; ++s) {
            const double xb = lo + (hi - lo) * s / samples;
            const double fb = f.eval_on_span(mu, xb);
            if ((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0)) {
                double l = xa;
                double r = xb;
                double fl = fa;
                for (int it = 0; it < 200 && r - l > 1e-16 * (hi - lo); ++it) {
                    const double m = 0.5 * (l + r);
                    const double fm = f.eval_on_span(mu, m);
                    if ((fm < 0.0) == (fl < 0.0)) {
                        l = m;
                        fl = fm;
                    } else {
                        r = m;
                    }
                }
                cuts.push_back(0.5 * (l + r));
            }
            xa = xb;
            fa = fb;
        }
    }
    cuts.push_back(hi);

    auto integrate = [&](double l, double r) {
        double sum = 0.0;
        for (int q = 0; q < rule.size(); ++q) {
            sum += rule.weight(q, l, r) * std::pow(std::abs(f.eval_on_span(mu, rule.node(q, l, r))), p);
        }
        return sum;
    };
    // Bisect until the halves agree with the whole; the power of a polynomial
    // is only integrated exactly for small integer p. The per-leaf tolerance
    // does not shrink with depth, and differences below the rounding noise of
    // evaluating f (from the coefficient scale on this span) count as agreement.
    double cmax = 0.0;
    const auto c = f.coeffs();
    for (int j = std::max(0, mu - k + 1); j <= mu && j < static_cast<int>(c.size()); ++j) {
        cmax = std::max(cmax, std::abs(c[static_cast<std::size_t>(j)]));
    }
    const double noise_density = 64.0 * std::numeric_limits<double>::epsilon() * p * std::pow(cmax, p);
    auto adaptive = [&](auto&& self, double l, double r, double whole, double tol, int depth) -> double {
        const double m = 0.5 * (l + r);
        const double left = integrate(l, m);
        const double right = integrate(m, r);
        const double halves = left + right;
        const double floor = std::max(1e-15 * std::abs(halves), noise_density * (r - l));
        if (depth >= 40 || std::abs(halves - whole) <= std::max(tol, floor)) {
            return halves;
        }
        return self(self, l, m, left, tol, depth + 1) + self(self, m, r, right, tol, depth + 1);
    };
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double l = cuts[i];
        const double r = cuts[i + 1];
        if (!(r > l)) continue;
        const double whole = integrate(l, r);
        acc += adaptive(adaptive, l, r, whole, 1e-14 * whole, 0);
    }
    return acc;
}

}  // namespace

double power_integral_on_span(const Spline& f, int span, double lo, double hi, double p) {
    return piece_power_integral(f, span, lo, hi, p, QuadratureRule(f.order() + 2));
}

double lp_norm(const Spline& f, double p, double a, double b) {
    const Partition& t = f.partition();
    if (!(p >= 1.0) || !(a <= b) || a < t.lo() || b > t.hi()) {
        throw Error(ErrorCode::DomainError, "lp_norm needs p >= 1 and [a,b] inside the partition");
    }
    const int k = t.order();
    const bool sup = std::isinf(p);
    const QuadratureRule rule(k + 2);
    const int cheb = 8 * k;
    double acc = 0.0;
    for (int mu = k - 1; mu <= t.size() - 1; ++mu) {
        const double lo = std::max(a, t[mu]);
        const double hi = std::min(b, t[mu + 1]);
        if (!(hi > lo)) continue;
        if (sup) {
            acc = std::max({acc, std::abs(f.eval_on_span(mu, lo)), std::abs(f.eval_on_span(mu, hi))});
            for (int i = 0; i < cheb; ++i) {
                const double c = std::cos(std::numbers::pi * (2.0 * i + 1.0) / (2.0 * cheb));
                const double x = 0.5 * (lo + hi) + 0.5 * (hi - lo) * c;
                acc = std::max(acc, std::abs(f.eval_on_span(mu, x)));
            }
        } else {
            acc += piece_power_integral(f, mu, lo, hi, p, rule);
        }
    }
    return sup ? acc : std::pow(acc, 1.0 / p);
}

double lp_norm(const Spline& f, double p) {
    return lp_norm(f, p, f.partition().lo(), f.partition().hi());
}

std::pair<double, double> longest_subinterval(const Partition& part, int j) {
    const int k = part.order();
    int best = j;
    for (int l = j + 1; l < j + k; ++l) {
        if (part[l + 1] - part[l] > part[best + 1] - part[best]) best = l;
    }
    return {part[best], part[best + 1]};
}

StabilityRatio deboor_stability_ratio(const Spline& f, double p) {
    if (!(p >= 1.0) || std::isinf(p)) {
        throw Error(ErrorCode::DomainError, "stability ratio needs 1 <= p < infinity");
    }
    const Partition& t = f.partition();
    const auto a = f.coeffs();
    double seq = 0.0;
    double quotient = 0.0;
    for (int j = 0; j < t.size(); ++j) {
        const double aj = std::abs(a[static_cast<std::size_t>(j)]);
        seq += std::pow(aj, p) * t.support_length(j);
        if (aj == 0.0) continue;
        const auto [lo, hi] = longest_subinterval(t, j);
        const double local = std::pow(hi - lo, -1.0 / p) * lp_norm(f, p, lo, hi);
        quotient = std::max(quotient, aj / local);
    }
    const double norm = lp_norm(f, p);
    return StabilityRatio{norm / std::pow(seq, 1.0 / p), quotient};
}

}  // namespace orthospline
