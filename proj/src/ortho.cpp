#include "orthospline/ortho.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "orthospline/error.hpp"
#include "orthospline/parallel.hpp"

namespace orthospline {

std::vector<double> alpha_coefficients(const Partition& part, int i0) {
    const int k = part.order();
    if (i0 < k || i0 > part.size() - 1) {
        throw Error(ErrorCode::IndexOutOfRange, "i0 = " + std::to_string(i0));
    }
    const double t0 = part[i0];
    std::vector<double> alpha(static_cast<std::size_t>(k + 1));
    for (int j = i0 - k; j <= i0; ++j) {
        double v = ((j - i0 + k) % 2 == 0) ? 1.0 : -1.0;
        for (int l = i0 - k + 1; l <= j - 1; ++l) {
            v *= (t0 - part[l]) / (part[l + k] - part[l]);
        }
        for (int l = j + 1; l <= i0 - 1; ++l) {
            v *= (part[l + k] - t0) / (part[l + k] - part[l]);
        }
        alpha[static_cast<std::size_t>(j - (i0 - k))] = v;
    }
    return alpha;
}

OrthoFunction ortho_function(const GramSystem& gram, int i0, int level) {
    const Partition& part = gram.partition();
    const int k = part.order();
    std::vector<double> alpha = alpha_coefficients(part, i0);
    std::vector<double> w(static_cast<std::size_t>(part.size()), 0.0);
    for (int r = 0; r <= k; ++r) {
        w[static_cast<std::size_t>(i0 - k + r)] = alpha[static_cast<std::size_t>(r)];
    }
    w = gram.solve(w);
    double sq = 0.0;
    for (int r = 0; r <= k; ++r) {
        sq += alpha[static_cast<std::size_t>(r)] * w[static_cast<std::size_t>(i0 - k + r)];
    }
    const double norm2 = std::sqrt(sq);
    std::vector<double> coeffs(w);
    for (double& c : coeffs) c /= norm2;
    CharInterval ci = characteristic_interval(part, i0, alpha, level);
    return OrthoFunction{level,
                         i0,
                         std::move(alpha),
                         std::move(w),
                         norm2,
                         Spline(gram.partition_ptr(), std::move(coeffs)),
                         std::move(ci)};
}

PolynomialBlock::PolynomialBlock(int order) : order_(order) {
    if (order < 1) {
        throw Error(ErrorCode::DomainError, "order must be positive");
    }
    std::vector<double> knots(static_cast<std::size_t>(order), 0.0);
    knots.insert(knots.end(), static_cast<std::size_t>(order), 1.0);
    auto part = share(Partition::from_knots(order, std::move(knots), 1));
    const GramSystem gram = gram_matrix(part);
    const QuadratureRule rule(order);
    std::vector<double> basis(static_cast<std::size_t>(order));
    for (int d = 0; d < order; ++d) {
        // B-spline coefficients via the exact L2 projection onto the polynomial space.
        std::vector<double> rhs(static_cast<std::size_t>(order), 0.0);
        for (int q = 0; q < rule.size(); ++q) {
            const double x = rule.node(q, 0.0, 1.0);
            eval_basis_on_span(*part, order - 1, x, basis);
            const double v = rule.weight(q, 0.0, 1.0) * value(d, x);
            for (int r = 0; r < order; ++r) rhs[static_cast<std::size_t>(r)] += v * basis[static_cast<std::size_t>(r)];
        }
        splines_.emplace_back(part, gram.solve(rhs));
    }
}

double PolynomialBlock::value(int degree, double x) const {
    std::vector<double> p(static_cast<std::size_t>(degree + 1));
    legendre_values(2.0 * x - 1.0, p);
    return std::sqrt(2.0 * degree + 1.0) * p.back();
}

PolynomialBlock initial_block(int order) { return PolynomialBlock(order); }

double LegendreProjection::operator()(double x) const {
    std::vector<double> p(coeffs.size());
    legendre_values((2.0 * x - V.lo - V.hi) / V.length(), p);
    const double scale = std::sqrt(2.0 / V.length());
    double s = 0.0;
    for (std::size_t j = 0; j < coeffs.size(); ++j) s += coeffs[j] * scale * p[j];
    return s;
}

LegendreProjection legendre_projection(const std::function<double(double)>& f, Interval V, int order, int pieces) {
    if (!(V.length() > 0.0)) {
        throw Error(ErrorCode::EmptyInterval, "projection interval has no length");
    }
    if (order < 1 || pieces < 1) {
        throw Error(ErrorCode::DomainError, "order and pieces must be positive");
    }
    const QuadratureRule rule(std::max(order, 20));
    const double scale = std::sqrt(2.0 / V.length());
    std::vector<double> inner(static_cast<std::size_t>(order), 0.0);
    std::vector<double> p(static_cast<std::size_t>(order));
    const double h = V.length() / pieces;
    for (int piece = 0; piece < pieces; ++piece) {
        const double a = V.lo + piece * h;
        const double b = piece + 1 == pieces ? V.hi : a + h;
        for (int q = 0; q < rule.size(); ++q) {
            const double x = rule.node(q, a, b);
            const double fw = rule.weight(q, a, b) * f(x);
            legendre_values((2.0 * x - V.lo - V.hi) / V.length(), p);
            for (int j = 0; j < order; ++j) inner[static_cast<std::size_t>(j)] += fw * scale * p[static_cast<std::size_t>(j)];
        }
    }
    LegendreProjection proj{V, std::vector<double>(static_cast<std::size_t>(order))};
    for (int j = 0; j < order; ++j) {
        proj.coeffs[static_cast<std::size_t>(j)] = (2.0 * j + 1.0) / 2.0 * inner[static_cast<std::size_t>(j)];
    }
    return proj;
}

namespace {

/// Dense row-major matrix helpers for the oracle.
struct Dense {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Dense(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), 0.0) {}
    double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(j)]; }
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(j)]; }
};

Dense multiply(const Dense& x, const Dense& y) {
    Dense z(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i) {
        for (int l = 0; l < x.cols; ++l) {
            const double v = x(i, l);
            if (v == 0.0) continue;
            for (int j = 0; j < y.cols; ++j) z(i, j) += v * y(l, j);
        }
    }
    return z;
}

Dense transpose(const Dense& x) {
    Dense t(x.cols, x.rows);
    for (int i = 0; i < x.rows; ++i) {
        for (int j = 0; j < x.cols; ++j) t(j, i) = x(i, j);
    }
    return t;
}

/// Solves S c = rhs for SPD S by an unbanded Cholesky factorization.
std::vector<double> dense_spd_solve(Dense s, std::vector<double> rhs) {
    const int n = s.rows;
    for (int j = 0; j < n; ++j) {
        double d = s(j, j);
        for (int l = 0; l < j; ++l) d -= s(j, l) * s(j, l);
        if (!(d > 0.0)) {
            throw Error(ErrorCode::NotPositiveDefinite, "oracle coarse Gram, pivot " + std::to_string(j));
        }
        s(j, j) = std::sqrt(d);
        for (int i = j + 1; i < n; ++i) {
            double v = s(i, j);
            for (int l = 0; l < j; ++l) v -= s(i, l) * s(j, l);
            s(i, j) = v / s(j, j);
        }
    }
    for (int i = 0; i < n; ++i) {
        double v = rhs[static_cast<std::size_t>(i)];
        for (int l = 0; l < i; ++l) v -= s(i, l) * rhs[static_cast<std::size_t>(l)];
        rhs[static_cast<std::size_t>(i)] = v / s(i, i);
    }
    for (int i = n - 1; i >= 0; --i) {
        double v = rhs[static_cast<std::size_t>(i)];
        for (int l = i + 1; l < n; ++l) v -= s(l, i) * rhs[static_cast<std::size_t>(l)];
        rhs[static_cast<std::size_t>(i)] = v / s(i, i);
    }
    return rhs;
}

}  // namespace

Spline gram_schmidt_oracle(const KnotSequence& seq, int n) {
    if (n < 2) {
        throw Error(ErrorCode::LevelOutOfRange, "oracle level " + std::to_string(n));
    }
    auto fine = share(partition_at(seq, n));
    auto coarse = share(partition_at(seq, n - 1));
    const int i0 = insert_event(seq, n).i0;
    const RefinementMap map = boehm_refine(coarse, fine, i0);
    const int k = fine->order();
    const int m = fine->size();

    // Fine Gram matrix assembled densely with a k+1 point rule.
    Dense a(m, m);
    const QuadratureRule rule(k + 1);
    for (int mu = k - 1; mu <= m - 1; ++mu) {
        const double lo = (*fine)[mu];
        const double hi = (*fine)[mu + 1];
        if (!(hi > lo)) continue;
        for (int q = 0; q < rule.size(); ++q) {
            const BasisValues bv = eval_basis(*fine, rule.node(q, lo, hi));
            const double w = rule.weight(q, lo, hi);
            for (int r = 0; r < k; ++r) {
                for (int s = 0; s < k; ++s) {
                    a(bv.first + r, bv.first + s) += w * bv.values[static_cast<std::size_t>(r)] * bv.values[static_cast<std::size_t>(s)];
                }
            }
        }
    }
    Dense refine(m, m - 1);
    for (int i = 0; i < m - 1; ++i) {
        for (const RefinementTerm& t : map.rows[static_cast<std::size_t>(i)]) refine(t.index, i) += t.weight;
    }
    const Dense rt_a = multiply(transpose(refine), a);
    const Dense coarse_gram = multiply(rt_a, refine);

    std::vector<double> best;
    double best_rel = -1.0;
    for (int j = std::max(0, i0 - k); j <= i0; ++j) {
        std::vector<double> rhs(static_cast<std::size_t>(m - 1));
        for (int i = 0; i < m - 1; ++i) rhs[static_cast<std::size_t>(i)] = rt_a(i, j);
        const std::vector<double> c = dense_spd_solve(coarse_gram, rhs);
        std::vector<double> r(static_cast<std::size_t>(m), 0.0);
        r[static_cast<std::size_t>(j)] = 1.0;
        for (int row = 0; row < m; ++row) {
            double v = 0.0;
            for (int i = 0; i < m - 1; ++i) v += refine(row, i) * c[static_cast<std::size_t>(i)];
            r[static_cast<std::size_t>(row)] -= v;
        }
        double sq = 0.0;
        for (int x = 0; x < m; ++x) {
            for (int y = 0; y < m; ++y) sq += r[static_cast<std::size_t>(x)] * a(x, y) * r[static_cast<std::size_t>(y)];
        }
        const double rel = sq / a(j, j);
        if (rel > best_rel) {
            best_rel = rel;
            const double norm = std::sqrt(sq);
            for (double& v : r) v /= norm;
            best = std::move(r);
        }
    }
    double sign_probe = 0.0;
    for (int y = 0; y < m; ++y) sign_probe += a(i0 - k, y) * best[static_cast<std::size_t>(y)];
    if (sign_probe < 0.0) {
        for (double& v : best) v = -v;
    }
    return Spline(fine, std::move(best));
}

double estwj_ratio(const OrthoFunction& of, const GramSystem& gram) {
    const int j0 = of.characteristic.j0;
    const double b = gram.has_inverse() ? gram.inverse(j0, j0) : gram.inverse_column(j0)[static_cast<std::size_t>(j0)];
    return std::abs(of.w[static_cast<std::size_t>(j0)]) / b;
}

OrthoSystem OrthoSystem::build(const KnotSequence& seq, int N) {
    if (N < 1 || N > seq.max_level()) {
        throw Error(ErrorCode::LevelOutOfRange, "system level " + std::to_string(N));
    }
    OrthoSystem sys(seq.prefix(N), N);
    const PolynomialBlock block(seq.order());
    for (int d = 0; d < seq.order(); ++d) sys.functions_.push_back(block.spline(d));

    std::vector<std::optional<OrthoFunction>> built(static_cast<std::size_t>(std::max(0, N - 1)));
    parallel_for(N - 1, [&](int idx) {
        const int n = idx + 2;
        auto part = share(partition_at(sys.seq_, n));
        const auto knots = part->knots();
        const int i0 = static_cast<int>(std::upper_bound(knots.begin(), knots.end(), sys.seq_[static_cast<std::size_t>(n)]) - knots.begin()) - 1;
        const GramSystem gram = gram_matrix(std::move(part));
        built[static_cast<std::size_t>(idx)] = ortho_function(gram, i0, n);
    });
    for (auto& of : built) {
        sys.functions_.push_back(of->phi);
        sys.details_.push_back(std::move(*of));
    }
    return sys;
}

const Spline& OrthoSystem::function(int n) const {
    if (n < first_level() || n > max_level_) {
        throw Error(ErrorCode::LevelOutOfRange, "function level " + std::to_string(n));
    }
    return functions_[static_cast<std::size_t>(n - first_level())];
}

const OrthoFunction& OrthoSystem::detail(int n) const {
    if (n < 2 || n > max_level_) {
        throw Error(ErrorCode::LevelOutOfRange, "detail level " + std::to_string(n));
    }
    return details_[static_cast<std::size_t>(n - 2)];
}

Interval OrthoSystem::J(int n) const {
    if (n <= 1) {
        (void)function(n);
        return Interval{0.0, 1.0};
    }
    return characteristic(n).J;
}

}  // namespace orthospline
