#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "orthospline/bspline.hpp"

using namespace orthospline;
using testing::clamped;
using testing::naive_bspline;

namespace {

std::vector<double> random_knots(std::mt19937_64& rng, int k, int interior) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> in;
    while (static_cast<int>(in.size()) < interior) {
        double x = std::round(u(rng) * 16) / 16;  // coarse grid forces repeats
        if (x <= 0 || x >= 1) continue;
        if (std::count(in.begin(), in.end(), x) >= k) continue;
        in.push_back(x);
    }
    std::sort(in.begin(), in.end());
    return clamped(k, in);
}

}  // namespace

TEST_SUITE("bspline") {

TEST_CASE("eval_basis examples for k = 2") {
    const Partition p = Partition::from_knots(2, {0, 0, 0.5, 1, 1});
    const BasisValues a = eval_basis(p, 0.5);
    // N_1 = 1 at the interior knot
    for (int r = 0; r < 2; ++r) {
        CHECK(a.values[static_cast<std::size_t>(r)] == doctest::Approx(a.first + r == 1 ? 1.0 : 0.0));
    }
    const BasisValues b = eval_basis(p, 0.75);
    CHECK(b.first == 1);
    CHECK(b.values[0] == doctest::Approx(0.5));
    CHECK(b.values[1] == doctest::Approx(0.5));
    const BasisValues c = eval_basis(p, 1.0);
    CHECK(c.first == 1);
    CHECK(c.values[1] == doctest::Approx(1.0));
    CHECK_ERROR_CODE(eval_basis(p, 1.5), ErrorCode::DomainError);
}

TEST_CASE("k = 1 is the indicator basis") {
    const Partition p = Partition::from_knots(1, {0, 0.25, 0.5, 1});
    CHECK(eval_basis(p, 0.25).first == 1);
    CHECK(eval_basis(p, 0.2).first == 0);
    CHECK(eval_basis(p, 1.0).first == 2);
    CHECK(eval_basis(p, 1.0).values[0] == 1.0);
}

TEST_CASE("property: eval_basis matches the recursive definition") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 1; k <= 5; ++k) {
        for (int rep = 0; rep < 10; ++rep) {
            const auto t = random_knots(rng, k, 8);
            const Partition p = Partition::from_knots(k, t);
            std::vector<double> xs{0.0, 1.0, 0.5, 0.25};
            for (int i = 0; i < 40; ++i) xs.push_back(u(rng));
            for (double x : xs) {
                const BasisValues b = eval_basis(p, x);
                double sum = 0.0;
                for (int j = 0; j < p.size(); ++j) {
                    const double expect = naive_bspline(t, j, k, x);
                    const int r = j - b.first;
                    const double got = (r >= 0 && r < k) ? b.values[static_cast<std::size_t>(r)] : 0.0;
                    CHECK(got == doctest::Approx(expect).epsilon(1e-12));
                    CHECK(got >= -1e-15);
                    sum += got;
                }
                CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
            }
        }
    }
}

TEST_CASE("Spline evaluation and inner product") {
    auto p = share(Partition::from_knots(3, clamped(3, {0.3, 0.3, 0.7})));
    const Spline f(p, {1, -2, 0.5, 3, -1, 2});
    const auto t = std::vector<double>(p->knots().begin(), p->knots().end());
    for (double x : {0.0, 0.1, 0.3, 0.5, 0.7, 0.99, 1.0}) {
        double expect = 0.0;
        for (int j = 0; j < 6; ++j) expect += f.coeffs()[static_cast<std::size_t>(j)] * naive_bspline(t, j, 3, x);
        CHECK(f(x) == doctest::Approx(expect).epsilon(1e-13));
    }
    CHECK_ERROR_CODE(f(-0.1), ErrorCode::DomainError);
    CHECK_ERROR_CODE(Spline(p, {1, 2}), ErrorCode::PartitionMismatch);

    auto q = share(Partition::from_knots(2, clamped(2, {0.5, 0.6})));
    const Spline g(q, {0.2, 1, -1, 0.4});
    const double oracle = testing::simpson([&](double x) { return f(x) * g(x); }, {0, 0.3, 0.5, 0.6, 0.7, 1}, 200);
    CHECK(inner_product(f, g) == doctest::Approx(oracle).epsilon(1e-10));
    CHECK(f.scaled(2.0)(0.4) == doctest::Approx(2 * f(0.4)));
}

TEST_CASE("boehm_refine example") {
    auto coarse = share(Partition::from_knots(2, {0, 0, 1, 1}));
    auto fine = share(Partition::from_knots(2, {0, 0, 0.5, 1, 1}));
    const RefinementMap R = boehm_refine(coarse, fine, 2);
    REQUIRE(R.rows.size() == 2);
    auto weight = [&](int i, int j) {
        for (const auto& term : R.rows[static_cast<std::size_t>(i)])
            if (term.index == j) return term.weight;
        return 0.0;
    };
    CHECK(weight(0, 0) == doctest::Approx(1.0));
    CHECK(weight(0, 1) == doctest::Approx(0.5));
    CHECK(weight(0, 2) == 0.0);
    CHECK(weight(1, 0) == 0.0);
    CHECK(weight(1, 1) == doctest::Approx(0.5));
    CHECK(weight(1, 2) == doctest::Approx(1.0));
    CHECK_ERROR_CODE(boehm_refine(coarse, fine, 1), ErrorCode::PartitionMismatch);
    CHECK_ERROR_CODE(boehm_refine(fine, coarse, 2), ErrorCode::PartitionMismatch);
}

TEST_CASE("property: refinement reproduces coarse splines pointwise") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> g;
    for (int k = 1; k <= 5; ++k) {
        for (int rep = 0; rep < 10; ++rep) {
            auto t = random_knots(rng, k, 6);
            auto coarse = share(Partition::from_knots(k, t));
            // insert a knot, possibly a repeat of an existing one
            double x = rep % 3 == 0 ? t[static_cast<std::size_t>(k + 1)] : u(rng);
            if (std::count(t.begin(), t.end(), x) >= k) x = 0.5 * (x + 1.0 / 3.0);
            auto ft = t;
            ft.insert(std::upper_bound(ft.begin(), ft.end(), x), x);
            const int i0 = static_cast<int>(std::upper_bound(ft.begin(), ft.end(), x) - ft.begin()) - 1;
            auto fine = share(Partition::from_knots(k, ft));
            const RefinementMap R = boehm_refine(coarse, fine, i0);
            std::vector<double> c(static_cast<std::size_t>(coarse->size()));
            for (auto& v : c) v = g(rng);
            const Spline fc(coarse, c);
            const Spline ff(fine, R.refine(c));
            for (int i = 0; i <= 50; ++i) {
                const double y = i / 50.0;
                CHECK(ff(y) == doctest::Approx(fc(y)).epsilon(1e-12).scale(1.0));
            }
            // each coarse function is a convex-type combination: weights in [0, 1]
            for (const auto& row : R.rows)
                for (const auto& term : row) {
                    CHECK(term.weight >= 0.0);
                    CHECK(term.weight <= 1.0 + 1e-15);
                }
        }
    }
}

TEST_CASE("lp_norm against direct quadrature") {
    auto p = share(Partition::from_knots(3, clamped(3, {0.2, 0.5, 0.5, 0.8})));
    const Spline f(p, {1, -2, 0.5, 3, -1, 2, 0.1});
    const std::vector<double> br{0, 0.2, 0.5, 0.8, 1};
    for (double q : {1.0, 1.5, 2.0, 3.0}) {
        const double oracle = std::pow(testing::simpson([&](double x) { return std::pow(std::abs(f(x)), q); }, br, 2000),
                                       1.0 / q);
        CHECK(lp_norm(f, q) == doctest::Approx(oracle).epsilon(1e-6));
    }
    double sup = 0.0;
    for (int i = 0; i <= 100000; ++i) sup = std::max(sup, std::abs(f(i / 100000.0)));
    CHECK(lp_norm(f, INFINITY) == doctest::Approx(sup).epsilon(1e-6));
    const double part = std::sqrt(testing::simpson([&](double x) { return f(x) * f(x); }, {0.1, 0.2, 0.5, 0.6}, 400));
    CHECK(lp_norm(f, 2.0, 0.1, 0.6) == doctest::Approx(part).epsilon(1e-10));
}

TEST_CASE("longest_subinterval") {
    const Partition p = Partition::from_knots(2, clamped(2, {0.1, 0.4, 0.5}));
    CHECK(longest_subinterval(p, 0) == std::pair<double, double>{0.0, 0.1});
    CHECK(longest_subinterval(p, 1) == std::pair<double, double>{0.1, 0.4});
    CHECK(longest_subinterval(p, 3) == std::pair<double, double>{0.5, 1.0});
    const Partition q = Partition::from_knots(1, {0, 0.25, 0.5, 1});
    CHECK(longest_subinterval(q, 1) == std::pair<double, double>{0.25, 0.5});
    const Partition tie = Partition::from_knots(2, {0, 0, 0.5, 1, 1});
    CHECK(longest_subinterval(tie, 1) == std::pair<double, double>{0.0, 0.5});
}

TEST_CASE("property: de Boor stability ratio stays bounded") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    for (int k = 1; k <= 4; ++k) {
        double lo = INFINITY;
        double hi = 0.0;
        for (int rep = 0; rep < 20; ++rep) {
            auto p = share(partition_at(random_admissible(100 + static_cast<std::uint64_t>(rep), k, 40,
                                                          KnotLaw::UniformIid),
                                        39));
            std::vector<double> c(static_cast<std::size_t>(p->size()));
            for (auto& v : c) v = g(rng);
            for (double q : {1.0, 1.5, 2.0, 3.0}) {
                const StabilityRatio s = deboor_stability_ratio(Spline(p, c), q);
                lo = std::min(lo, s.norm_ratio);
                hi = std::max(hi, s.norm_ratio);
                CHECK(s.coefficient_quotient > 0.0);
                CHECK(std::isfinite(s.coefficient_quotient));
            }
        }
        // the upper bound is trivial (partition of unity); the lower one depends on k only
        CHECK(hi <= 1.0 + 1e-12);
        CHECK(lo > 0.01);
        if (k == 1) CHECK(lo == doctest::Approx(1.0));
    }
}

}  // TEST_SUITE
