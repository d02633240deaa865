#include <doctest.h>

#include <algorithm>
#include <random>

#include "helpers.hpp"
#include "orthospline/charint.hpp"
#include "orthospline/ortho.hpp"

using namespace orthospline;

namespace {

/// Longest monotone subsequence by exhaustive subset search.
int monotone_bruteforce(const std::vector<double>& xs) {
    const int n = static_cast<int>(xs.size());
    int best = 0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        std::vector<double> sub;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) sub.push_back(xs[static_cast<std::size_t>(i)]);
        const bool up = std::is_sorted(sub.begin(), sub.end());
        const bool down = std::is_sorted(sub.rbegin(), sub.rend());
        if (up || down) best = std::max(best, static_cast<int>(sub.size()));
    }
    return best;
}

int d_point_bruteforce(const Partition& p, Interval J, double x) {
    if (J.contains(x)) return 0;
    int c = 0;
    for (double t : p.knots()) {
        if (x < J.lo && t > x && t <= J.lo) ++c;
        if (x > J.hi && t >= J.hi && t < x) ++c;
    }
    return c;
}

}  // namespace

TEST_SUITE("charint") {

TEST_CASE("characteristic interval example for k = 2") {
    const Partition p = Partition::from_knots(2, {0, 0, 0.5, 1, 1});
    const auto alpha = alpha_coefficients(p, 2);
    const CharInterval ci = characteristic_interval(p, 2, alpha, 2);
    CHECK(ci.lambda0 == std::vector<int>{0, 1, 2});
    CHECK(ci.lambda1 == std::vector<int>{1});
    CHECK(ci.j0 == 1);
    CHECK(ci.J0 == Interval{0.0, 1.0});
    CHECK(ci.J == Interval{0.0, 0.5});
    CHECK(ci.level == 2);
    CHECK_ERROR_CODE(characteristic_interval(p, 2, std::vector<double>{1, 2}), ErrorCode::IndexOutOfRange);
}

TEST_CASE("ties in |alpha| go to the smallest index") {
    // k = 1: alpha = (1, -1) and both supports are equal
    const Partition p = Partition::from_knots(1, {0, 0.5, 1});
    const CharInterval ci = characteristic_interval(p, 1, alpha_coefficients(p, 1));
    CHECK(ci.lambda1 == std::vector<int>{0, 1});
    CHECK(ci.j0 == 0);
    CHECK(ci.J == Interval{0.0, 0.5});
}

TEST_CASE("property: selection invariants") {
    for (int k = 1; k <= 5; ++k) {
        for (std::uint64_t seed = 1; seed <= 6; ++seed) {
            const auto law = seed % 2 ? KnotLaw::UniformIid : KnotLaw::DyadicShuffled;
            const OrthoSystem sys = OrthoSystem::build(random_admissible(seed, k, 50, law), 49);
            for (int n = 2; n <= 49; ++n) {
                const CharInterval& ci = sys.characteristic(n);
                const Partition& p = sys.function(n).partition();
                CHECK(ci.level == n);
                double min_nu = INFINITY;
                for (int j = ci.i0 - k; j <= ci.i0; ++j) min_nu = std::min(min_nu, p.support_length(j));
                CHECK(!ci.lambda1.empty());
                CHECK(std::includes(ci.lambda0.begin(), ci.lambda0.end(), ci.lambda1.begin(), ci.lambda1.end()));
                CHECK(ci.j0 == ci.lambda1.front());
                CHECK(p.support_length(ci.j0) <= 2 * min_nu);
                const auto& a = sys.detail(n).alpha;
                for (int j : ci.lambda0) {
                    CHECK(std::abs(a[static_cast<std::size_t>(j - ci.i0 + k)]) <=
                          std::abs(a[static_cast<std::size_t>(ci.j0 - ci.i0 + k)]) * (1 + 1e-12));
                }
                CHECK(ci.J.within(ci.J0));
                CHECK(ci.J.length() > 0.0);
                CHECK(ci.J.length() * k >= ci.J0.length() * (1 - 1e-15));
                // J is a knot interval and no longer one exists inside J0
                for (int l = ci.j0; l < ci.j0 + k; ++l) CHECK(p[l + 1] - p[l] <= ci.J.length());
                CHECK(sys.J(n) == ci.J);
            }
        }
    }
}

TEST_CASE("distance examples (0-based)") {
    auto p = share(Partition::from_knots(1, {0, 0.25, 0.5, 1}));
    const DistanceCounter d(p, Interval{0.5, 1.0});
    CHECK(d.d_point(0.1) == 2);
    CHECK(d.d_point(0.3) == 1);
    CHECK(d.d_point(0.25) == 1);
    CHECK(d.d_point(0.7) == 0);
    CHECK(d.d_point(0.5) == 0);
    CHECK(d.d_interval(Interval{0.0, 0.2}) == 2);
    CHECK(d.d_interval(Interval{0.0, 0.25}) == 2);
    CHECK(d.d_interval(Interval{0.3, 0.6}) == 0);
    CHECK(d.d_interval(Interval{0.3, 0.4}) == 1);
    CHECK_ERROR_CODE(d.d_point(1.5), ErrorCode::DomainError);
    CHECK_ERROR_CODE(d.d_interval(Interval{0.4, 0.3}), ErrorCode::DomainError);
}

TEST_CASE("property: d_point matches a linear scan") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 1; k <= 4; ++k) {
        const OrthoSystem sys = OrthoSystem::build(random_admissible(3, k, 40, KnotLaw::DyadicShuffled), 39);
        for (int n = 2; n <= 39; ++n) {
            auto part = sys.function(n).partition_ptr();
            const DistanceCounter d(part, sys.J(n));
            for (int rep = 0; rep < 20; ++rep) {
                const int idx = std::min(rep + k - 1, static_cast<int>(part->knots().size()) - 1);
                const double x = rep < 5 ? (*part)[idx] : u(rng);
                CHECK(d.d_point(x) == d_point_bruteforce(*part, sys.J(n), x));
            }
        }
    }
}

TEST_CASE("monotone subsequence") {
    CHECK(monotone_subsequence(std::vector<double>{1, 3, 2, 4}) == 3);
    CHECK(monotone_subsequence(std::vector<double>{}) == 0);
    CHECK(monotone_subsequence(std::vector<double>{5, 4, 3, 2, 1}) == 5);
    CHECK(monotone_subsequence(std::vector<double>{2, 2, 2}) == 3);
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> v(0, 6);
    for (int rep = 0; rep < 300; ++rep) {
        std::vector<double> xs(static_cast<std::size_t>(1 + rep % 12));
        for (auto& x : xs) x = v(rng);
        CHECK(monotone_subsequence(xs) == monotone_bruteforce(xs));
    }
}

TEST_CASE("census by hand and by brute force") {
    const std::vector<Interval> J{{0.0, 0.5}, {0.0, 0.5}, {0.25, 0.5}, {0.5, 1.0}};
    const std::vector<double> ends{0.0, 0.25, 0.5, 0.75, 1.0};
    const CensusResult r0 = max_census(J, ends, 0.0);
    CHECK(r0.max_count == 2);
    CHECK(r0.argmax_window == Interval{0.0, 0.5});
    const CensusResult r1 = max_census(J, ends, 0.5);
    // [0, 0.5] now also admits [0.25, 0.5]
    CHECK(r1.max_count == 3);
    CHECK_ERROR_CODE(max_census(J, ends, 0.6), ErrorCode::DomainError);

    std::mt19937_64 rng(2);
    for (int k = 1; k <= 4; ++k) {
        const OrthoSystem sys = OrthoSystem::build(random_admissible(rng(), k, 30, KnotLaw::UniformIid), 29);
        auto pts = std::vector<double>(sys.sequence().points().begin(), sys.sequence().points().end());
        std::sort(pts.begin(), pts.end());
        for (double beta : {0.0, 0.25, 0.5}) {
            int best = 0;
            for (std::size_t a = 0; a < pts.size(); ++a)
                for (std::size_t b = a + 1; b < pts.size(); ++b)
                    best = std::max(best, char_multiplicity_census(sys, pts[a], pts[b], beta));
            const CensusResult r = max_census(sys, beta);
            CHECK(r.max_count == best);
            CHECK(r.k == k);
            CHECK(r.N == 29);
            CHECK(char_multiplicity_census(sys, r.argmax_window.lo, r.argmax_window.hi, beta) == best);
        }
        CHECK_ERROR_CODE(char_multiplicity_census(sys, 0.0, 0.123456789, 0.0), ErrorCode::NotAKnot);
        CHECK_ERROR_CODE(char_multiplicity_census(sys, 1.0, 0.0, 0.0), ErrorCode::NotAKnot);
        CHECK_ERROR_CODE(char_multiplicity_census(sys, 0.0, 1.0, -0.1), ErrorCode::DomainError);
    }
}

}  // TEST_SUITE
