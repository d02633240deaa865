#include "orthospline/charint.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "orthospline/error.hpp"
#include "orthospline/ortho.hpp"

namespace orthospline {

CharInterval characteristic_interval(const Partition& part, int i0, std::span<const double> alpha, int level) {
    const int k = part.order();
    if (i0 < k || i0 > part.size() - 1 || static_cast<int>(alpha.size()) != k + 1) {
        throw Error(ErrorCode::IndexOutOfRange, "i0 = " + std::to_string(i0) + " with " +
                                                    std::to_string(alpha.size()) + " alpha values");
    }
    CharInterval ci;
    ci.level = level;
    ci.i0 = i0;
    double min_support = INFINITY;
    for (int j = i0 - k; j <= i0; ++j) {
        min_support = std::min(min_support, part.support_length(j));
    }
    for (int j = i0 - k; j <= i0; ++j) {
        if (part.support_length(j) <= 2.0 * min_support) ci.lambda0.push_back(j);
    }
    const auto abs_alpha = [&](int j) { return std::abs(alpha[static_cast<std::size_t>(j - (i0 - k))]); };
    double amax = 0.0;
    for (int j : ci.lambda0) amax = std::max(amax, abs_alpha(j));
    for (int j : ci.lambda0) {
        if (abs_alpha(j) >= amax * (1.0 - 1e-12)) ci.lambda1.push_back(j);
    }
    ci.j0 = ci.lambda1.front();
    ci.J0 = Interval{part[ci.j0], part[ci.j0 + k]};
    const auto [lo, hi] = longest_subinterval(part, ci.j0);
    ci.J = Interval{lo, hi};
    return ci;
}

DistanceCounter::DistanceCounter(PartitionPtr part, Interval J) : part_(std::move(part)), j_(J) {}

int DistanceCounter::count_closed(double a, double b) const {
    const auto t = part_->knots();
    return static_cast<int>(std::upper_bound(t.begin(), t.end(), b) - std::lower_bound(t.begin(), t.end(), a));
}

int DistanceCounter::count_open_closed(double a, double b) const {
    const auto t = part_->knots();
    return static_cast<int>(std::upper_bound(t.begin(), t.end(), b) - std::upper_bound(t.begin(), t.end(), a));
}

int DistanceCounter::count_closed_open(double a, double b) const {
    const auto t = part_->knots();
    return static_cast<int>(std::lower_bound(t.begin(), t.end(), b) - std::lower_bound(t.begin(), t.end(), a));
}

int DistanceCounter::d_point(double x) const {
    if (!(x >= part_->lo() && x <= part_->hi())) {
        throw Error(ErrorCode::DomainError, "d_point outside partition");
    }
    if (j_.contains(x)) return 0;
    return x < j_.lo ? count_open_closed(x, j_.lo) : count_closed_open(j_.hi, x);
}

int DistanceCounter::d_interval(const Interval& V) const {
    if (!(V.lo <= V.hi && V.lo >= part_->lo() && V.hi <= part_->hi())) {
        throw Error(ErrorCode::DomainError, "d_interval outside partition");
    }
    if (V.hi >= j_.lo && V.lo <= j_.hi) return 0;
    return V.hi < j_.lo ? count_closed(V.hi, j_.lo) : count_closed(j_.hi, V.lo);
}

namespace {

int longest_nondecreasing(std::span<const double> xs, bool negate) {
    std::vector<double> tails;
    for (double x : xs) {
        const double v = negate ? -x : x;
        auto it = std::upper_bound(tails.begin(), tails.end(), v);
        if (it == tails.end()) {
            tails.push_back(v);
        } else {
            *it = v;
        }
    }
    return static_cast<int>(tails.size());
}

}  // namespace

int monotone_subsequence(std::span<const double> xs) {
    return std::max(longest_nondecreasing(xs, false), longest_nondecreasing(xs, true));
}

namespace {

void check_beta(double beta) {
    if (!(beta >= 0.0 && beta <= 0.5)) {
        throw Error(ErrorCode::DomainError, "beta must lie in [0, 1/2]");
    }
}

bool qualifies(const Interval& J, double x, double y, double beta) {
    return J.within(Interval{x, y}) && J.length() >= (1.0 - beta) * (y - x);
}

}  // namespace

int char_multiplicity_census(const OrthoSystem& system, double x, double y, double beta) {
    check_beta(beta);
    const auto pts = system.sequence().points();
    const auto is_point = [&](double v) { return std::find(pts.begin(), pts.end(), v) != pts.end(); };
    if (!(x < y) || !is_point(x) || !is_point(y)) {
        throw Error(ErrorCode::NotAKnot, "census window must be two sequence points x < y");
    }
    int count = 0;
    for (int n = 2; n <= system.max_level(); ++n) {
        if (qualifies(system.characteristic(n).J, x, y, beta)) ++count;
    }
    return count;
}

CensusResult max_census(std::span<const Interval> intervals, std::span<const double> endpoints, double beta) {
    check_beta(beta);
    std::map<std::pair<int, int>, int> counts;
    const auto index_of = [&](double v) {
        return static_cast<int>(std::lower_bound(endpoints.begin(), endpoints.end(), v) - endpoints.begin());
    };
    const int count = static_cast<int>(endpoints.size());
    for (const Interval& J : intervals) {
        const int ia = index_of(J.lo);
        const int ib = index_of(J.hi);
        for (int ix = ia; ix >= 0; --ix) {
            const double x = endpoints[static_cast<std::size_t>(ix)];
            if ((1.0 - beta) * (J.hi - x) > J.length()) break;
            for (int iy = ib; iy < count; ++iy) {
                const double y = endpoints[static_cast<std::size_t>(iy)];
                if ((1.0 - beta) * (y - x) > J.length()) break;
                if (x < y && qualifies(J, x, y, beta)) ++counts[{ix, iy}];
            }
        }
    }
    CensusResult result;
    result.beta = beta;
    for (const auto& [window, c] : counts) {
        if (c > result.max_count) {
            result.max_count = c;
            result.argmax_window = Interval{endpoints[static_cast<std::size_t>(window.first)],
                                            endpoints[static_cast<std::size_t>(window.second)]};
        }
    }
    return result;
}

CensusResult max_census(const OrthoSystem& system, double beta) {
    std::vector<Interval> intervals;
    for (int n = 2; n <= system.max_level(); ++n) {
        intervals.push_back(system.characteristic(n).J);
    }
    const auto pts = system.sequence().points();
    std::vector<double> endpoints(pts.begin(), pts.end());
    std::sort(endpoints.begin(), endpoints.end());
    endpoints.erase(std::unique(endpoints.begin(), endpoints.end()), endpoints.end());
    CensusResult result = max_census(intervals, endpoints, beta);
    result.k = system.order();
    result.N = system.max_level();
    return result;
}

}  // namespace orthospline
