#include "orthospline/knots.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "orthospline/error.hpp"

namespace orthospline {

namespace {

std::string format_value(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

KnotSequence validate_admissible(int order, std::vector<double> raw_points) {
    if (order < 1) {
        throw Error(ErrorCode::DomainError, "order must be positive, got " + std::to_string(order));
    }
    if (raw_points.size() < 2 || raw_points[0] != 0.0 || raw_points[1] != 1.0) {
        throw Error(ErrorCode::BadBoundary, "sequence must start with 0, 1");
    }
    std::map<double, int> multiplicity;
    for (std::size_t i = 2; i < raw_points.size(); ++i) {
        const double t = raw_points[i];
        // NaN fails both comparisons
        if (!(t > 0.0 && t < 1.0)) {
            throw Error(ErrorCode::OutOfRange, "index " + std::to_string(i) + " value " + format_value(t));
        }
        if (++multiplicity[t] > order) {
            throw Error(ErrorCode::MultiplicityExceeded, format_value(t));
        }
    }
    return KnotSequence(order, std::move(raw_points));
}

KnotSequence KnotSequence::prefix(int n) const {
    if (n < 1 || n > max_level()) {
        throw Error(ErrorCode::LevelOutOfRange, "prefix level " + std::to_string(n));
    }
    return KnotSequence(order_, std::vector<double>(points_.begin(), points_.begin() + n + 1));
}

Partition Partition::from_knots(int order, std::vector<double> knots, int level) {
    if (order < 1) {
        throw Error(ErrorCode::DomainError, "order must be positive");
    }
    const int k = order;
    const int count = static_cast<int>(knots.size());
    if (count < 2 * k) {
        throw Error(ErrorCode::PartitionMismatch, "knot vector shorter than 2k");
    }
    if (!std::is_sorted(knots.begin(), knots.end())) {
        throw Error(ErrorCode::PartitionMismatch, "knot vector not sorted");
    }
    for (int i = 1; i < k; ++i) {
        if (knots[static_cast<std::size_t>(i)] != knots.front() ||
            knots[static_cast<std::size_t>(count - 1 - i)] != knots.back()) {
            throw Error(ErrorCode::PartitionMismatch, "end knots must have multiplicity k");
        }
    }
    for (int i = 0; i + k < count; ++i) {
        if (!(knots[static_cast<std::size_t>(i)] < knots[static_cast<std::size_t>(i + k)])) {
            throw Error(ErrorCode::MultiplicityExceeded, format_value(knots[static_cast<std::size_t>(i)]));
        }
    }
    return Partition(order, std::move(knots), level);
}

int Partition::find_span(double x) const {
    const int k = order_;
    const int m = size();
    if (x >= hi()) {
        return m - 1;
    }
    auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
    int mu = static_cast<int>(it - knots_.begin()) - 1;
    return std::clamp(mu, k - 1, m - 1);
}

std::vector<double> Partition::breakpoints() const {
    std::vector<double> out(knots_.begin(), knots_.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Partition Partition::without_knot(int i) const {
    if (i < order_ || i >= size()) {
        throw Error(ErrorCode::IndexOutOfRange, "cannot remove knot " + std::to_string(i));
    }
    std::vector<double> knots = knots_;
    knots.erase(knots.begin() + i);
    return Partition(order_, std::move(knots), level_ > 0 ? level_ - 1 : -1);
}

Partition partition_at(const KnotSequence& seq, int n) {
    if (n < 1 || n > seq.max_level()) {
        throw Error(ErrorCode::LevelOutOfRange, "level " + std::to_string(n) + " not in [1, " +
                                                    std::to_string(seq.max_level()) + "]");
    }
    const int k = seq.order();
    std::vector<double> knots;
    knots.reserve(static_cast<std::size_t>(n + 2 * k - 1));
    knots.insert(knots.end(), static_cast<std::size_t>(k), 0.0);
    const auto pts = seq.points();
    std::vector<double> interior(pts.begin() + 2, pts.begin() + n + 1);
    std::sort(interior.begin(), interior.end());
    knots.insert(knots.end(), interior.begin(), interior.end());
    knots.insert(knots.end(), static_cast<std::size_t>(k), 1.0);
    return Partition::from_knots(k, std::move(knots), n);
}

InsertEvent insert_event(const KnotSequence& seq, int n) {
    if (n < 2 || n > seq.max_level()) {
        throw Error(ErrorCode::LevelOutOfRange, "insert level " + std::to_string(n));
    }
    const Partition part = partition_at(seq, n);
    const auto knots = part.knots();
    auto it = std::upper_bound(knots.begin(), knots.end(), seq[static_cast<std::size_t>(n)]);
    return InsertEvent{n, static_cast<int>(it - knots.begin()) - 1};
}

KnotLaw parse_knot_law(const std::string& name) {
    if (name == "uniform-iid") return KnotLaw::UniformIid;
    if (name == "dyadic-shuffled") return KnotLaw::DyadicShuffled;
    throw Error(ErrorCode::DomainError, "unknown knot law '" + name + "'");
}

std::string to_string(KnotLaw law) {
    return law == KnotLaw::UniformIid ? "uniform-iid" : "dyadic-shuffled";
}

KnotSequence random_admissible(std::uint64_t seed, int order, int n_points, KnotLaw law) {
    if (n_points < 2) {
        throw Error(ErrorCode::DomainError, "n_points must be at least 2");
    }
    std::mt19937_64 rng(seed);
    std::vector<double> pts{0.0, 1.0};
    pts.reserve(static_cast<std::size_t>(n_points));
    if (law == KnotLaw::UniformIid) {
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::map<double, int> multiplicity;
        while (static_cast<int>(pts.size()) < n_points) {
            const double t = unif(rng);
            if (t <= 0.0 || t >= 1.0 || multiplicity[t] >= order) {
                continue;
            }
            ++multiplicity[t];
            pts.push_back(t);
        }
    } else {
        for (int lvl = 1; static_cast<int>(pts.size()) < n_points; ++lvl) {
            const double denom = std::ldexp(1.0, lvl);
            std::vector<double> row;
            for (std::int64_t num = 1; num < (std::int64_t{1} << lvl); num += 2) {
                row.push_back(static_cast<double>(num) / denom);
            }
            std::shuffle(row.begin(), row.end(), rng);
            for (double t : row) {
                if (static_cast<int>(pts.size()) == n_points) break;
                pts.push_back(t);
            }
        }
    }
    return validate_admissible(order, std::move(pts));
}

}  // namespace orthospline
