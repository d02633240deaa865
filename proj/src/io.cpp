#include "orthospline/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "orthospline/error.hpp"

namespace orthospline {

Json to_json(const KnotSequence& seq) {
    const auto pts = seq.points();
    return Json{{"k", seq.order()}, {"points", std::vector<double>(pts.begin(), pts.end())}};
}

KnotSequence knot_sequence_from_json(const Json& j) {
    return validate_admissible(j.at("k").get<int>(), j.at("points").get<std::vector<double>>());
}

Json generator_json(std::uint64_t seed, KnotLaw law, int n_points) {
    return Json{{"seed", seed}, {"law", to_string(law)}, {"n_points", n_points}};
}

Json to_json(const Spline& f) {
    const auto t = f.partition().knots();
    const auto c = f.coeffs();
    return Json{{"k", f.order()},
                {"knots", std::vector<double>(t.begin(), t.end())},
                {"coeffs", std::vector<double>(c.begin(), c.end())}};
}

Spline spline_from_json(const Json& j) {
    auto part = share(Partition::from_knots(j.at("k").get<int>(), j.at("knots").get<std::vector<double>>()));
    return Spline(std::move(part), j.at("coeffs").get<std::vector<double>>());
}

Json to_json(const DecayProfile& d) {
    return Json{{"gamma", d.gamma}, {"C", d.C}, {"residual", d.residual}, {"M", d.M}, {"k", d.k}};
}

Json to_json(const CensusResult& c) {
    return Json{{"k", c.k},
                {"N", c.N},
                {"beta", c.beta},
                {"max_count", c.max_count},
                {"argmax_window", {c.argmax_window.lo, c.argmax_window.hi}}};
}

Json to_json(const ExperimentReport& r) {
    return Json{{"k", r.k},
                {"p", r.p},
                {"N", r.N},
                {"trials", r.trials},
                {"seed", r.seed},
                {"ratio_max", r.ratio_max},
                {"ratio_min", r.ratio_min},
                {"ratio_q95", r.ratio_q95},
                {"sq_ratio_max", r.sq_ratio_max},
                {"sq_ratio_min", r.sq_ratio_min},
                {"grid", r.grid}};
}

Json to_json(const TailAuditReport& r) {
    return Json{{"k", r.k},
                {"N", r.N},
                {"p", std::isinf(r.p) ? Json("inf") : Json(r.p)},
                {"gamma", r.gamma},
                {"ratio_max", r.ratio_max},
                {"sup_ratio_max", r.sup_ratio_max},
                {"argmax_level", r.argmax_level}};
}

Json export_system(const OrthoSystem& system) {
    Json out = Json::array();
    for (int n = system.first_level(); n <= system.max_level(); ++n) {
        const Spline& f = system.function(n);
        const auto c = f.coeffs();
        const Interval J = system.J(n);
        Json entry{{"level", n},
                   {"i0", n >= 2 ? Json(system.detail(n).i0) : Json(nullptr)},
                   {"knots_hash", hex64(hash_doubles(f.partition().knots()))},
                   {"coeffs", std::vector<double>(c.begin(), c.end())},
                   {"J", {J.lo, J.hi}},
                   {"norm2", n >= 2 ? system.detail(n).norm2 : 1.0}};
        out.push_back(std::move(entry));
    }
    return out;
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t hash_doubles(std::span<const double> xs) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (double x : xs) {
        char buf[sizeof(double)];
        std::memcpy(buf, &x, sizeof(double));
        h = fnv1a(std::string_view(buf, sizeof(double)), h);
    }
    return h;
}

std::string hex64(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_atomic(const std::filesystem::path& path, std::string_view contents) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write " + tmp.string());
        }
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) {
            throw std::runtime_error("short write to " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace orthospline
