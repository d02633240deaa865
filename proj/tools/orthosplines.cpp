// orthosplines: generate knot sequences, build orthonormal spline systems and
// run the verification and experiment suites. Reports are JSON; a text table
// goes to stdout.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "orthospline/analysis.hpp"
#include "orthospline/charint.hpp"
#include "orthospline/error.hpp"
#include "orthospline/gram.hpp"
#include "orthospline/io.hpp"
#include "orthospline/ortho.hpp"

namespace os = orthospline;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitAssert = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;
    int k = 2;
    int n = 64;
    std::vector<double> p;
    std::uint64_t seed = 1;
    int trials = 200;
    int grid = 0;  // 0: chosen from the partition size
    double beta = 0.25;
    std::string law = "uniform-iid";
    std::string points;
    std::string out;
    double tol_ortho = 1e-10;
    double tol_recon = 1e-8;
    double tol_sign = 1e-12;
};

os::Json config_json(const RunConfig& c) {
    return os::Json{{"command", c.command}, {"k", c.k},           {"n", c.n},
                    {"p", c.p},             {"seed", c.seed},     {"trials", c.trials},
                    {"grid", c.grid},       {"beta", c.beta},     {"law", c.law},
                    {"points", c.points},   {"out", c.out},       {"tol_ortho", c.tol_ortho},
                    {"tol_recon", c.tol_recon}, {"tol_sign", c.tol_sign}};
}

RunConfig config_from_json(const os::Json& j) {
    RunConfig c;
    c.command = j.at("command").get<std::string>();
    c.k = j.at("k").get<int>();
    c.n = j.at("n").get<int>();
    c.p = j.at("p").get<std::vector<double>>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.trials = j.at("trials").get<int>();
    c.grid = j.at("grid").get<int>();
    c.beta = j.at("beta").get<double>();
    c.law = j.at("law").get<std::string>();
    c.points = j.at("points").get<std::string>();
    c.out = j.at("out").get<std::string>();
    c.tol_ortho = j.at("tol_ortho").get<double>();
    c.tol_recon = j.at("tol_recon").get<double>();
    c.tol_sign = j.at("tol_sign").get<double>();
    return c;
}

struct Input {
    os::KnotSequence seq;
    std::string hash;
};

/// The knot sequence named by --points, or the generator's output.
Input load_input(RunConfig& c) {
    if (!c.points.empty()) {
        const std::string text = os::read_file(c.points);
        os::KnotSequence seq = os::knot_sequence_from_json(os::Json::parse(text));
        c.k = seq.order();
        return Input{std::move(seq), os::hex64(os::fnv1a(text))};
    }
    const os::KnotLaw law = os::parse_knot_law(c.law);
    os::KnotSequence seq = os::random_admissible(c.seed, c.k, c.n + 1, law);
    return Input{std::move(seq), os::hex64(os::fnv1a(os::generator_json(c.seed, law, c.n + 1).dump()))};
}

/// Resolves --n against the input; a file without --n uses its full length.
int level_for(RunConfig& c, const os::KnotSequence& seq) {
    if (c.n < 0) c.n = seq.max_level();
    if (c.n > seq.max_level()) {
        throw UsageError("--n " + std::to_string(c.n) + " exceeds the sequence (max level " +
                         std::to_string(seq.max_level()) + ")");
    }
    return c.n;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

/// Aligned text table, for reading only.
void print_table(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width;
    for (const auto& r : rows) {
        width.resize(std::max(width.size(), r.size()), 0);
        for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
    }
    for (const auto& r : rows) {
        std::string line;
        for (std::size_t i = 0; i < r.size(); ++i) {
            std::string cell = r[i];
            cell.resize(width[i], ' ');
            line += cell;
            if (i + 1 < r.size()) line += "  ";
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        std::cout << line << '\n';
    }
}

// Where reports go. Differs from the embedded "out" only when a --config rerun
// is redirected.
std::string g_target;

void write_output(const std::string& text) {
    if (!g_target.empty()) os::write_atomic(g_target, text);
}

void emit(const RunConfig& c, const std::string& input_hash, os::Json result) {
    os::Json report{{"config", config_json(c)}, {"input_hash", input_hash}, {"result", std::move(result)}};
    write_output(report.dump(2) + "\n");
}

int cmd_gen(RunConfig& c) {
    if (!c.points.empty()) throw UsageError("gen does not read --points");
    const os::KnotLaw law = os::parse_knot_law(c.law);
    const os::KnotSequence seq = os::random_admissible(c.seed, c.k, c.n + 1, law);
    const std::string text = os::to_json(seq).dump() + "\n";
    if (!g_target.empty()) {
        write_output(text);
    } else {
        std::cout << text;
    }
    std::cerr << os::generator_json(c.seed, law, c.n + 1).dump() << '\n';
    return kExitPass;
}

int cmd_build(RunConfig& c) {
    Input in = load_input(c);
    const int N = level_for(c, in.seq);
    const os::OrthoSystem sys = os::OrthoSystem::build(in.seq, N);
    write_output(os::export_system(sys).dump(2) + "\n");
    std::vector<std::vector<std::string>> rows{{"level", "i0", "J", "norm2"}};
    for (int n = sys.first_level(); n <= sys.max_level(); ++n) {
        const os::Interval J = sys.J(n);
        rows.push_back({std::to_string(n), n >= 2 ? std::to_string(sys.detail(n).i0) : "-",
                        "[" + format_double(J.lo) + ", " + format_double(J.hi) + "]",
                        n >= 2 ? format_double(sys.detail(n).norm2) : "1"});
    }
    print_table(rows);
    std::cout << "input_hash " << in.hash << '\n';
    return kExitPass;
}

struct Suite {
    std::string name;
    bool passed = true;
    os::Json measured;
};

Suite suite_orthonormality(const os::OrthoSystem& sys, double tol) {
    const os::SampleMatrix q = os::quadrature_samples(sys, sys.max_level(), sys.order() + 1);
    double err = 0.0;
    for (int m = q.first_level; m <= q.N; ++m) {
        for (int n = m; n <= q.N; ++n) {
            const auto a = q.row(m);
            const auto b = q.row(n);
            double s = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) s += q.weights[i] * a[i] * b[i];
            err = std::max(err, std::abs(s - (m == n ? 1.0 : 0.0)));
        }
    }
    return Suite{"orthonormality", err <= tol, {{"max_deviation", err}, {"tol", tol}}};
}

Suite suite_checkerboard(const os::GramSystem& gram, double tol_sign) {
    const auto v = os::checkerboard_check(gram, tol_sign);
    os::Json m{{"M", gram.size()}, {"violations", v ? 1 : 0}};
    if (v) m["first_violation"] = {v->row, v->col, v->value};
    return Suite{"checkerboard", !v.has_value(), std::move(m)};
}

Suite suite_diag_bound(const os::GramSystem& gram, double tol_sign) {
    const double r = os::diag_inverse_bound(gram);
    return Suite{"diag_inverse_bound", r <= 1.0 + tol_sign, {{"max_ratio", r}}};
}

Suite suite_boehm(const os::KnotSequence& seq, int N, double tol_sign) {
    double err = 0.0;
    std::vector<double> fine_vals;
    for (int n = 2; n <= N; ++n) {
        auto coarse = os::share(os::partition_at(seq, n - 1));
        auto fine = os::share(os::partition_at(seq, n));
        const os::RefinementMap map = os::boehm_refine(coarse, fine, os::insert_event(seq, n).i0);
        for (int s = 0; s < 1000; ++s) {
            const double x = (s + 0.5) / 1000.0;
            const os::BasisValues cb = os::eval_basis(*coarse, x);
            const os::BasisValues fb = os::eval_basis(*fine, x);
            fine_vals.assign(static_cast<std::size_t>(fine->size()), 0.0);
            for (std::size_t r = 0; r < fb.values.size(); ++r) fine_vals[static_cast<std::size_t>(fb.first) + r] = fb.values[r];
            for (int i = 0; i < coarse->size(); ++i) {
                double direct = 0.0;
                if (i >= cb.first && i < cb.first + static_cast<int>(cb.values.size())) {
                    direct = cb.values[static_cast<std::size_t>(i - cb.first)];
                }
                double viaref = 0.0;
                for (const os::RefinementTerm& t : map.rows[static_cast<std::size_t>(i)]) {
                    viaref += t.weight * fine_vals[static_cast<std::size_t>(t.index)];
                }
                err = std::max(err, std::abs(direct - viaref));
            }
        }
    }
    return Suite{"boehm_identity", err <= tol_sign, {{"max_error", err}}};
}

Suite suite_reconstruction(const os::OrthoSystem& sys, std::uint64_t seed, double tol) {
    auto part = os::share(os::partition_at(sys.sequence(), sys.max_level()));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::vector<double> coeffs(static_cast<std::size_t>(part->size()));
    for (double& v : coeffs) v = normal(rng);
    const os::Spline f(part, coeffs);
    const os::Expansion e = os::expand(f, sys, sys.max_level());
    const os::SampleMatrix q = os::quadrature_samples(sys, sys.max_level(), sys.order() + 1);
    const std::vector<double> rec = os::reconstruct(e, q);
    double err = 0.0;
    double parseval = 0.0;
    for (std::size_t i = 0; i < rec.size(); ++i) {
        const double d = f(q.points[i]) - rec[i];
        err += q.weights[i] * d * d;
    }
    for (double a : e.coeffs) parseval += a * a;
    const double norm2 = os::lp_norm(f, 2.0);
    const double gap = std::abs(parseval - norm2 * norm2);
    err = std::sqrt(err);
    return Suite{"reconstruction", err <= tol && gap <= tol * std::max(1.0, norm2 * norm2),
                 {{"l2_error", err}, {"parseval_gap", gap}}};
}

Suite suite_norm_equivalence(const os::OrthoSystem& sys) {
    const double ps[] = {1.0, 4.0 / 3.0, 2.0, 3.0, INFINITY};
    os::Json bands = os::Json::array();
    bool ok = true;
    for (double p : ps) {
        double lo = INFINITY;
        double hi = 0.0;
        for (int n = 2; n <= sys.max_level(); ++n) {
            const os::OrthoFunction& of = sys.detail(n);
            const os::Interval J = of.characteristic.J;
            const double expo = (std::isinf(p) ? 0.0 : 1.0 / p) - 0.5;
            const double r = os::lp_norm(of.phi, p, J.lo, J.hi) / std::pow(J.length(), expo);
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        if (sys.max_level() >= 2) ok = ok && std::isfinite(hi) && lo > 0.0;
        bands.push_back({{"p", std::isinf(p) ? os::Json("inf") : os::Json(p)}, {"min", lo}, {"max", hi}});
    }
    return Suite{"norm_equivalence", ok, {{"bands", bands}}};
}

double fitted_gamma(const os::KnotSequence& seq, int N) {
    if (seq.order() == 1) return 0.0;
    auto gram = os::gram_matrix(os::share(os::partition_at(seq, N)), true);
    if (gram.size() < 2 * seq.order()) return 0.0;
    try {
        return os::decay_profile(gram).gamma;
    } catch (const os::Error&) {
        return 0.0;
    }
}

Suite suite_tail_decay(const os::OrthoSystem& sys, double gamma) {
    os::Json audits = os::Json::array();
    bool ok = true;
    for (double p : {1.0, 2.0, std::numeric_limits<double>::infinity()}) {
        const os::TailAuditReport r = os::tail_decay_audit(sys, p, gamma);
        ok = ok && std::isfinite(r.ratio_max) && std::isfinite(r.sup_ratio_max);
        audits.push_back(os::to_json(r));
    }
    return Suite{"tail_decay", ok, {{"gamma", gamma}, {"audits", audits}}};
}

Suite suite_level_sets(const os::OrthoSystem& sys, int G, std::uint64_t seed) {
    const os::SampleMatrix grid = os::grid_samples(sys, sys.max_level(), G);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    os::Expansion e{&sys, sys.first_level(), sys.max_level(), std::vector<double>(static_cast<std::size_t>(sys.count()))};
    for (double& a : e.coeffs) a = normal(rng);
    os::GridFunction s = os::square_function(e, grid);
    std::vector<double> sorted = s.values;
    std::nth_element(sorted.begin(), sorted.begin() + G / 2, sorted.end());
    const double lambda = sorted[static_cast<std::size_t>(G / 2)];
    const os::LevelSets ls = os::level_sets(e, lambda, 0.5, grid);
    return Suite{"level_sets",
                 ls.contained,
                 {{"grid", G}, {"lambda", lambda}, {"r", 0.5}, {"measure_E", ls.measure_E},
                  {"measure_B", ls.measure_B}, {"weak_constant", ls.weak_constant}}};
}

int default_grid(const os::OrthoSystem& sys) {
    int G = 256;
    while (G < 4 * (sys.max_level() + 2 * sys.order())) G *= 2;
    return G;
}

int cmd_verify(RunConfig& c) {
    Input in = load_input(c);
    const int N = level_for(c, in.seq);
    if (N < 2) throw UsageError("verify needs --n >= 2");
    const os::OrthoSystem sys = os::OrthoSystem::build(in.seq, N);
    const os::GramSystem gram = os::gram_matrix(os::share(os::partition_at(in.seq, N)), true);
    if (c.grid == 0) c.grid = default_grid(sys);

    std::vector<Suite> suites;
    suites.push_back(suite_orthonormality(sys, c.tol_ortho));
    suites.push_back(suite_checkerboard(gram, c.tol_sign));
    suites.push_back(suite_diag_bound(gram, c.tol_sign));
    suites.push_back(suite_boehm(in.seq, N, c.tol_sign));
    suites.push_back(suite_reconstruction(sys, c.seed, c.tol_recon));
    suites.push_back(suite_norm_equivalence(sys));
    suites.push_back(suite_tail_decay(sys, fitted_gamma(in.seq, N)));
    suites.push_back(suite_level_sets(sys, c.grid, c.seed));

    os::Json list = os::Json::array();
    std::optional<std::string> first_failure;
    std::vector<std::vector<std::string>> rows{{"suite", "status"}};
    for (const Suite& s : suites) {
        list.push_back({{"name", s.name}, {"passed", s.passed}, {"measured", s.measured}});
        rows.push_back({s.name, s.passed ? "pass" : "FAIL"});
        if (!s.passed && !first_failure) first_failure = s.name;
    }
    emit(c, in.hash,
         {{"passed", !first_failure.has_value()},
          {"first_failure", first_failure ? os::Json(*first_failure) : os::Json(nullptr)},
          {"suites", list}});
    print_table(rows);
    if (first_failure) {
        std::cerr << "assertion failed: " << *first_failure << '\n';
        return kExitAssert;
    }
    return kExitPass;
}

int cmd_census(RunConfig& c) {
    Input in = load_input(c);
    const int N = level_for(c, in.seq);
    const os::OrthoSystem sys = os::OrthoSystem::build(in.seq, N);
    const os::CensusResult r = os::max_census(sys, c.beta);
    emit(c, in.hash, os::to_json(r));
    print_table({{"k", "N", "beta", "max_count", "argmax_window"},
                 {std::to_string(r.k), std::to_string(r.N), format_double(r.beta), std::to_string(r.max_count),
                  "[" + format_double(r.argmax_window.lo) + ", " + format_double(r.argmax_window.hi) + "]"}});
    return kExitPass;
}

int cmd_experiment(RunConfig& c) {
    if (c.p.empty()) c.p = {1.5};
    Input in = load_input(c);
    const int N = level_for(c, in.seq);
    const os::OrthoSystem sys = os::OrthoSystem::build(in.seq, N);
    const auto reports = os::uncond_experiment(sys, c.p, c.trials, c.seed);
    os::Json list = os::Json::array();
    std::vector<std::vector<std::string>> rows{{"p", "ratio_min", "ratio_q95", "ratio_max", "sq_min", "sq_max"}};
    for (const auto& r : reports) {
        list.push_back(os::to_json(r));
        rows.push_back({format_double(r.p), format_double(r.ratio_min), format_double(r.ratio_q95),
                        format_double(r.ratio_max), format_double(r.sq_ratio_min), format_double(r.sq_ratio_max)});
    }
    emit(c, in.hash, list);
    print_table(rows);
    return kExitPass;
}

int cmd_decay(RunConfig& c) {
    Input in = load_input(c);
    const int N = level_for(c, in.seq);
    os::Json list = os::Json::array();
    std::vector<std::vector<std::string>> rows{{"M", "gamma", "C", "residual"}};
    bool ok = true;
    std::vector<int> levels;
    for (int n = std::max(2, 2 * in.seq.order()); n < N; n *= 2) levels.push_back(n);
    levels.push_back(N);
    for (int n : levels) {
        auto gram = os::gram_matrix(os::share(os::partition_at(in.seq, n)), true);
        if (gram.size() < 2 * in.seq.order()) continue;
        const os::DecayProfile d = os::decay_profile(gram);
        ok = ok && d.gamma < 1.0 && d.residual <= 0.0;
        list.push_back(os::to_json(d));
        rows.push_back({std::to_string(d.M), format_double(d.gamma), format_double(d.C), format_double(d.residual)});
    }
    emit(c, in.hash, list);
    print_table(rows);
    if (!ok) {
        std::cerr << "assertion failed: decay_envelope\n";
        return kExitAssert;
    }
    return kExitPass;
}

int dispatch(RunConfig& c) {
    if (c.k < 1) throw UsageError("--k must be positive");
    if (c.command == "gen") return cmd_gen(c);
    if (c.command == "build") return cmd_build(c);
    if (c.command == "verify") return cmd_verify(c);
    if (c.command == "census") return cmd_census(c);
    if (c.command == "experiment") return cmd_experiment(c);
    if (c.command == "decay") return cmd_decay(c);
    throw UsageError("unknown command " + c.command);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Orthonormal spline systems: construction, verification and experiments"};
    app.require_subcommand(0, 1);
    RunConfig cfg;
    std::string config_path;
    app.add_option("--config", config_path, "Rerun the configuration embedded in a report");

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--k", cfg.k, "Spline order")->check(CLI::PositiveNumber);
        sub->add_option("--n", cfg.n, "Level N (number of sequence points beyond 0 and 1)");
        sub->add_option("--seed", cfg.seed, "Generator and experiment seed");
        sub->add_option("--law", cfg.law, "uniform-iid or dyadic-shuffled")
            ->check(CLI::IsMember({"uniform-iid", "dyadic-shuffled"}));
        sub->add_option("--points", cfg.points, "Knot-sequence file {\"k\", \"points\"}");
        sub->add_option("--out", cfg.out, "Output path");
    };
    CLI::App* gen = app.add_subcommand("gen", "Write a random admissible knot sequence");
    CLI::App* build = app.add_subcommand("build", "Export the system f_n");
    CLI::App* verify = app.add_subcommand("verify", "Run the property suites");
    CLI::App* census = app.add_subcommand("census", "Characteristic-interval census");
    CLI::App* experiment = app.add_subcommand("experiment", "Sign-flip unconditionality experiment");
    CLI::App* decay = app.add_subcommand("decay", "Gram-inverse decay profiles");
    for (CLI::App* sub : {gen, build, verify, census, experiment, decay}) add_common(sub);
    for (CLI::App* sub : {verify, census, experiment, decay}) {
        sub->add_option("--p", cfg.p, "Exponent (repeatable)");
        sub->add_option("--trials", cfg.trials, "Trial count")->check(CLI::PositiveNumber);
        sub->add_option("--grid", cfg.grid, "Grid size G");
        sub->add_option("--beta", cfg.beta, "Census slack in [0, 1/2]")->check(CLI::Range(0.0, 0.5));
        sub->add_option("--tol-ortho", cfg.tol_ortho, "Orthonormality tolerance");
        sub->add_option("--tol-recon", cfg.tol_recon, "Reconstruction tolerance");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (!config_path.empty()) {
            const os::Json report = os::Json::parse(os::read_file(config_path));
            const std::string redirect = cfg.out;
            cfg = config_from_json(report.at("config"));
            g_target = redirect.empty() ? cfg.out : redirect;
        } else {
            CLI::App* chosen = nullptr;
            for (CLI::App* sub : app.get_subcommands()) chosen = sub;
            if (chosen == nullptr) {
                std::cerr << app.help();
                return kExitUsage;
            }
            cfg.command = chosen->get_name();
            if (!cfg.points.empty() && chosen->count("--n") == 0) cfg.n = -1;
            g_target = cfg.out;
        }
        return dispatch(cfg);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const os::Error& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const os::Json::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}
