#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "orthospline/io.hpp"

namespace fs = std::filesystem;
using orthospline::Json;
using orthospline::read_file;

namespace {

struct Sandbox {
    fs::path dir;

    explicit Sandbox(const std::string& name) : dir(fs::temp_directory_path() / ("orthosplines_cli_" + name)) {
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Sandbox() { fs::remove_all(dir); }

    [[nodiscard]] std::string path(const std::string& file) const { return (dir / file).string(); }

    /// Runs the CLI with stdout and stderr captured to files; returns the exit status.
    int run(const std::string& args) const {
        const std::string cmd = std::string("\"") + ORTHOSPLINES_CLI + "\" " + args + " > \"" + path("stdout.txt") +
                                "\" 2> \"" + path("stderr.txt") + "\"";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }
    [[nodiscard]] std::string out() const { return read_file(path("stdout.txt")); }
    [[nodiscard]] std::string err() const { return read_file(path("stderr.txt")); }
};

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("verify passes and names every suite") {
    Sandbox box("verify");
    REQUIRE(box.run("verify --k 2 --n 40 --seed 3 --out " + box.path("v.json")) == 0);
    const Json r = Json::parse(read_file(box.path("v.json")));
    CHECK(r.at("result").at("passed") == true);
    std::vector<std::string> names;
    for (const auto& s : r.at("result").at("suites")) names.push_back(s.at("name"));
    CHECK(names == std::vector<std::string>{"orthonormality", "checkerboard", "diag_inverse_bound", "boehm_identity",
                                            "reconstruction", "norm_equivalence", "tail_decay", "level_sets"});
    CHECK(r.at("config").at("command") == "verify");
    CHECK(r.at("input_hash").get<std::string>().size() == 16);
}

TEST_CASE("a failed assertion exits 1 and names the check") {
    Sandbox box("fail");
    CHECK(box.run("verify --k 2 --n 20 --tol-ortho 0 --out " + box.path("v.json")) == 1);
    CHECK(box.err().find("assertion failed: orthonormality") != std::string::npos);
    const Json r = Json::parse(read_file(box.path("v.json")));
    CHECK(r.at("result").at("first_failure") == "orthonormality");
}

TEST_CASE("usage errors exit 2") {
    Sandbox box("usage");
    CHECK(box.run("frobnicate") == 2);
    CHECK(box.run("verify --k 0") == 2);
    CHECK(box.run("census --beta 0.9") == 2);
    CHECK(box.run("verify --law gaussian") == 2);
    CHECK(box.run("build --points " + box.path("missing.json")) == 2);
    CHECK(box.run("") == 2);
}

TEST_CASE("experiment is byte-for-byte reproducible") {
    Sandbox box("experiment");
    REQUIRE(box.run("experiment --k 3 --n 30 --trials 20 --p 1.5 --p 3 --seed 5 --out " + box.path("a.json")) == 0);
    REQUIRE(box.run("experiment --k 3 --n 30 --trials 20 --p 1.5 --p 3 --seed 5 --out " + box.path("b.json")) == 0);
    const std::string a = read_file(box.path("a.json"));
    const std::string b = read_file(box.path("b.json"));
    // the embedded out path differs; everything else must match
    Json ja = Json::parse(a);
    Json jb = Json::parse(b);
    ja["config"].erase("out");
    jb["config"].erase("out");
    CHECK(ja.dump() == jb.dump());
    CHECK(ja.at("result").size() == 2);

    // a config rerun reproduces the report exactly
    REQUIRE(box.run("--config " + box.path("a.json") + " experiment --out " + box.path("c.json")) == 0);
    CHECK(read_file(box.path("c.json")) == a);
}

TEST_CASE("gen, build and points round trip") {
    Sandbox box("build");
    REQUIRE(box.run("gen --k 1 --n 2 --law dyadic-shuffled --seed 4 --out " + box.path("seq.json")) == 0);
    const Json seq = Json::parse(read_file(box.path("seq.json")));
    CHECK(seq.at("k") == 1);
    CHECK(seq.at("points").size() == 3);
    CHECK(Json::parse(box.err()).at("law") == "dyadic-shuffled");

    {
        std::ofstream f(box.path("half.json"));
        f << R"({"k": 1, "points": [0, 1, 0.5]})";
    }
    REQUIRE(box.run("build --points " + box.path("half.json") + " --out " + box.path("sys.json")) == 0);
    const Json sys = Json::parse(read_file(box.path("sys.json")));
    REQUIRE(sys.is_array());
    REQUIRE(sys.size() == 2);
    CHECK(sys[1].at("i0") == 1);
    CHECK(sys[1].at("coeffs")[0].get<double>() == doctest::Approx(1.0));
    CHECK(sys[1].at("coeffs")[1].get<double>() == doctest::Approx(-1.0));
    CHECK(sys[1].at("norm2").get<double>() == doctest::Approx(2.0));

    CHECK(box.run("build --points " + box.path("half.json") + " --n 5") == 2);
}

TEST_CASE("census and decay reports") {
    Sandbox box("census");
    REQUIRE(box.run("census --k 2 --n 64 --beta 0.25 --out " + box.path("c.json")) == 0);
    const Json c = Json::parse(read_file(box.path("c.json")));
    CHECK(c.at("result").at("max_count").get<int>() >= 1);
    REQUIRE(box.run("decay --k 2 --n 64 --out " + box.path("d.json")) == 0);
    const Json d = Json::parse(read_file(box.path("d.json")));
    CHECK(!d.at("result").empty());
}

}  // TEST_SUITE
