#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "swpst/cli.hpp"

using namespace swpst;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "swpst");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> data_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#') lines.push_back(line);
    return lines;
}

std::vector<double> numbers(const std::string& line) {
    std::vector<double> v;
    for (const auto& cell : cli::detail::split(line, ',')) v.push_back(cell.empty() ? 0.0 : std::stod(cell));
    return v;
}

/// The "# " header of a CSV output, turned back into a config file.
std::string header_config(const std::string& text) {
    std::string cfg;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (line.starts_with("# ")) cfg += line.substr(2) + "\n";
    return cfg;
}

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("swpst_test_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::vector<double> signatures(const std::string& csv) {
    std::vector<double> s;
    for (const auto& line : data_lines(csv)) s.push_back(numbers(line).back());
    return s;
}

}  // namespace

TEST_CASE("help and version", "[cli]") {
    const auto help = run_cli({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("wigner") != std::string::npos);
    const auto ver = run_cli({"--version"});
    CHECK(ver.code == 0);
    CHECK(ver.out.find("1.0.0") != std::string::npos);
}

TEST_CASE("exit codes", "[cli]") {
    CHECK(run_cli({}).code == 2);
    CHECK(run_cli({"frobnicate"}).code == 2);
    CHECK(run_cli({"wigner", "--no-such-flag"}).code == 2);
    CHECK(run_cli({"wigner", "--state", "squeezed"}).code == 2);
    CHECK(run_cli({"wigner", "--state", "basis"}).code == 2);
    CHECK(run_cli({"wigner", "--state", "scs:1"}).code == 2);
    CHECK(run_cli({"wigner", "--n", "four"}).code == 2);
    CHECK(run_cli({"wigner", "--method", "magic"}).code == 2);
    CHECK(run_cli({"wigner", "--cells", "row:0", "--full"}).code == 2);
    CHECK(run_cli({"sparsity", "--eta", "0,1.5", "--seeds", "2"}).code == 2);
    CHECK(run_cli({"sparsity", "--eta", "0,abc"}).code == 2);
    CHECK(run_cli({"sparsity", "--thresholds", "-0.1"}).code == 2);
    CHECK(run_cli({"portrait", "--grid", "20"}).code == 2);
    CHECK(run_cli({"portrait", "--steps", "0"}).code == 2);
    CHECK(run_cli({"qkt", "--k", "1", "--k-preset", "chaotic"}).code == 2);
    CHECK(run_cli({"qkt", "--k-preset", "wild"}).code == 2);
    CHECK(run_cli({"qkt", "--point", "Q"}).code == 2);

    // Domain errors.
    CHECK(run_cli({"wigner", "--state", "bell", "--n", "8"}).code == 3);
    CHECK(run_cli({"wigner", "--state", "basis:9", "--n", "4"}).code == 3);
    CHECK(run_cli({"wigner", "--n", "1"}).code == 3);
    CHECK(run_cli({"wigner", "--cells", "0:0,4:0"}).code == 3);
    const auto e = run_cli({"wigner", "--state", "plusplus", "--n", "8"});
    CHECK(e.err.find("error") != std::string::npos);
    CHECK(e.out.empty());
}

TEST_CASE("wigner command", "[cli]") {
    SECTION("basis:0 has first row 1/8") {
        const auto r = run_cli({"wigner", "--state", "basis:0", "--n", "4", "--method", "direct"});
        REQUIRE(r.code == 0);
        const auto rows = data_lines(r.out);
        REQUIRE(rows.size() == 4);
        CHECK(rows[0] == "0.125,0.125,0.125,0.125");
        CHECK(rows[1] == "0,0,0,0");
    }
    SECTION("Bell state has a negative entry") {
        const auto r = run_cli({"wigner", "--state", "bell", "--n", "4"});
        REQUIRE(r.code == 0);
        double min = 0.0;
        for (const auto& row : data_lines(r.out))
            for (double v : numbers(row)) min = std::min(min, v);
        CHECK(min < -1e-6);
    }
    SECTION("exact circuit output equals direct output") {
        const auto direct = run_cli({"wigner", "--state", "plusplus", "--n", "4", "--method", "direct"});
        const auto circuit = run_cli({"wigner", "--state", "plusplus", "--n", "4", "--method", "circuit", "--shots", "0"});
        REQUIRE(direct.code == 0);
        REQUIRE(circuit.code == 0);
        CHECK(data_lines(direct.out) == data_lines(circuit.out));
    }
    SECTION("full grid and JSON") {
        const auto r = run_cli({"wigner", "--state", "harmonic:1", "--n", "4", "--full"});
        REQUIRE(r.code == 0);
        CHECK(data_lines(r.out).size() == 4 + 8);
        const auto j = run_cli({"wigner", "--state", "harmonic:1", "--n", "4", "--full", "--format", "json"});
        REQUIRE(j.code == 0);
        const auto doc = io::json::parse(j.out);
        CHECK(doc.at("header").at("command") == "wigner");
        CHECK(doc.at("dim") == 4);
        CHECK(doc.at("quadrant").size() == 4);
        CHECK(doc.at("full").size() == 8);
        CHECK(doc.at("cells").size() == 16);
    }
    SECTION("selected cells leave the rest empty") {
        const auto r = run_cli({"wigner", "--state", "basis:0", "--cells", "0:1,3:3"});
        REQUIRE(r.code == 0);
        CHECK(data_lines(r.out) == std::vector<std::string>{",0.125,,", ",,,", ",,,", ",,,0"});
    }
    SECTION("randomized harmonic depends on the seed") {
        const auto a = run_cli({"wigner", "--state", "randharm:0,0.5", "--n", "8", "--seed", "1"});
        const auto b = run_cli({"wigner", "--state", "randharm:0,0.5", "--n", "8", "--seed", "2"});
        CHECK(data_lines(a.out) != data_lines(b.out));
        CHECK(a.out == run_cli({"wigner", "--state", "randharm:0,0.5", "--n", "8", "--seed", "1"}).out);
    }
}

TEST_CASE("sparsity command", "[cli]") {
    const auto r = run_cli({"sparsity", "--n", "8", "--eta", "0", "--thresholds", "0.1,0.01", "--seeds", "3"});
    REQUIRE(r.code == 0);
    const auto rows = data_lines(r.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == "0,0.1,0,0,0.875,0,0,0");
    CHECK(rows[1] == "0,0.01,0,0,0.875,0,0,0");

    const auto j = run_cli({"sparsity", "--eta", "0.1", "--seeds", "4", "--format", "json"});
    REQUIRE(j.code == 0);
    const auto doc = io::json::parse(j.out);
    REQUIRE(doc.at("rows").size() == 2);
    CHECK(doc.at("rows")[0].at("w_sparsity").contains("std"));
}

TEST_CASE("qkt command", "[cli]") {
    SECTION("zero kicks gives one record") {
        const auto r = run_cli({"qkt", "--point", "C", "--kicks", "0"});
        REQUIRE(r.code == 0);
        CHECK(data_lines(r.out).size() == 1);
    }
    SECTION("R at k = 0.5 is static after the first kick") {
        const auto r = run_cli({"qkt", "--point", "R", "--k", "0.5", "--kicks", "8"});
        REQUIRE(r.code == 0);
        const auto s = signatures(r.out);
        REQUIRE(s.size() == 9);
        for (std::size_t t = 1; t < s.size(); ++t) CHECK(std::abs(s[t] - s[1]) < 1e-9);
    }
    SECTION("C fluctuates more than R at the chaotic preset") {
        const auto c = run_cli({"qkt", "--point", "C", "--k-preset", "chaotic"});
        const auto r = run_cli({"qkt", "--point", "R", "--k-preset", "chaotic"});
        REQUIRE(c.code == 0);
        REQUIRE(r.code == 0);
        CHECK(sample_variance(signatures(c.out)) > sample_variance(signatures(r.out)));
    }
    SECTION("JSON lines") {
        const auto r = run_cli({"qkt", "--kicks", "3", "--format", "json"});
        REQUIRE(r.code == 0);
        std::istringstream in(r.out);
        std::string line;
        std::getline(in, line);
        CHECK(io::json::parse(line).contains("header"));
        int records = 0;
        while (std::getline(in, line)) {
            const auto rec = io::json::parse(line);
            CHECK(rec.at("t") == records);
            ++records;
        }
        CHECK(records == 4);
    }
    SECTION("sampled circuit readout is seeded") {
        const std::vector<std::string> args{"qkt", "--point", "C", "--method", "circuit", "--shots", "500", "--seed", "3"};
        CHECK(run_cli(args).out == run_cli(args).out);
    }
}

TEST_CASE("portrait command", "[cli]") {
    SECTION("row count") {
        const auto r = run_cli({"portrait", "--k", "0.5", "--grid", "20x20", "--steps", "200"});
        REQUIRE(r.code == 0);
        CHECK(data_lines(r.out).size() == 20u * 20u * 200u);
    }
    SECTION("k = 0 trajectories have period four") {
        const auto r = run_cli({"portrait", "--k", "0", "--grid", "5x5", "--steps", "40"});
        REQUIRE(r.code == 0);
        std::map<int, std::vector<std::pair<double, double>>> pts;
        for (const auto& line : data_lines(r.out)) {
            const auto v = numbers(line);
            pts[static_cast<int>(v[0])].emplace_back(v[2], v[3]);
        }
        REQUIRE(pts.size() == 25);
        for (const auto& [id, traj] : pts) {
            std::vector<std::pair<double, double>> distinct;
            for (const auto& p : traj) {
                const bool seen = std::any_of(distinct.begin(), distinct.end(), [&](const auto& d) {
                    const double dphi = std::abs(d.second - p.second);
                    return std::abs(d.first - p.first) < 1e-9 && std::min(dphi, 2.0 * std::numbers::pi - dphi) < 1e-9;
                });
                if (!seen) distinct.push_back(p);
            }
            CHECK(distinct.size() <= 4);
        }
    }
    SECTION("chaotic seed occupancy") {
        const auto r = run_cli({"portrait", "--k-preset", "chaotic", "--seeds", "1.0,2.5", "--steps", "500"});
        REQUIRE(r.code == 0);
        std::vector<SphericalPoint> traj;
        for (const auto& line : data_lines(r.out)) {
            const auto v = numbers(line);
            traj.push_back({v[2], v[3]});
        }
        REQUIRE(traj.size() == 500);
        CHECK(histogram_occupancy(traj) > 0.15);
    }
}

TEST_CASE("header reproduces the run through --config", "[cli]") {
    const fs::path dir = scratch_dir("config");
    const std::vector<std::vector<std::string>> runs{
        {"qkt", "--point", "C", "--k-preset", "chaotic", "--kicks", "5"},
        {"qkt", "--method", "circuit", "--shots", "300", "--seed", "11", "--cells", "0:0,1:2"},
        {"wigner", "--state", "scs:0.3,1.2", "--method", "circuit", "--shots", "200", "--seed", "5", "--full"},
        {"sparsity", "--eta", "0.1,0.5", "--seeds", "7", "--seed", "42"},
        {"portrait", "--k", "2.5", "--seeds", "1,2;0.5,0.5", "--steps", "10"},
    };
    for (const auto& args : runs) {
        const auto first = run_cli(args);
        REQUIRE(first.code == 0);
        const fs::path cfg = dir / (args[0] + ".ini");
        std::ofstream(cfg) << header_config(first.out);
        const auto again = run_cli({"--config", cfg.string(), args[0]});
        REQUIRE(again.code == 0);
        CHECK(again.out == first.out);
    }

    SECTION("unknown keys are rejected") {
        const fs::path cfg = dir / "bad.ini";
        std::ofstream(cfg) << "[qkt]\nkicks=2\nwobble=1\n";
        CHECK(run_cli({"--config", cfg.string(), "qkt"}).code == 2);
    }
}

TEST_CASE("--out writes atomically, relative to the output directory variable", "[cli]") {
    const fs::path dir = scratch_dir("out");
    ::setenv(cli::output_dir_env, dir.string().c_str(), 1);
    const std::vector<std::string> args{"qkt", "--point", "C", "--kicks", "4"};
    auto with_out = args;
    with_out.insert(with_out.end(), {"--out", "nested/run.csv"});
    const auto r = run_cli(with_out);
    ::unsetenv(cli::output_dir_env);
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    const fs::path file = dir / "nested" / "run.csv";
    REQUIRE(fs::exists(file));
    CHECK_FALSE(fs::exists(dir / "nested" / "run.csv.tmp"));
    CHECK(slurp(file) == run_cli(args).out);

    // Absolute paths ignore the variable; a different path gives the same bytes.
    const fs::path other = dir / "other.csv";
    auto abs_args = args;
    abs_args.insert(abs_args.end(), {"--out", other.string()});
    REQUIRE(run_cli(abs_args).code == 0);
    CHECK(slurp(other) == slurp(file));
}
