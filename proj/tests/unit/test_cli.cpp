#include "kinktrap/cli.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run_cli(const std::string& line)
{
    std::istringstream is(line);
    std::vector<std::string> args;
    for (std::string w; is >> w;) args.push_back(w);
    std::ostringstream out, err;
    const int code = kinktrap::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string header_value(const std::string& text, const std::string& key)
{
    const std::string tag = "# " + key + " = ";
    const auto pos = text.find(tag);
    if (pos == std::string::npos) return {};
    const auto end = text.find('\n', pos);
    return text.substr(pos + tag.size(), end - pos - tag.size());
}

std::string command_line(const std::string& text)
{
    const std::string tag = "# command: kinktrap ";
    const auto pos = text.find(tag);
    REQUIRE(pos != std::string::npos);
    return text.substr(pos + tag.size(), text.find('\n', pos) - pos - tag.size());
}

std::filesystem::path temp_file(const std::string& name, const std::string& body)
{
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << body;
    return path;
}

const std::string kFast = " --dt 1e-3 --t_max 150";

} // namespace

TEST_SUITE("cli") {

TEST_CASE("simulate writes versioned metadata and a trajectory")
{
    const Run r = run_cli("simulate --v0 0.3 --stride 5000" + kFast);
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("# kinktrap-version 0.1.0\n", 0) == 0);
    CHECK(header_value(r.out, "outcome") == "Transmitted");
    CHECK(r.out.find("t,x1,x2,v1,v2,R,r,E\n") != std::string::npos);
}

TEST_CASE("printed command regenerates the output byte for byte")
{
    for (const std::string line : {"simulate --v0 0.21 --stride 2000" + kFast,
                                   "sweep --v_min 0.2 --v_max 0.24 --dv 0.02 --workers 2" + kFast,
                                   "sensitivity --v0 0.2 --seed_delta 1e-8" + kFast}) {
        CAPTURE(line);
        const Run first = run_cli(line);
        REQUIRE(first.code == 0);
        const Run second = run_cli(command_line(first.out));
        REQUIRE(second.code == 0);
        CHECK(first.out == second.out);
    }
}

TEST_CASE("exit codes")
{
    const Run bad_v0 = run_cli("simulate --v0 -1");
    CHECK(bad_v0.code == 1);
    CHECK(bad_v0.err.find("v0 must be positive") != std::string::npos);

    CHECK(run_cli("simulate --v0 0.1 --bogus 3").code == 1);
    CHECK(run_cli("simulate --v0 abc").code == 1);
    CHECK(run_cli("").code == 1);
    CHECK(run_cli("sweep --dv 0").code == 1);
    CHECK(run_cli("sweep --v_min 0.1 --v_max 0.1").code == 1);
    CHECK(run_cli("zoom --refine 1").code == 1);
    CHECK(run_cli("simulate --config /nonexistent/kinktrap.cfg").code == 1);

    // A coincident start is a runtime failure, not a configuration one.
    const Run clash = run_cli("simulate --v0 0.1 --separation 1e-14" + kFast);
    CHECK(clash.code == 2);
    // Nothing binds the pair without the well.
    CHECK(run_cli("linear-compare --A 0 --horizon 50").code == 2);
}

TEST_CASE("free flight through an absent well")
{
    const Run r = run_cli("simulate --A 0 --v0 0.1 --stride 100000 --dt 1e-3");
    REQUIRE(r.code == 0);
    CHECK(header_value(r.out, "outcome") == "Transmitted");
    CHECK(std::stod(header_value(r.out, "v_final")) == doctest::Approx(0.1).epsilon(1e-10));
}

TEST_CASE("config file keys and flag precedence")
{
    const auto cfg = temp_file("kinktrap_test.cfg", "# reference run\nv0 = 0.25\n\nt_max = 60\ndt = 1e-3\nstride = 10000\n");
    const Run from_file = run_cli("simulate --config " + cfg.string());
    REQUIRE(from_file.code == 0);
    CHECK(command_line(from_file.out).find("--v0 0.25") != std::string::npos);

    const Run override = run_cli("simulate --config " + cfg.string() + " --v0 0.3");
    REQUIRE(override.code == 0);
    CHECK(command_line(override.out).find("--v0 0.3 ") != std::string::npos);

    const auto unknown = temp_file("kinktrap_unknown.cfg", "v0 = 0.2\nvelocity = 3\n");
    const Run rejected = run_cli("simulate --config " + unknown.string());
    CHECK(rejected.code == 1);
    CHECK(rejected.err.find("velocity") != std::string::npos);

    const auto dup = temp_file("kinktrap_dup.cfg", "v0 = 0.2\nv0 = 0.3\n");
    CHECK(run_cli("simulate --config " + dup.string()).code == 1);
    const auto junk = temp_file("kinktrap_junk.cfg", "v0 0.2\n");
    CHECK(run_cli("simulate --config " + junk.string()).code == 1);
}

TEST_CASE("output file")
{
    const auto path = std::filesystem::temp_directory_path() / "kinktrap_sim.csv";
    std::filesystem::remove(path);
    const Run r = run_cli("simulate --v0 0.3 --stride 10000 --out " + path.string() + kFast);
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream f(path);
    std::string first;
    std::getline(f, first);
    CHECK(first == "# kinktrap-version 0.1.0");
}

TEST_CASE("zoom centre and half-width select the window")
{
    const Run r = run_cli("zoom --center 0.2 --halfwidth 0.02 --dv 0.02 --refine 2 --depth 1" + kFast);
    REQUIRE(r.code == 0);
    const std::string cmd = command_line(r.out);
    // 0.2 - 0.02 is not exactly 0.18 in binary.
    CHECK(cmd.find("--v_min 0.18000000000000002 ") != std::string::npos);
    CHECK(cmd.find("--v_max 0.22 ") != std::string::npos);
    CHECK_FALSE(header_value(r.out, "refined_intervals_depth_1").empty());
    CHECK(r.out.find("v0,outcome,v_final,t_end,energy_drift,steps,depth\n") != std::string::npos);
    CHECK(run_cli("zoom --center 0.2" + kFast).code == 1);
}

TEST_CASE("sensitivity reports the fit setup")
{
    const Run r = run_cli("sensitivity --A 0 --v0 0.1 --t_max 200 --dt 1e-3");
    REQUIRE(r.code == 0);
    CHECK(header_value(r.out, "metric") == "euclidean(x1,x2,v1,v2), unit weights");
    CHECK(header_value(r.out, "degenerate_fit") == "true");
    CHECK_FALSE(header_value(r.out, "degenerate_reason").empty());
    CHECK(r.out.find("\nt,d\n") != std::string::npos);
}

TEST_CASE("linear-compare reports both readings of the equilibrium")
{
    const Run r = run_cli("linear-compare --k 2 --horizon 100 --dt 1e-3");
    REQUIRE(r.code == 0);
    std::istringstream is(r.out);
    int readings = 0;
    for (std::string line; std::getline(is, line);) {
        if (line.rfind("r0", 0) != 0) continue;
        ++readings;
        // Column 9 holds omega_eps^2 - omega_R^2, which must equal 2k.
        std::istringstream cols(line);
        std::string cell;
        for (int i = 0; i < 9; ++i) std::getline(cols, cell, ',');
        CHECK(std::stod(cell) == doctest::Approx(4.0).epsilon(1e-14));
    }
    CHECK(readings == 2);
}

TEST_CASE("version flag")
{
    const Run r = run_cli("--version");
    CHECK(r.code == 0);
    CHECK(r.out.find("0.1.0") != std::string::npos);
}

} // TEST_SUITE
