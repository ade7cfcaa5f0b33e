#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "analyses.hpp"
#include "config.hpp"
#include "output.hpp"
#include "scenario.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace dcesim;
namespace fs = std::filesystem;

namespace {

fs::path scratch(std::string const& name) {
    auto dir = fs::temp_directory_path() / ("dcesim_test_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(fs::path const& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// First line that is neither blank nor a '#' preamble line.
std::string header(fs::path const& p) {
    std::ifstream in(p);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#')
            return line;
    return {};
}

std::string error_of(std::string const& text) {
    try {
        make_scenario(Config::parse(text, "case.ini"));
    } catch (ConfigError const& e) {
        return e.what();
    }
    return {};
}

Scenario scenario(std::string const& text, fs::path const& out) {
    auto c = Config::parse(text, "case.ini");
    c.set("output_dir", out.string());
    return make_scenario(c);
}

} // namespace

TEST_CASE("config parsing: sections, comments, overrides, origins") {
    auto c = Config::parse("schema = 1\n# note\n[wall]\nL = 2.5   ; trailing\nN=3\n", "a.ini");
    CHECK(c.text("wall.L") == "2.5");
    CHECK(c.integer_or("wall.N", 0) == 3);
    CHECK(c.number_or("wall.dL", 0.25) == 0.25);
    CHECK(c.where("wall.N") == "a.ini:5");
    c.set("wall.N", "4");
    CHECK(c.integer_or("wall.N", 0) == 4);
    CHECK(c.where("wall.N") == "command line");
}

TEST_CASE("config errors name the file and line") {
    auto message = [](std::string const& text) {
        try {
            Config::parse(text, "bad.ini");
        } catch (ConfigError const& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message("[wall]\nL 1\n").find("bad.ini:2") != std::string::npos);
    CHECK(message("[wall\n").find("bad.ini:1") != std::string::npos);
    CHECK(message("a = 1\na = 2\n").find("bad.ini:2") != std::string::npos);
    auto c = Config::parse("[wall]\nL = abc\n", "bad.ini");
    CHECK_THROWS_AS(c.number_or("wall.L", 1), ConfigError);
    CHECK_THROWS_AS(Config::load("/nonexistent/dir/x.ini"), ConfigError);
}

TEST_CASE("scenario validation rejects unphysical and unknown inputs") {
    CHECK(error_of("schema = 2\n").find("schema") != std::string::npos);
    CHECK(error_of("schema = 1\n[wall]\nspeed = 3\n").find("wall.speed") != std::string::npos);
    CHECK(error_of("schema = 1\n[wall]\ndL = 1.5\n").find("case.ini:3") != std::string::npos);
    CHECK(error_of("schema = 1\n[wall]\nomega = 200\n").find("wall.") != std::string::npos);
    CHECK(error_of("schema = 1\n[wall]\ndL = 0.1\ndL_over_L = 0.1\n").find("either") != std::string::npos);
    CHECK(error_of("schema = 1\nanalysis = nonsense\n").find("analysis") != std::string::npos);
    CHECK(error_of("schema = 1\n[seed]\nwidth = -1\n").find("seed.width") != std::string::npos);
    CHECK(error_of("schema = 1\nanalysis = twowall-modes\n[cavity2]\nmode = breathing\ndelta = 0.3\n")
              .find("cavity2.delta") != std::string::npos);
    CHECK(error_of("schema = 1\n[quantum]\nnormalization = affine\n").find("quantum.normalization") !=
          std::string::npos);
    CHECK(error_of("schema = 1\n").empty());
}

TEST_CASE("scenario defaults follow the wall") {
    auto s = make_scenario(Config::parse("schema = 1\n[wall]\nL = 2\nN = 3\nt0 = 0.5\n"));
    CHECK(s.wall.omega == doctest::Approx(3 * 3.141592653589793 / 2));
    CHECK(s.seed.center == 0.5);
    CHECK(s.seed.width == doctest::Approx(0.1));
    CHECK(s.period() == doctest::Approx(2 * 3.141592653589793 * 3 / s.wall.omega));
}

TEST_CASE("format_number round-trips doubles") {
    for (double x : {0.1, 1.0 / 3, -2.5e-300, 12345678.901234567})
        CHECK(std::stod(format_number(x)) == x);
}

TEST_CASE("every analysis writes its CSV header and metadata") {
    struct Case {
        std::string analysis, extra, file, header;
    };
    Case const cases[] = {
        {"billiard-table", "[numeric]\npoints = 11\n", "billiard_table.csv", "tau,f,f_inv,log_doppler"},
        {"trace", "[numeric]\nn = 5\ntau = 0.3\n", "trace.csv", "k,T_k,T_star_k,log_D_k"},
        {"resonance", "", "trajectories.csv", "start,return_point,period,sign,exponent,series,residual"},
        {"resonance", "[numeric]\nscan = true\nscan_points = 9\nn_probe = 30\n", "scan.csv",
         "detuning_ratio,unstable,return_points,max_exponent,predicted_unstable"},
        {"classical-energy", "[seed]\nwidth = 0.25\n[numeric]\nperiods = 3\n", "energy.csv",
         "k,t,energy,error,pullbacks,log_energy"},
        {"quantum-energy", "[numeric]\nperiods = 2\n", "quantum_energy.csv",
         "k,t,energy,error,pullbacks,static_energy"},
        {"density-map", "[seed]\nwidth = 0.25\n[numeric]\nnx = 9\nnt = 4\nt_max = 3\n", "density_map.csv", "t,x,T00"},
        {"twowall-modes", "[cavity2]\nN = 2\n[numeric]\nperiods = 2\n", "twowall_exponents.csv",
         "side,t1,start,exact,small_amplitude,traced,sign"},
    };
    for (auto const& c : cases) {
        CAPTURE(c.analysis);
        auto out = scratch(c.analysis + "_" + c.file);
        auto s = scenario("schema = 1\nanalysis = " + c.analysis + "\n" + c.extra, out);
        std::ostringstream log;
        REQUIRE(run_scenario(s, log) == Success);
        CHECK(header(out / c.file) == c.header);
        auto meta = nlohmann::json::parse(slurp(out / "metadata.json"));
        CHECK(meta["analysis"] == c.analysis);
        CHECK(meta["status"] == "complete");
        CHECK(meta["schema"] == 1);
        fs::remove_all(out);
    }
}

TEST_CASE("static quantum scenario: Casimir energy column and Moore table") {
    auto out = scratch("static_quantum");
    auto s = scenario("schema = 1\nanalysis = quantum-energy\n[wall]\nkind = static\nL = 2\n"
                      "[numeric]\nperiods = 3\npoints = 5\n", out);
    std::ostringstream log;
    REQUIRE(run_scenario(s, log) == Success);
    CHECK(header(out / "moore.csv") == "tau,R,R_dot,S_R,rho");
    CHECK(slurp(out / "moore.csv").find("# units: ") != std::string::npos);
    std::ifstream in(out / "quantum_energy.csv");
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 'k')
            continue;
        std::istringstream row(line);
        std::string field;
        for (int i = 0; i < 3; ++i)
            std::getline(row, field, ',');
        CHECK(std::stod(field) == doctest::Approx(-3.141592653589793 / 48).epsilon(1e-12));
        ++rows;
    }
    CHECK(rows == 4);
    fs::remove_all(out);
}

TEST_CASE("runs are deterministic") {
    std::string const text = "schema = 1\nanalysis = classical-energy\n[seed]\nwidth = 0.25\n[numeric]\nperiods = 4\n";
    auto a = scratch("det_a"), b = scratch("det_b");
    std::ostringstream log;
    REQUIRE(run_scenario(scenario(text, a), log) == Success);
    REQUIRE(run_scenario(scenario(text, b), log) == Success);
    CHECK(slurp(a / "energy.csv") == slurp(b / "energy.csv"));
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("classical-energy summary reports the fitted slope against log D1") {
    auto out = scratch("slope");
    auto s = scenario("schema = 1\nanalysis = classical-energy\n[seed]\nwidth = 0.25\n[numeric]\nperiods = 40\n", out);
    auto report = run_analysis(s);
    REQUIRE_FALSE(report.partial);
    double const slope = report.summary["fitted_slope"];
    double const log_d1 = report.summary["log_D1"];
    CHECK(slope > 0);
    CHECK(slope == doctest::Approx(log_d1).epsilon(0.05));
    fs::remove_all(out);
}

TEST_CASE("unwritable output directory maps to the I/O exit code") {
    auto blocker = scratch("blocker");
    std::ofstream(blocker.string()) << "file, not a directory";
    auto s = scenario("schema = 1\nanalysis = billiard-table\n[numeric]\npoints = 3\n", blocker / "sub");
    std::ostringstream log;
    CHECK(run_scenario(s, log) == IoFailure);
    CHECK_FALSE(log.str().empty());
    fs::remove(blocker);
}
