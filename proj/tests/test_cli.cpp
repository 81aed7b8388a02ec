#include "r13/errors.hpp"
#include "r13/io.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace r13;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string tempDir(const std::string& name) {
    const auto p = std::filesystem::temp_directory_path() / ("r13_test_" + name);
    std::filesystem::remove_all(p);
    return p.string();
}

ErrorKind kindOf(const std::string& text) {
    try {
        parseScenario(text);
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("configuration was accepted");
    return ErrorKind::Io;
}

} // namespace

TEST_CASE("scenario parsing with sections and comments") {
    const std::string text = "# Fourier flow\n"
                             "[model]\n"
                             "eta = inf   # hard spheres\n"
                             "knbar = 0.1\n"
                             "bc_mode = modified\n"
                             "[walls]\n"
                             "theta_right = 0.2\n"
                             "v_left = -0.1\n"
                             "[mesh]\n"
                             "h = 0.01\n"
                             "[time]\n"
                             "dt = 0.001\n"
                             "t_end = 0.5\n"
                             "[output]\n"
                             "dir = somewhere\n"
                             "snapshots = 0.1, 0.25\n"
                             "svg = false\n";
    const ScenarioConfig c = parseScenario(text);
    CHECK(std::isinf(c.fem.eta));
    CHECK(c.fem.knbar.value() == 0.1);
    CHECK_FALSE(c.fem.kn.has_value());
    CHECK(c.fem.thetaRight == 0.2);
    CHECK(c.fem.vLeft == -0.1);
    CHECK(c.fem.h == 0.01);
    CHECK(c.fem.tEnd == 0.5);
    CHECK(c.outputDir == "somewhere");
    CHECK_FALSE(c.svg);
    CHECK(c.fem.snapshots == std::vector<double>{0.1, 0.25});
    CHECK(c.fem.resolvedKn() == doctest::Approx(0.1 * std::sqrt(M_PI / 2) * 15.0 / 24.0));

    // flat dotted keys are equivalent to sections
    const ScenarioConfig d = parseScenario("model.eta = 10\nmodel.kn = 0.2\n");
    CHECK(d.fem.eta == 10);
    CHECK(d.fem.kn.value() == 0.2);
    CHECK(d.fem.h == 1e-3);
}

TEST_CASE("scenario validation errors") {
    CHECK(kindOf("[model]\neta = 10\nkn = 0.2\nspeed = 3\n") == ErrorKind::Config);
    CHECK(kindOf("[model]\neta = 10\n") == ErrorKind::Config);
    CHECK(kindOf("[model]\neta = 10\nkn = 0.2\nknbar = 0.1\n") == ErrorKind::Config);
    CHECK(kindOf("[model]\neta = 10\nkn = 0.2\nkn = 0.3\n") == ErrorKind::Config);
    CHECK(kindOf("[model]\neta = 10\nkn = abc\n") == ErrorKind::Config);
    CHECK(kindOf("[model]\neta = 10\nkn = 0.2\n[mesh]\nh = -1\n") == ErrorKind::Config);
    CHECK(kindOf("[model\neta = 10\n") == ErrorKind::Config);
    CHECK(kindOf("[model]\neta = 10\nkn = 0.2\nbc_mode = robin\n") == ErrorKind::Config);

    try {
        parseScenario("[walls]\nthta_left = 1\n");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("walls.thta_left") != std::string::npos);
    }
    CHECK_THROWS_AS(loadScenario("/nonexistent/config.ini"), Error);
}

TEST_CASE("shipped configurations parse") {
    for (const char* name : {"fourier.ini", "couette.ini"}) {
        const auto path = std::filesystem::path(dataDir()).parent_path() / "configs" / name;
        CAPTURE(path);
        const ScenarioConfig c = loadScenario(path.string());
        CHECK(c.fem.h == 1e-3);
        CHECK(c.fem.dt == 2.5e-4);
    }
}

TEST_CASE("numbers are written with full precision") {
    CHECK(formatNumber(0.1) == "0.10000000000000001");
    CHECK(std::stod(formatNumber(M_PI)) == M_PI);
    CHECK(std::stod(formatNumber(-1.0 / 3.0)) == -1.0 / 3.0);
    const std::string csv = csvString({"a", "b"}, {{1.0, 2.0}, {0.5, -0.25}});
    CHECK(csv == "a,b\n1,0.5\n2,-0.25\n");
    CHECK_THROWS_AS(csvString({"a", "b"}, {{1.0}, {1.0, 2.0}}), Error);
}

TEST_CASE("steady output is deterministic and unaffected by plotting") {
    const auto [mc, bc] = loadBuiltin(GasModel::ipl(10));
    const auto s = solveFourierSteady(mc, bc, 0.2, 0.0, 0.2, 41);
    const std::string dir = tempDir("steady");
    writeSteadyCsv(dir + "/a.csv", s);
    const std::string svg =
        svgLineChart("steady", "x", {{"theta", {s.x.data(), s.x.data() + s.x.size()},
                                      {s.theta.data(), s.theta.data() + s.theta.size()}}});
    writeText(dir + "/a.svg", svg);
    writeSteadyCsv(dir + "/b.csv", solveFourierSteady(mc, bc, 0.2, 0.0, 0.2, 41));
    const std::string a = slurp(dir + "/a.csv"), b = slurp(dir + "/b.csv");
    CHECK(a == b);
    CHECK(a.rfind("x,rho,theta,v2,qbar2,sbar22,q2\n", 0) == 0);
    CHECK(std::count(a.begin(), a.end(), '\n') == 42);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(svg.find("theta") != std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("run output files") {
    FemConfig cfg;
    cfg.eta = 10;
    cfg.kn = 0.2;
    cfg.h = 0.05;
    cfg.dt = 0.01;
    cfg.tEnd = 0.05;
    cfg.thetaRight = 0.2;
    cfg.snapshots = {0.0};
    const FemRun run = runScenario(cfg);
    const std::string dir = tempDir("run");
    writeSnapshotCsv(dir + "/snap.csv", run.snapshotTimes, run.snapshots, run.coeffs, run.kn);
    writeSeriesCsv(dir + "/series.csv", run.series);
    const std::string snap = slurp(dir + "/snap.csv"), series = slurp(dir + "/series.csv");
    CHECK(snap.rfind("t,x,rho,theta,v1,v2,", 0) == 0);
    CHECK(snap.find("q1,q2,sigma12,sigma22\n") != std::string::npos);
    CHECK(std::count(snap.begin(), snap.end(), '\n') == 1 + 2 * 21);
    CHECK(series.rfind("t,entropy,residual,energy,wall_supply\n", 0) == 0);
    CHECK(std::count(series.begin(), series.end(), '\n') == 1 + 6);
    std::filesystem::remove_all(dir);
}

TEST_CASE("data paths") {
    CHECK(std::filesystem::exists(resolveDataPath("maxwell.txt")));
    CHECK(resolveDataPath("/abs/file.txt") == "/abs/file.txt");
}
