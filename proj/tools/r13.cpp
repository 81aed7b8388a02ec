// Command-line front end: coeffs, layers, steady, run, validate.
#include "r13/boundary.hpp"
#include "r13/errors.hpp"
#include "r13/fem1d.hpp"
#include "r13/io.hpp"
#include "r13/steady1d.hpp"
#include "r13/validate.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

using namespace r13;

namespace {

constexpr int kExitNumerical = 1, kExitUsage = 2;

int exitCode(const Error& e) {
    switch (e.kind()) {
    case ErrorKind::Config:
    case ErrorKind::Domain:
    case ErrorKind::Data:
    case ErrorKind::Io: return kExitUsage;
    default: return kExitNumerical;
    }
}

std::string num(double v) {
    if (std::isnan(v)) return "-";
    v += 0.0; // no "-0"
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

int cmdCoeffs(const std::string& etaArg, const std::string& matrices, double chi, const std::string& csv) {
    if (etaArg.empty() == matrices.empty()) fail(ErrorKind::Config, "coeffs: give exactly one of --eta and --matrices");
    ModelCoefficients mc;
    BCCoefficients bc;
    bool haveBc = true;
    std::string source;
    if (!etaArg.empty()) {
        std::tie(mc, bc) = loadBuiltin(GasModel::ipl(parseEta(etaArg)), chi);
        source = "table";
    } else {
        const auto [k, basis] = derive(readCollisionFile(resolveDataPath(matrices)));
        mc = k;
        source = "derived";
        if (mc.maxwellLike(1e-10)) bc = extractMaxwellBC(basis, chi);
        else haveBc = false;
    }
    std::vector<std::pair<std::string, double>> rows;
    for (int i = 0; i < 11; ++i) rows.push_back({"k" + std::to_string(i), mc.k[i]});
    rows.push_back({"l1", mc.l1});
    rows.push_back({"l2", mc.l2});
    // the full set of boundary coefficient ids
    const int ids[] = {11, 12, 13, 14, 15, 21, 22, 23, 24, 25, 26, 27, 28, 31, 32, 33, 34, 35, 41, 42, 43, 44,
                       45, 46, 47, 48, 51, 52, 53, 54, 55, 56, 57, 58, 61, 62, 63, 64, 65, 66, 67, 68, 69, 71, 81};
    for (int id : ids) rows.push_back({"m" + std::to_string(id), haveBc && bc.has(id) ? bc.at(id) : NAN});
    std::ostringstream csvText;
    csvText << "name,value,source\n";
    for (const auto& [name, v] : rows) {
        std::cout << name << " = " << num(v) << "  " << (std::isnan(v) ? "absent" : source) << "\n";
        csvText << name << "," << (std::isnan(v) ? "-" : formatNumber(v)) << "," << (std::isnan(v) ? "absent" : source)
                << "\n";
    }
    if (!csv.empty()) writeText(csv, csvText.str());
    return 0;
}

int cmdLayers(const std::string& etaArg, double kn) {
    const double eta = parseEta(etaArg);
    const LayerSpectrum s = reduceToOde(loadBuiltin(GasModel::ipl(eta)).first, kn);
    std::cout << csvString({"eta", "kn", "lambda1", "lambda2", "b11", "b12", "b21", "b22", "degenerate"},
                           {{eta}, {kn}, {s.lambda1}, {s.lambda2}, {s.b(0, 0)}, {s.b(0, 1)}, {s.b(1, 0)}, {s.b(1, 1)},
                            {s.degenerate ? 1.0 : 0.0}});
    return 0;
}

std::vector<double> vec(const VectorXd& v) { return {v.data(), v.data() + v.size()}; }

int cmdSteady(const std::string& configPath) {
    const ScenarioConfig cfg = loadScenario(configPath);
    const FemConfig& f = cfg.fem;
    if (f.vLeft != 0 || f.vRight != 0)
        fail(ErrorKind::Config, "the analytic steady solution covers the temperature problem only; use `run` for "
                                "walls.v_left/v_right");
    const double kn = f.resolvedKn();
    const auto [mc, bc] = loadRunCoefficients(f.eta, f.chi, f.bcMode);
    const SteadySolution s = solveFourierSteady(mc, bc, kn, f.thetaLeft, f.thetaRight, f.nodes());
    const std::string csv = (std::filesystem::path(cfg.outputDir) / "steady.csv").string();
    writeSteadyCsv(csv, s);
    if (cfg.svg)
        writeText((std::filesystem::path(cfg.outputDir) / "steady.svg").string(),
                  svgLineChart("steady profile, eta = " + etaString(f.eta) + ", Kn = " + num(kn), "x",
                               {{"theta", vec(s.x), vec(s.theta)}, {"q2", vec(s.x), vec(s.q)}}));
    const int n = static_cast<int>(s.x.size());
    std::cout << "lambda1 = " << num(s.lambda1) << ", lambda2 = " << num(s.lambda2) << "\n";
    std::cout << "temperature jump: left " << num(s.theta(0) - f.thetaLeft) << ", right "
              << num(s.theta(n - 1) - f.thetaRight) << "\n";
    std::cout << "wrote " << csv << "\n";
    return 0;
}

int cmdRun(const std::string& configPath) {
    const ScenarioConfig cfg = loadScenario(configPath);
    const FemRun run = runScenario(cfg.fem);
    const std::filesystem::path dir(cfg.outputDir);
    writeSnapshotCsv((dir / "snapshots.csv").string(), run.snapshotTimes, run.snapshots, run.coeffs, run.kn);
    writeSeriesCsv((dir / "series.csv").string(), run.series);
    if (cfg.svg) {
        for (std::size_t i = 0; i < run.snapshots.size(); ++i) {
            const MomentField1D& f = run.snapshots[i];
            const PhysicalFluxes1D p = recoverStressHeat(f, run.coeffs, run.kn);
            const VectorXd x = f.x;
            const std::vector<PlotSeries> series = {
                {"theta", vec(x), vec(f.u.col(MomentField1D::THETA))},
                {"v1", vec(x), vec(f.u.col(MomentField1D::V1))},
                {"q2", vec(x), vec(p.q2)},
                {"sigma12", vec(x), vec(p.sigma12)}};
            writeText((dir / ("snapshot_" + std::to_string(i) + ".svg")).string(),
                      svgLineChart("t = " + num(run.snapshotTimes[i]), "x", series));
        }
    }
    std::cout << "steps " << run.steps << ", final residual " << num(run.series.residual.back())
              << (run.converged ? " (steady)" : "") << "\n";
    std::cout << "wrote " << (dir / "snapshots.csv").string() << " and " << (dir / "series.csv").string() << "\n";
    return 0;
}

int cmdValidate(const std::vector<int>& ids) {
    bool ok = true;
    for (int id : ids.empty() ? std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9} : ids) {
        const CriterionResult r = criterion(id);
        std::cout << formatResult(r) << std::endl;
        ok = ok && r.pass;
    }
    return ok ? 0 : kExitNumerical;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Linear R13 moment-equation lab"};
    app.require_subcommand(1);

    std::string eta, matrices, coeffCsv, config;
    double chi = 1.0, kn = 0.2;
    std::vector<int> criteria;

    auto* coeffs = app.add_subcommand("coeffs", "print model and boundary coefficients");
    coeffs->add_option("--eta", eta, "IPL exponent (5, 7, 10, 17, inf)");
    coeffs->add_option("--matrices", matrices, "collision-matrix file (relative paths also searched in R13_DATA_DIR)");
    coeffs->add_option("--chi", chi, "accommodation coefficient");
    coeffs->add_option("--csv", coeffCsv, "also write a CSV table");

    auto* layers = app.add_subcommand("layers", "Knudsen-layer eigenvalues of the planar steady problem");
    layers->add_option("--eta", eta)->required();
    layers->add_option("--kn", kn, "Knudsen number");

    auto* steady = app.add_subcommand("steady", "analytic steady temperature profile");
    steady->add_option("config", config, "scenario configuration")->required();

    auto* run = app.add_subcommand("run", "time-dependent FEM run");
    run->add_option("config", config, "scenario configuration")->required();

    auto* validate = app.add_subcommand("validate", "acceptance suite");
    validate->add_option("--criteria", criteria, "subset of criterion ids")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }
    try {
        if (*coeffs) return cmdCoeffs(eta, matrices, chi, coeffCsv);
        if (*layers) return cmdLayers(eta, kn);
        if (*steady) return cmdSteady(config);
        if (*run) return cmdRun(config);
        if (*validate) return cmdValidate(criteria);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exitCode(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitUsage;
}
