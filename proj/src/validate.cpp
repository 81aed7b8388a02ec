// Acceptance criteria 1-9.
#include "r13/validate.hpp"
#include "r13/boundary.hpp"
#include "r13/errors.hpp"
#include "r13/fem1d.hpp"
#include "r13/steady1d.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>

namespace r13 {

namespace {

const double kInf = std::numeric_limits<double>::infinity();
const std::vector<double> kEtas = {5.0, 7.0, 10.0, 17.0, kInf};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

CriterionResult lambdas() {
    CriterionResult r{1, "tabulated layer eigenvalues", true, "", 0};
    struct Row {
        double eta, l1, l2;
    };
    const Row rows[] = {{5.0, 0.91287, NAN}, {7.0, 0.92648, 12.696}, {10.0, 0.92989, 7.6747},
                        {17.0, 0.92904, 5.6909}, {kInf, 0.92248, 4.2387}};
    double worst = 0;
    for (const Row& row : rows) {
        const LayerSpectrum s = reduceToOde(loadBuiltin(GasModel::ipl(row.eta)).first, 0.2);
        double e = std::abs(s.lambda1 / row.l1 - 1);
        if (std::isnan(row.l2)) {
            if (!s.degenerate) e = kInf;
        } else {
            e = std::max(e, std::abs(s.lambda2 / row.l2 - 1));
        }
        worst = std::max(worst, e);
    }
    r.pass = worst <= tol::lambdaRel;
    r.detail = "max relative deviation " + fmt("%.2e", worst);
    return r;
}

CriterionResult maxwellAnchor() {
    CriterionResult r{2, "Maxwell pipeline anchor", true, "", 0};
    const auto [mc, basis] = derive(maxwellCollisionSet(20));
    const double expect[11] = {1, 0, 0, 0, 0, 1, 1, 1, 1, 1, 0};
    double worst = std::max(std::abs(mc.l1 - 1), std::abs(mc.l2 - 1));
    for (int i = 0; i < 11; ++i) worst = std::max(worst, std::abs(mc.k[i] - expect[i]));
    r.pass = worst <= tol::maxwellAnchor;
    r.detail = "max |k - k_Maxwell| " + fmt("%.2e", worst) + " at N = 20";
    return r;
}

CriterionResult maxwellBoundary() {
    CriterionResult r{3, "Maxwell boundary closed forms", true, "", 0};
    const auto basis = derive(maxwellCollisionSet(20)).second;
    const BCCoefficients bc = extractMaxwellBC(basis, 1.0);
    const double s = std::sqrt(2 * M_PI);
    const std::pair<int, double> expect[] = {{11, 2 / s},        {12, 1 / (2 * s)}, {13, 8 / (5 * s)},
                                             {14, 48 / (25 * s)}, {31, 1 / s},       {48, 24.0 / 5},
                                             {67, 2.0},           {71, 1 / (2 * s)}, {81, 1 / (2 * s)}};
    double worst = 0;
    for (auto [id, v] : expect) worst = std::max(worst, std::abs(bc.at(id) - v));
    r.pass = worst <= tol::maxwellBoundary;
    r.detail = "max |m - closed form| " + fmt("%.2e", worst);
    return r;
}

CriterionResult layerRemoval() {
    CriterionResult r{4, "layer removal in the steady Fourier solution", true, "", 0};
    std::ostringstream d;
    double worst = 0;
    for (double eta : {10.0, kInf}) {
        const auto [mc, bc] = loadBuiltin(GasModel::ipl(eta), 1.0);
        const SteadySolution s = solveFourierSteady(mc, bc, 0.2, 0.0, 0.2);
        const LayerFit f = fitLayerAmplitudes(s.x, s.theta, s.lambda1, s.lambda2, 0.2, FitBasis::WallAnchored);
        const double ratio = layerRatio(f);
        worst = std::max(worst, ratio);
        d << "eta=" << etaString(eta) << " ratio " << fmt("%.2e", ratio) << "; ";
    }
    r.pass = worst <= tol::layerRatio;
    r.detail = d.str();
    return r;
}

CriterionResult femAgreement() {
    CriterionResult r{5, "FEM long-time Fourier solution vs analytic", true, "", 0};
    std::ostringstream d;
    for (double eta : {5.0, 10.0}) {
        const auto t0 = std::chrono::steady_clock::now();
        FemConfig c = FemConfig::fourier();
        c.eta = eta;
        c.kn = 0.2;
        c.tEnd = 12;
        c.steadyTol = 1e-10;
        const FemRun run = runScenario(c);
        const auto [mc, bc] = loadBuiltin(GasModel::ipl(eta), c.chi);
        const SteadySolution s = solveFourierSteady(mc, bc, 0.2, c.thetaLeft, c.thetaRight);
        const double err = steadyL2Error(run.snapshots.back(), s);
        const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        r.pass = r.pass && err <= tol::femL2 && sec < tol::femSeconds;
        d << "eta=" << etaString(eta) << " L2 " << fmt("%.2e", err) << " at t=" << fmt("%g", run.steps * c.dt)
          << " (" << fmt("%.0f", sec) << " s); ";
    }
    r.detail = d.str();
    return r;
}

MomentField1D perturbedField(const VectorXd& x, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    MomentField1D f = MomentField1D::zeros(x);
    for (int c = 0; c < MomentField1D::NCOMP; ++c) {
        const double a = u(rng), b = u(rng);
        for (int i = 0; i < f.nodes(); ++i)
            f.u(i, c) = a * std::sin(M_PI * (x(i) + 0.5)) + b * std::cos(3 * M_PI * x(i)) + 0.1 * u(rng);
    }
    return f;
}

CriterionResult hTheorem() {
    CriterionResult r{6, "discrete H-theorem with homogeneous walls", true, "", 0};
    double worst = -kInf;
    for (double eta : kEtas) {
        FemConfig c;
        c.eta = eta;
        c.kn = 0.2;
        c.h = 1.0 / 200;
        c.tEnd = 0.5;
        const VectorXd x = VectorXd::LinSpaced(c.nodes(), -0.5, 0.5);
        const FemRun run = runScenario(c, perturbedField(x, 11));
        const auto& e = run.series.energy;
        for (std::size_t k = 1; k < e.size(); ++k) worst = std::max(worst, (e[k] - e[k - 1]) / e[0]);
    }
    r.pass = worst <= tol::energyStep;
    r.detail = "largest per-step relative energy change " + fmt("%.2e", worst) + " over eta in {5,7,10,17,inf}";
    return r;
}

double minSymEig(const MatrixXd& A) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (A + A.transpose()));
    return es.eigenvalues().minCoeff();
}

CriterionResult structure() {
    CriterionResult r{7, "structural invariants", true, "", 0};
    std::ostringstream d;
    auto check = [&](bool ok, const std::string& what) {
        if (!ok) {
            r.pass = false;
            d << what << " FAILED; ";
        }
    };
    for (double eta : kEtas) {
        const std::string tag = "eta=" + etaString(eta) + ": ";
        const auto [mc, bc] = loadBuiltin(GasModel::ipl(eta), 1.0);
        bool kOk = true;
        try {
            mc.checkInvariants();
        } catch (const Error&) {
            kOk = false;
        }
        check(kOk, tag + "coefficient inequalities");
        const SystemMatrices1D s = assembleChannelSystem(mc, 1.0);
        const MatrixXd W = s.W.asDiagonal();
        const MatrixXd WA1 = W * s.A1, WL = W * s.Lrel, WD = W * s.D;
        check((WA1 - WA1.transpose()).cwiseAbs().maxCoeff() <= tol::symmetry * WA1.cwiseAbs().maxCoeff(),
              tag + "W A1 symmetry");
        check((WL - WL.transpose()).cwiseAbs().maxCoeff() <= tol::symmetry, tag + "W Lrel symmetry");
        // kernel: conservative rows/columns vanish, the rest is negative definite
        std::vector<int> rest;
        for (int i = 0; i < s.dim; ++i) {
            const bool cons = std::find(s.conservative.begin(), s.conservative.end(), i) != s.conservative.end();
            if (cons) check(WL.row(i).cwiseAbs().maxCoeff() == 0 && WL.col(i).cwiseAbs().maxCoeff() == 0,
                            tag + "Lrel kernel");
            else rest.push_back(i);
        }
        MatrixXd Lr(rest.size(), rest.size());
        for (std::size_t i = 0; i < rest.size(); ++i)
            for (std::size_t j = 0; j < rest.size(); ++j) Lr(i, j) = WL(rest[i], rest[j]);
        check(-minSymEig(-Lr) < -1e-12, tag + "W Lrel negative definite off the kernel");
        check(minSymEig(WD) >= -1e-12, tag + "W D positive semidefinite");
        // tabled boundary form: homogeneous-wall operator has nonnegative symmetric part
        FemConfig c;
        c.eta = eta;
        c.kn = 0.2;
        c.h = 1.0 / 40;
        const FemOperators ops = buildChannelOperators(c);
        const MatrixXd K(ops.K);
        std::vector<int> free;
        for (int i = 0; i < ops.size(); ++i)
            if (!std::binary_search(ops.essential.begin(), ops.essential.end(), i)) free.push_back(i);
        MatrixXd Kf(free.size(), free.size());
        for (std::size_t i = 0; i < free.size(); ++i)
            for (std::size_t j = 0; j < free.size(); ++j) Kf(i, j) = K(free[i], free[j]);
        check(minSymEig(Kf) >= -1e-10 * Kf.cwiseAbs().maxCoeff(), tag + "boundary dissipativity");
    }
    // eliminated Z from collision data
    for (const auto& [name, set] : {std::make_pair(std::string("Maxwell"), maxwellCollisionSet(10)),
                                    std::make_pair(std::string("synthetic"), syntheticCollisionSet())}) {
        const auto basis = derive(set).second;
        const OnsagerOperator op = halfspaceGram(basis, 1.0);
        const double ev = minSymEig(op.symmetricSupport());
        check(ev > 0, name + " Z positive definite");
        d << name << " min eig(Z) " << fmt("%.3g", ev) << "; ";
    }
    if (r.pass) d << "all eta: W A1 symmetric, W Lrel NSD with conservative kernel, k inequalities, dissipative walls";
    r.detail = d.str();
    return r;
}

CriterionResult superBurnett() {
    CriterionResult r{8, "super-Burnett operator identity", true, "", 0};
    // for Maxwell molecules both sides vanish identically; the synthetic set makes the check non-trivial
    const double maxwell = superBurnettResidual(assemble37System(derive(maxwellCollisionSet(20)).second, 1.0));
    const System37 syn = assemble37System(derive(syntheticCollisionSet()).second, 1.0);
    const double synthetic = superBurnettResidual(syn);
    const double scale = syn.A.block(System37::N13, 0, System37::DIM - System37::N13, 5).cwiseAbs().maxCoeff();
    r.pass = maxwell <= tol::superBurnett && synthetic <= tol::superBurnett;
    r.detail = "Maxwell residual " + fmt("%.2e", maxwell) + "; synthetic residual " + fmt("%.2e", synthetic) +
               " with |A20| " + fmt("%.2e", scale);
    return r;
}

CriterionResult convergence() {
    CriterionResult r{9, "FEM steady convergence order", true, "", 0};
    std::ostringstream d;
    double worst = kInf;
    for (double eta : {5.0, 10.0}) {
        const auto [mc, bc] = loadBuiltin(GasModel::ipl(eta), 1.0);
        const SteadySolution s = solveFourierSteady(mc, bc, 0.2, 0.0, 0.2);
        std::vector<double> err;
        for (double n : {250.0, 500.0, 1000.0}) {
            FemConfig c = FemConfig::fourier();
            c.eta = eta;
            c.kn = 0.2;
            c.h = 1.0 / n;
            err.push_back(steadyL2Error(steadyChannel(c), s));
        }
        const double p1 = std::log2(err[0] / err[1]), p2 = std::log2(err[1] / err[2]);
        worst = std::min({worst, p1, p2});
        d << "eta=" << etaString(eta) << " orders " << fmt("%.2f", p1) << ", " << fmt("%.2f", p2) << "; ";
    }
    r.pass = worst >= tol::order;
    r.detail = d.str();
    return r;
}

} // namespace

CriterionResult criterion(int id) {
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
        switch (id) {
        case 1: r = lambdas(); break;
        case 2: r = maxwellAnchor(); break;
        case 3: r = maxwellBoundary(); break;
        case 4: r = layerRemoval(); break;
        case 5: r = femAgreement(); break;
        case 6: r = hTheorem(); break;
        case 7: r = structure(); break;
        case 8: r = superBurnett(); break;
        case 9: r = convergence(); break;
        default: fail(ErrorKind::Domain, "no acceptance criterion " + std::to_string(id));
        }
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Domain && (id < 1 || id > 9)) throw;
        r = CriterionResult{id, "criterion " + std::to_string(id), false, std::string("error: ") + e.what(), 0};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    // runtime limits stated with the criteria
    if (id == 1 && r.seconds >= 1.0) r.pass = false, r.detail += " (too slow)";
    if (id == 2 && r.seconds >= 5.0) r.pass = false, r.detail += " (too slow)";
    return r;
}

std::vector<CriterionResult> runAcceptance(const std::vector<int>& ids) {
    std::vector<int> list = ids;
    if (list.empty())
        for (int i = 1; i <= 9; ++i) list.push_back(i);
    std::vector<CriterionResult> out;
    for (int id : list) out.push_back(criterion(id));
    return out;
}

std::string formatResult(const CriterionResult& r) {
    return std::string(r.pass ? "PASS" : "FAIL") + " criterion " + std::to_string(r.id) + ": " + r.title + " - " +
           r.detail + " [" + fmt("%.2f", r.seconds) + " s]";
}

} // namespace r13
