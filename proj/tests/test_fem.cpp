#include "r13/errors.hpp"
#include "r13/fem1d.hpp"
#include "r13/steady1d.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace r13;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

FemConfig coarse(double eta, double h = 1.0 / 50) {
    FemConfig c;
    c.eta = eta;
    c.kn = 0.2;
    c.h = h;
    c.dt = 1e-3;
    c.tEnd = 0.05;
    return c;
}

// smooth random field with zero normal velocity at the walls
MomentField1D perturbed(const FemOperators& ops, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1, 1);
    MomentField1D f = MomentField1D::zeros(ops.x);
    for (int c = 0; c < 9; ++c) {
        const double a = u(rng), b = u(rng), k = 1 + (c % 3);
        for (int i = 0; i < f.nodes(); ++i) f.u(i, c) = a * std::sin(M_PI * k * f.x(i)) + b * std::cos(M_PI * k * f.x(i));
    }
    return f;
}

FemOperators scalarOps(double m, double k, double g) {
    FemOperators ops;
    ops.x = VectorXd::Zero(1);
    ops.nc = 1;
    ops.M.resize(1, 1);
    ops.M.insert(0, 0) = m;
    ops.K.resize(1, 1);
    if (k != 0) ops.K.insert(0, 0) = k;
    ops.g = VectorXd::Constant(1, g);
    return ops;
}

} // namespace

TEST_CASE("Crank-Nicolson on scalar relaxation") {
    const auto ops = scalarOps(1.0, 1.0, 0.0);
    const CrankNicolson cn(ops, 0.5);
    CHECK(cn.step(VectorXd::Constant(1, 2.0))(0) == doctest::Approx(1.2).epsilon(1e-15));
}

TEST_CASE("Crank-Nicolson with a zero operator") {
    const auto still = scalarOps(2.0, 0.0, 0.0);
    CHECK(CrankNicolson(still, 0.1).step(VectorXd::Constant(1, 3.0))(0) == 3.0);
    const auto driven = scalarOps(2.0, 0.0, 1.0);
    CHECK(CrankNicolson(driven, 0.1).step(VectorXd::Constant(1, 3.0))(0) == doctest::Approx(3.0 + 0.1 / 2.0));
}

TEST_CASE("banded LU agrees with a dense solve") {
    const int n = 30;
    std::vector<Eigen::Triplet<double>> t;
    for (int i = 0; i < n; ++i) {
        t.push_back({i, i, 4.0 + i % 3});
        if (i > 0) t.push_back({i, i - 1, -1.0});
        if (i + 2 < n) t.push_back({i, i + 2, 0.5});
    }
    Eigen::SparseMatrix<double> A(n, n);
    A.setFromTriplets(t.begin(), t.end());
    const VectorXd b = VectorXd::LinSpaced(n, -1, 2);
    const VectorXd x = BandedLU(A).solve(b);
    CHECK((MatrixXd(A) * x - b).norm() < 1e-12);
}

TEST_CASE("mass matrix rows integrate the weights") {
    const auto cfg = coarse(10);
    const auto ops = buildChannelOperators(cfg);
    const VectorXd rows = ops.M * VectorXd::Ones(ops.size());
    const double h = cfg.h;
    for (int i = 0; i < static_cast<int>(ops.x.size()); ++i) {
        const double measure = (i == 0 || i + 1 == ops.x.size()) ? h / 2 : h;
        for (int c = 0; c < ops.nc; ++c) CHECK(rows(ops.dof(i, c)) == doctest::Approx(measure * ops.sys.W(c)).epsilon(1e-12));
    }
    const MatrixXd M = MatrixXd(ops.M);
    CHECK((M - M.transpose()).norm() < 1e-14);
    CHECK(Eigen::SelfAdjointEigenSolver<MatrixXd>(M).eigenvalues().minCoeff() > 0);
}

TEST_CASE("assembled operator is monotone on the free dofs") {
    for (double eta : {5.0, 7.0, 10.0, 17.0, kInf}) {
        CAPTURE(eta);
        const auto ops = buildChannelOperators(coarse(eta, 1.0 / 20));
        MatrixXd K = MatrixXd(ops.K);
        for (int d : ops.essential) K.row(d).setZero(), K.col(d).setZero();
        const MatrixXd S = 0.5 * (K + K.transpose());
        const double lmin = Eigen::SelfAdjointEigenSolver<MatrixXd>(S).eigenvalues().minCoeff();
        CHECK(lmin > -1e-10);
    }
}

TEST_CASE("discrete H-theorem with homogeneous walls") {
    for (double eta : {5.0, 10.0, kInf}) {
        CAPTURE(eta);
        auto cfg = coarse(eta);
        cfg.tEnd = 0.2;
        const auto ops = buildChannelOperators(cfg);
        const auto run = runScenario(cfg, perturbed(ops, 9));
        const auto& e = run.series.energy;
        REQUIRE(e.size() == static_cast<std::size_t>(cfg.steps() + 1));
        for (std::size_t i = 1; i < e.size(); ++i) CHECK(e[i] <= e[i - 1] * (1 + 1e-12));
        CHECK(e.back() < e.front());
        for (double w : run.series.wallSupply) CHECK(w == 0.0);
    }
}

TEST_CASE("energy growth is bounded by the wall supply") {
    auto cfg = coarse(10);
    cfg.thetaRight = 0.2;
    cfg.vLeft = -0.1;
    cfg.tEnd = 0.2;
    const auto run = runScenario(cfg);
    const auto& s = run.series;
    for (std::size_t i = 1; i < s.energy.size(); ++i)
        CHECK(s.energy[i] - s.energy[i - 1] <= s.wallSupply[i] + 1e-14);
}

TEST_CASE("scenario bookkeeping") {
    auto cfg = coarse(10);
    cfg.thetaRight = 0.2;
    cfg.snapshots = {0.0, 0.02};
    const auto run = runScenario(cfg);
    REQUIRE(run.snapshotTimes.size() == 3);
    CHECK(run.snapshotTimes[0] == 0.0);
    CHECK(run.snapshotTimes[1] == doctest::Approx(0.02));
    CHECK(run.snapshotTimes[2] == doctest::Approx(cfg.tEnd));
    // initial condition: mean wall temperature, everything else zero
    const auto& f0 = run.snapshots[0];
    CHECK((f0.u.col(MomentField1D::THETA).array() - 0.1).abs().maxCoeff() == 0.0);
    CHECK(f0.u.col(MomentField1D::Q2).norm() == 0.0);
    const auto& s = run.series;
    CHECK(s.t.size() == s.entropy.size());
    CHECK(s.t.size() == s.residual.size());
    CHECK(s.t.size() == s.energy.size());
    for (std::size_t i = 1; i < s.t.size(); ++i) CHECK(s.t[i] > s.t[i - 1]);
    CHECK(run.steps == cfg.steps());
}

TEST_CASE("Couette flow leaves the temperature block untouched") {
    auto cfg = coarse(10);
    cfg.vLeft = -0.2;
    cfg.vRight = 0.2;
    cfg.tEnd = 0.1;
    const auto run = runScenario(cfg);
    const auto& f = run.snapshots.back();
    for (int c : {MomentField1D::RHO, MomentField1D::THETA, MomentField1D::V2, MomentField1D::Q2, MomentField1D::S11,
                  MomentField1D::S22})
        CHECK(f.u.col(c).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(f.u.col(MomentField1D::V1).cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("steady residual") {
    for (double eta : {5.0, 10.0, kInf}) {
        CAPTURE(eta);
        auto cfg = coarse(eta);
        cfg.thetaRight = 0.2;
        cfg.vLeft = 0.1;
        const auto ops = buildChannelOperators(cfg);
        const SteadyResidual res(ops);
        const VectorXd us = steadySolveFem(ops);
        CHECK(res(us) <= 1e-12);
        MomentField1D init = MomentField1D::zeros(ops.x);
        init.u.col(MomentField1D::THETA).setConstant(0.1);
        CHECK(res(fromField(ops, init)) > 1e-3);
    }
}

TEST_CASE("steady FEM limit matches the analytic solution") {
    for (double eta : {5.0, 10.0}) {
        CAPTURE(eta);
        auto cfg = coarse(eta, 1.0 / 200);
        cfg.thetaRight = 0.2;
        const auto [mc, bc] = loadRunCoefficients(eta, 1.0, BcMode::Modified);
        const auto exact = solveFourierSteady(mc, bc, 0.2, 0.0, 0.2);
        CHECK(steadyL2Error(steadyChannel(cfg), exact) <= 1e-4);
    }
}

TEST_CASE("time stepping approaches the steady limit") {
    auto cfg = coarse(10, 1.0 / 40);
    cfg.thetaRight = 0.2;
    cfg.dt = 5e-3;
    cfg.tEnd = 20;
    cfg.steadyTol = 1e-9;
    const auto run = runScenario(cfg);
    CHECK(run.converged);
    const auto steady = steadyChannel(cfg);
    const auto& f = run.snapshots.back();
    CHECK((f.u.col(MomentField1D::THETA) - steady.u.col(MomentField1D::THETA)).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("configuration checks") {
    CHECK_THROWS_AS(loadRunCoefficients(10, 1.0, BcMode::Onsager), Error);
    CHECK_NOTHROW(loadRunCoefficients(5, 1.0, BcMode::Onsager));
    CHECK(parseBcMode("modified") == BcMode::Modified);
    CHECK_THROWS_AS(parseBcMode("robin"), Error);

    FemConfig c;
    CHECK_THROWS_AS(c.resolvedKn(), Error); // neither kn nor knbar
    c.kn = 0.2;
    CHECK(c.resolvedKn() == 0.2);
    c.knbar = 0.1;
    CHECK_THROWS_AS(c.resolvedKn(), Error);
    c.knbar.reset();
    c.h = 0.3;
    CHECK_THROWS_AS(c.validate(), Error);
    c.h = 1e-3;
    c.dt = -1;
    CHECK_THROWS_AS(c.validate(), Error);

    const FemConfig f = FemConfig::fourier();
    CHECK(f.h == 1e-3);
    CHECK(f.dt == 2.5e-4);
    CHECK(f.thetaRight == 0.2);
    CHECK(FemConfig::couette().vRight == 0.2);
}
