#include "r13/errors.hpp"
#include "r13/model.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

using namespace r13;

namespace {

const std::vector<double> kEtas = {5.0, 7.0, 10.0, 17.0, std::numeric_limits<double>::infinity()};

ModelCoefficients table(double eta) { return loadBuiltin(GasModel::ipl(eta)).first; }

double minEig(const MatrixXd& m) {
    return Eigen::SelfAdjointEigenSolver<MatrixXd>(0.5 * (m + m.transpose())).eigenvalues().minCoeff();
}
double maxEig(const MatrixXd& m) {
    return Eigen::SelfAdjointEigenSolver<MatrixXd>(0.5 * (m + m.transpose())).eigenvalues().maxCoeff();
}

MomentField1D grid(int n) {
    return MomentField1D::zeros(VectorXd::LinSpaced(n, -0.5, 0.5));
}

} // namespace

TEST_CASE("channel system: flux and weight structure") {
    const auto mc = table(5);
    const auto s = assembleChannelSystem(mc, 0.2);
    CHECK(s.dim == 9);
    CHECK(s.A1(channel::THETA, channel::Q2) == doctest::Approx(2.0 / 3.0));
    CHECK(s.W(channel::RHO) == 1.0);
    CHECK(s.W(channel::THETA) == 1.5);
    CHECK(s.W(channel::Q1) == doctest::Approx(0.4));
    CHECK(s.W(channel::S22) == doctest::Approx(0.75));
    CHECK_THROWS_AS(assembleChannelSystem(mc, 0.0), Error);
}

TEST_CASE("symmetric-hyperbolic and dissipative structure for every table row") {
    for (double eta : kEtas) {
        CAPTURE(eta);
        const auto s = assembleChannelSystem(table(eta), 0.3);
        const MatrixXd W = s.W.asDiagonal();
        const MatrixXd WA1 = W * s.A1, WL = W * s.Lrel, WD = W * s.D;
        CHECK((WA1 - WA1.transpose()).norm() < 1e-12);
        CHECK((WL - WL.transpose()).norm() < 1e-12);
        CHECK(maxEig(WL) < 1e-12);
        CHECK(minEig(WD) > -1e-12);
        // kernel of the relaxation is exactly the conservative block
        for (int c : s.conservative) CHECK(s.Lrel.col(c).norm() == 0.0);
        const MatrixXd nonCons = WL.bottomRightCorner(5, 5);
        CHECK(maxEig(nonCons) < -1e-3);
    }
}

TEST_CASE("diffusion scales linearly with Kn") {
    const auto mc = table(10);
    const auto a = assembleChannelSystem(mc, 0.1), b = assembleChannelSystem(mc, 0.2);
    CHECK((b.knD() - 2.0 * a.knD()).norm() < 1e-14);
    CHECK((a.relaxation() - 2.0 * b.relaxation()).norm() < 1e-12);
}

TEST_CASE("Maxwell diffusion has only the k-terms that survive") {
    const auto s = assembleChannelSystem(table(5), 1.0);
    // k1 = k2 = k3 = k4 = k10 = 0: no gradient coupling between the balance laws and the fluxes
    CHECK(s.D.topRows(4).norm() == 0.0);
    CHECK(s.D.leftCols(4).norm() == 0.0);
    const MatrixXd offDiag = s.D - MatrixXd(s.D.diagonal().asDiagonal());
    CHECK(offDiag.norm() < 1e-14);
}

TEST_CASE("planar temperature system") {
    const auto mc = table(10);
    const auto p = assemblePlanarTemperatureSystem(mc, 0.2);
    CHECK(p.dim == 5);
    CHECK(p.relaxation()(3, 3) == doctest::Approx(-(2.0 / 3.0) * 0.98385 / 0.2).epsilon(1e-5));
    CHECK(p.relaxation()(4, 4) == doctest::Approx(-0.98727 / 0.2).epsilon(1e-5));
    const auto steady = assemblePlanarTemperatureSystem(mc, 0.2, true);
    CHECK(steady.A0.norm() == 0.0);

    // Maxwell: the v-row has no gradient term in qbar or theta
    const auto m = assemblePlanarTemperatureSystem(table(5), 0.2);
    CHECK(m.D.row(2).norm() == 0.0);
}

TEST_CASE("parity invariance of the channel operators") {
    Eigen::VectorXd p = Eigen::VectorXd::Ones(9);
    p(channel::V2) = p(channel::Q2) = p(channel::S12) = -1;
    const MatrixXd P = p.asDiagonal();
    for (double eta : kEtas) {
        CAPTURE(eta);
        const auto s = assembleChannelSystem(table(eta), 0.2);
        CHECK((P * s.A1 * P + s.A1).norm() < 1e-14);
        CHECK((P * s.D * P - s.D).norm() < 1e-14);
        CHECK((P * s.Lrel * P - s.Lrel).norm() < 1e-14);
    }
}

TEST_CASE("subsystems decouple") {
    const auto s = assembleChannelSystem(table(10), 0.2);
    const auto& shear = channel::shearBlock();
    for (int i = 0; i < 9; ++i) {
        const bool iShear = std::find(shear.begin(), shear.end(), i) != shear.end();
        for (int j = 0; j < 9; ++j) {
            const bool jShear = std::find(shear.begin(), shear.end(), j) != shear.end();
            if (iShear == jShear) continue;
            CHECK(s.A1(i, j) == 0.0);
            CHECK(s.D(i, j) == 0.0);
            CHECK(s.Lrel(i, j) == 0.0);
        }
    }
}

TEST_CASE("semi-discrete energy rate is nonpositive for periodic fields") {
    // u = a cos(2 pi x) + b sin(2 pi x); trapezoid on a periodic grid is exact here
    std::mt19937 rng(3);
    std::normal_distribution<double> n01;
    const double k2pi = 2 * M_PI;
    for (double eta : kEtas) {
        const auto s = assembleChannelSystem(table(eta), 0.15);
        const MatrixXd W = s.W.asDiagonal();
        for (int trial = 0; trial < 20; ++trial) {
            VectorXd a(9), b(9);
            for (int i = 0; i < 9; ++i) a(i) = n01(rng), b(i) = n01(rng);
            const int n = 64;
            double rate = 0;
            for (int i = 0; i < n; ++i) {
                const double x = double(i) / n;
                const VectorXd u = a * std::cos(k2pi * x) + b * std::sin(k2pi * x);
                const VectorXd ux = k2pi * (-a * std::sin(k2pi * x) + b * std::cos(k2pi * x));
                const VectorXd uxx = -k2pi * k2pi * u;
                rate += u.dot(W * (-s.A1 * ux + s.knD() * uxx + s.relaxation() * u)) / n;
            }
            CAPTURE(eta);
            CHECK(rate <= 1e-8);
        }
    }
}

TEST_CASE("channel variable transform round trip") {
    Eigen::Matrix<double, 9, 1> f;
    f << 1, 2, 3, 4, 5, 6, 7, 8, 9;
    CHECK((channel::fromSystem(channel::toSystem(f)) - f).norm() < 1e-14);
}

TEST_CASE("gradient is exact for quadratics on nonuniform grids") {
    VectorXd x(7);
    x << -0.5, -0.4, -0.15, 0.0, 0.1, 0.32, 0.5;
    const VectorXd f = x.array().square() * 3.0 - x.array() + 2.0;
    const VectorXd g = gradient(x, f);
    for (int i = 0; i < 7; ++i) CHECK(g(i) == doctest::Approx(6 * x(i) - 1).epsilon(1e-12));
    CHECK_THROWS_AS(gradient(VectorXd::Zero(1), VectorXd::Zero(1)), Error);
}

TEST_CASE("stress and heat recovery") {
    auto f = grid(41);
    SUBCASE("zero field gives zero fluxes") {
        const auto p = recoverStressHeat(f, table(10), 0.1);
        CHECK(p.q2.norm() == 0.0);
        CHECK(p.sigma12.norm() == 0.0);
    }
    SUBCASE("Maxwell fluxes equal the regularized moments") {
        std::mt19937 rng(5);
        std::uniform_real_distribution<double> u(-1, 1);
        for (int i = 0; i < f.nodes(); ++i)
            for (int c = 0; c < 9; ++c) f.u(i, c) = u(rng);
        const auto p = recoverStressHeat(f, table(5), 0.3);
        CHECK((p.q1 - f.u.col(MomentField1D::Q1)).norm() == 0.0);
        CHECK((p.q2 - f.u.col(MomentField1D::Q2)).norm() == 0.0);
        CHECK((p.sigma12 - f.u.col(MomentField1D::S12)).norm() == 0.0);
        CHECK((p.sigma22 - f.u.col(MomentField1D::S22)).norm() == 0.0);
    }
    SUBCASE("linear temperature at eta = 10") {
        f.u.col(MomentField1D::THETA) = f.x;
        const auto p = recoverStressHeat(f, table(10), 0.1);
        for (int i = 0; i < f.nodes(); ++i) CHECK(p.q2(i) == doctest::Approx(-1.31154e-3).epsilon(1e-5));
    }
}

TEST_CASE("entropy functional") {
    auto f = grid(11);
    CHECK(entropy(f) == 0.0);
    f.u.col(MomentField1D::THETA).setOnes();
    CHECK(entropy(f) == doctest::Approx(0.75).epsilon(1e-14));

    // second-order quadrature: error ratio 4 under refinement
    auto fieldAt = [](int n) {
        auto g = grid(n);
        g.u.col(MomentField1D::RHO) = (3.0 * g.x.array()).sin();
        g.u.col(MomentField1D::S12) = (2.0 * g.x.array()).cos();
        return entropy(g);
    };
    const double e1 = fieldAt(21), e2 = fieldAt(41), e4 = fieldAt(81), ref = fieldAt(5121);
    const double r1 = std::abs(e1 - ref) / std::abs(e2 - ref), r2 = std::abs(e2 - ref) / std::abs(e4 - ref);
    CHECK(r1 == doctest::Approx(4.0).epsilon(0.05));
    CHECK(r2 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("field validation") {
    auto f = grid(5);
    CHECK_NOTHROW(f.validate());
    f.x(2) = f.x(1);
    CHECK_THROWS_AS(f.validate(), Error);
}

TEST_CASE("37-moment assembly for the Maxwell basis") {
    const auto basis = derive(maxwellCollisionSet(12)).second;
    const auto s = assemble37System(basis, 1.0);
    CHECK(s.A.rows() == System37::DIM);
    const MatrixXd WA = s.W.asDiagonal() * s.A;
    CHECK((WA - WA.transpose()).norm() < 1e-12);
    CHECK(superBurnettResidual(s) < 1e-10);

    // eliminating the second-order moments recovers the anchor coefficients
    const auto fit = fitTemplate(eliminateSecondOrder(s));
    const std::array<double, 11> expect = {1, 0, 0, 0, 0, 1, 1, 1, 1, 1, 0};
    for (int i = 0; i < 11; ++i) CHECK(std::abs(fit.k[i] - expect[i]) < 1e-10);
    CHECK(fit.l1 == doctest::Approx(1.0));
    CHECK(fit.l2 == doctest::Approx(1.0));
}
