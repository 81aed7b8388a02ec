#include "r13/boundary.hpp"
#include "r13/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace r13;

namespace {

const double kInf = std::numeric_limits<double>::infinity();
const double kS2pi = std::sqrt(2 * M_PI);

const BasisCoefficients& maxwellBasis() {
    static const BasisCoefficients b = derive(maxwellCollisionSet(12)).second;
    return b;
}
const BasisCoefficients& syntheticBasis() {
    static const BasisCoefficients b = derive(syntheticCollisionSet(10)).second;
    return b;
}

} // namespace

TEST_CASE("wall elimination") {
    MatrixXd Z(2, 2);
    Z << 2, 1, 1, 3;
    const MatrixXd E = applyWallElimination(Z);
    CHECK(E(0, 0) == 0.0);
    CHECK(E(0, 1) == 0.0);
    CHECK(E(1, 0) == 0.0);
    CHECK(E(1, 1) == doctest::Approx(2.5));

    MatrixXd U(3, 3);
    U << 4, 0, 0, 0, 2, 1, 0, 1, 5;
    CHECK((applyWallElimination(U).bottomRightCorner(2, 2) - U.bottomRightCorner(2, 2)).norm() == 0.0);

    MatrixXd bad = Z;
    bad(0, 0) = 0;
    CHECK_THROWS_AS(applyWallElimination(bad), Error);
}

TEST_CASE("Schur complement of an SPD matrix stays positive definite") {
    for (int seed = 1; seed <= 10; ++seed) {
        std::srand(seed);
        const MatrixXd R = MatrixXd::Random(6, 6);
        const MatrixXd S = R * R.transpose() + 0.1 * MatrixXd::Identity(6, 6);
        const MatrixXd E = applyWallElimination(S).bottomRightCorner(5, 5);
        CHECK(Eigen::SelfAdjointEigenSolver<MatrixXd>(E).eigenvalues().minCoeff() > 0);
    }
}

TEST_CASE("Maxwell boundary coefficients from half-space integrals") {
    const BCCoefficients bc = extractMaxwellBC(maxwellBasis(), 1.0);
    CHECK(bc.at(11) == doctest::Approx(2.0 / kS2pi).epsilon(1e-10));
    CHECK(bc.at(12) == doctest::Approx(1.0 / (2 * kS2pi)).epsilon(1e-10));
    CHECK(bc.at(13) == doctest::Approx(8.0 / (5 * kS2pi)).epsilon(1e-10));
    CHECK(bc.at(14) == doctest::Approx(48.0 / (25 * kS2pi)).epsilon(1e-10));
    CHECK(std::abs(bc.get(15).value_or(0.0)) < 1e-12);
    CHECK(bc.at(71) == doctest::Approx(1.0 / (2 * kS2pi)).epsilon(1e-10));
    CHECK(bc.at(81) == doctest::Approx(1.0 / (2 * kS2pi)).epsilon(1e-10));

    // agrees with the tabled row
    const BCCoefficients table = loadBuiltin(GasModel::ipl(5)).second;
    for (const auto& [id, v] : table.m) {
        CAPTURE(id);
        REQUIRE(bc.has(id));
        CHECK(bc.at(id) == doctest::Approx(v).epsilon(1e-4));
    }
}

TEST_CASE("Gram matrix pattern and positivity") {
    for (const BasisCoefficients* b : {&maxwellBasis(), &syntheticBasis()}) {
        const OddBasis basis = oddBasis(*b);
        const auto pattern = zPattern(basis);
        const OnsagerOperator op = halfspaceGram(basis, 1.0);
        CHECK(op.quadratureError < 1e-10);
        for (int i = 0; i < basis.size(); ++i)
            for (int j = 0; j < basis.size(); ++j)
                if (!pattern(i, j)) CHECK(std::abs(op.Z(i, j)) <= 1e-12);
        const MatrixXd S = op.symmetricSupport();
        CHECK((S - S.transpose()).norm() < 1e-12);
        CHECK(Eigen::SelfAdjointEigenSolver<MatrixXd>(S).eigenvalues().minCoeff() > 0);
        // wall elimination zeroes the normal-velocity row and column
        CHECK(op.Zelim.row(0).norm() == 0.0);
        CHECK(op.Zelim.col(0).norm() == 0.0);
    }
    CHECK(oddBasis(maxwellBasis()).maxwell);
    CHECK(oddBasis(maxwellBasis()).size() == 9);
    CHECK(oddBasis(syntheticBasis()).size() == 12);
}

TEST_CASE("Knudsen-layer eigenvalues") {
    SUBCASE("table rows") {
        const auto s10 = reduceToOde(loadBuiltin(GasModel::ipl(10)).first, 0.2);
        CHECK(s10.lambda1 == doctest::Approx(0.92989).epsilon(1e-3));
        CHECK(s10.lambda2 == doctest::Approx(7.6747).epsilon(1e-3));
        const auto shs = reduceToOde(loadBuiltin(GasModel::ipl(kInf)).first, 0.2);
        CHECK(shs.lambda1 == doctest::Approx(0.92248).epsilon(1e-3));
        CHECK(shs.lambda2 == doctest::Approx(4.2387).epsilon(1e-3));
        const auto s7 = reduceToOde(loadBuiltin(GasModel::ipl(7)).first, 0.2);
        CHECK(s7.lambda2 == doctest::Approx(12.696).epsilon(1e-3));
    }
    SUBCASE("Kn independence") {
        const auto mc = loadBuiltin(GasModel::ipl(10)).first;
        const auto a = reduceToOde(mc, 0.1), b = reduceToOde(mc, 0.2);
        CHECK(a.lambda1 == doctest::Approx(b.lambda1).epsilon(1e-13));
        CHECK(a.lambda2 == doctest::Approx(b.lambda2).epsilon(1e-13));
    }
    SUBCASE("Maxwell is degenerate") {
        const auto m = reduceToOde(loadBuiltin(GasModel::ipl(5)).first, 0.2);
        CHECK(m.degenerate);
        CHECK(std::isnan(m.lambda2));
        CHECK(m.lambda1 > 0);
    }
    SUBCASE("diagonal b") {
        Eigen::Matrix2d b;
        b << -1, 0, 0, -4;
        const Eigen::Vector2d l = layerEigenvalues(b);
        CHECK(l(0) == doctest::Approx(1.0));
        CHECK(l(1) == doctest::Approx(2.0));
    }
    SUBCASE("ordering and positivity for all non-Maxwell rows") {
        for (double eta : {7.0, 10.0, 17.0, kInf}) {
            const auto s = reduceToOde(loadBuiltin(GasModel::ipl(eta)).first, 0.2);
            CHECK(s.lambda1 > 0);
            CHECK(s.lambda1 <= s.lambda2);
            // -lambda^2 are the eigenvalues of b
            for (double l : {s.lambda1, s.lambda2})
                CHECK(std::abs((s.b + l * l * Eigen::Matrix2d::Identity()).determinant()) < 1e-9 * std::pow(l, 4));
        }
    }
}

TEST_CASE("layer removal") {
    SUBCASE("scalar 2x2 example") {
        MatrixXd Q(2, 2);
        Q << 1.5, -0.7, -0.7, 2.0;
        const auto r = removeLayers(Q, {Eigen::Vector2d(1, 0)}, {{0, 0}, {0, 1}, {1, 0}});
        CHECK(r.Q(0, 0) == doctest::Approx(0.0));
        CHECK(r.Q(0, 1) == doctest::Approx(0.0));
        CHECK(r.Q(1, 0) == doctest::Approx(0.0));
        CHECK(r.Q(1, 1) == 2.0);
        CHECK(r.changed);
    }
    SUBCASE("constraints already satisfied") {
        MatrixXd Q(3, 3);
        Q << -1, 0, 0, 0, -2, 0.5, 0, 0.5, -3;
        const auto r = removeLayers(Q, {VectorXd::Zero(3)}, {{1, 1}});
        CHECK((r.Q - Q).norm() == 0.0);
        CHECK_FALSE(r.changed);
    }
    SUBCASE("empty modified set leaves Q unchanged") {
        MatrixXd Q = -MatrixXd::Identity(3, 3);
        const auto r = removeLayers(Q, {}, {});
        CHECK((r.Q - Q).norm() == 0.0);
    }
    SUBCASE("annihilation and symmetry on a random problem") {
        std::srand(4);
        const int n = 6;
        const MatrixXd R = MatrixXd::Random(n, n);
        const MatrixXd Q = -(R * R.transpose());
        VectorXd l1 = VectorXd::Zero(n), l2 = VectorXd::Zero(n);
        l1.head(2) = Eigen::Vector2d(1.0, 0.5);
        l2.head(2) = Eigen::Vector2d(0.3, 1.0);
        std::vector<std::pair<int, int>> mod;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < n; ++j) {
                mod.push_back({i, j});
                if (j >= 2) mod.push_back({j, i});
            }
        const auto r = removeLayers(Q, {l1, l2}, mod);
        CHECK((r.Q - r.Q.transpose()).norm() < 1e-12);
        CHECK((l1.transpose() * r.Q).norm() < 1e-12);
        CHECK((l2.transpose() * r.Q).norm() < 1e-12);
        CHECK((r.Q.bottomRightCorner(n - 2, n - 2) - Q.bottomRightCorner(n - 2, n - 2)).norm() == 0.0);
    }
}

TEST_CASE("layer left vectors") {
    SUBCASE("closed-form unit example") {
        const int r = 3;
        const MatrixXd I = MatrixXd::Identity(r, r);
        const auto lv = layerLeftVectors(I, -I, -I);
        CHECK(lv.rank == r);
        int ones = 0;
        for (int i = 0; i < lv.lambda.size(); ++i)
            if (std::abs(lv.lambda(i) - 1.0) < 1e-12) ++ones;
        CHECK(ones == r);
        CHECK(lv.pairingError < 1e-12);
    }
    SUBCASE("37-moment spectra pair up and Maxwell loses three layers") {
        const auto m = layerLeftVectors(assemble37System(maxwellBasis(), 1.0));
        const auto s = layerLeftVectors(assemble37System(syntheticBasis(), 1.0));
        CHECK(m.pairingError < 1e-10);
        CHECK(s.pairingError < 1e-10);
        auto positive = [](const LayerVectors& v) { return int((v.lambda.array() > 1e-6).count()); };
        CHECK(positive(s) - positive(m) == 3);
        CHECK(s.rank - m.rank == 3);
    }
}

TEST_CASE("one-dimensional boundary rows") {
    const auto [mc, bc] = loadBuiltin(GasModel::ipl(5));
    const double kn = 0.5;
    const BCAssembly1D right = assembleBcRows1D(bc, 1, kn), left = assembleBcRows1D(bc, -1, kn);
    CHECK(right.rows() == 5);
    CHECK(right.essential == std::vector<int>{channel::V2});

    // heat-flux row: qbar = 2 s_n [m11 (theta - thetaW) + m12 sbar - (m13 + 2/3 m14) Kn qbar']
    int qRow = -1;
    for (int r = 0; r < right.rows(); ++r)
        if (right.Rt(r, channel::Q2) != 0) qRow = r;
    REQUIRE(qRow >= 0);
    const double scale = right.Rt(qRow, channel::Q2);
    CHECK(right.Rt(qRow, channel::THETA) / scale == doctest::Approx(-2 * bc.at(11)));
    CHECK(right.Rt(qRow, channel::S22) / scale == doctest::Approx(-2 * bc.at(12)));
    CHECK(right.Rd(qRow, channel::Q2) / scale == doctest::Approx(2 * (bc.at(13) + 2.0 / 3.0 * bc.at(14)) * kn));
    CHECK(right.Rw(qRow, 0) / scale == doctest::Approx(-2 * bc.at(11)));

    // s_n flip: every row of the left wall is the right-wall row with s_n negated
    for (int r = 0; r < right.rows(); ++r) {
        // columns multiplying s_n are those that change; the rest stay
        for (int c = 0; c < 9; ++c) {
            const double a = right.Rt(r, c), b = left.Rt(r, c);
            CHECK((std::abs(a - b) < 1e-14 || std::abs(a + b) < 1e-14));
        }
    }
    CHECK(left.Rt(qRow, channel::Q2) == doctest::Approx(scale));
    CHECK(left.Rt(qRow, channel::THETA) == doctest::Approx(-right.Rt(qRow, channel::THETA)));

    // wall in equilibrium with the gas: all rows vanish
    VectorXd trace = VectorXd::Zero(9), deriv = VectorXd::Zero(9);
    trace(channel::THETA) = 0.3;
    trace(channel::V1) = -0.1;
    CHECK(right.residual(trace, deriv, 0.3, -0.1).norm() < 1e-14);
    CHECK(left.residual(trace, deriv, 0.3, -0.1).norm() < 1e-14);
}

TEST_CASE("non-Maxwell rows use every tabled group") {
    const auto bc = loadBuiltin(GasModel::ipl(10)).second;
    CHECK(assembleBcRows1D(bc, 1, 0.2).rows() == 7);
    BCCoefficients missing = bc;
    missing.m.erase(22);
    CHECK_THROWS_AS(assembleBcRows1D(missing, 1, 0.2), Error);
}
