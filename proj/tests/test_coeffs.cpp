#include "r13/coeffs.hpp"
#include "r13/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>

using namespace r13;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

// Cauchy-Schwarz type inequalities between the diffusion coefficients
void checkKInequalities(const ModelCoefficients& c) {
    const auto& k = c.k;
    CHECK(9.0 * k[2] * k[2] / 4.0 <= 0.75 * k[1] * k[10] * (1 + 1e-12) + 1e-300);
    CHECK(k[4] * k[4] <= 24.0 / 25.0 * k[3] * k[7] * (1 + 1e-12) + 1e-300);
    CHECK(k[6] >= 0);
    CHECK(k[9] >= 0);
}

} // namespace

TEST_CASE("builtin table values") {
    const auto [k10, bc10] = loadBuiltin(GasModel::ipl(10));
    CHECK(k10.k[1] == doctest::Approx(8.7436e-3).epsilon(1e-4));
    CHECK(k10.l2 == doctest::Approx(0.98727).epsilon(1e-5));
    CHECK(k10.l1 == doctest::Approx(0.98385).epsilon(1e-5));

    const auto [k5, bc5] = loadBuiltin(GasModel::ipl(5));
    CHECK(k5.k[0] == 1.0);
    CHECK(k5.k[1] == 0.0);
    CHECK(k5.k[2] == 0.0);
    CHECK(bc5.at(11) == doctest::Approx(2.0 / std::sqrt(2 * M_PI)).epsilon(1e-4));
    CHECK(bc5.at(48) == doctest::Approx(24.0 / 5.0).epsilon(1e-4));
    CHECK_FALSE(bc5.has(21));
    CHECK_THROWS_AS(bc5.at(21), Error);

    const auto [k17, bc17] = loadBuiltin(GasModel::ipl(17));
    CHECK(k17.k[7] == doctest::Approx(0.94576).epsilon(1e-4));
}

TEST_CASE("unsupported exponent is rejected") {
    CHECK_THROWS_AS(loadBuiltin(GasModel::ipl(6)), Error);
}

TEST_CASE("eta parsing") {
    CHECK(parseEta("10") == 10.0);
    CHECK(std::isinf(parseEta("inf")));
    CHECK(std::isinf(parseEta("hs")));
    CHECK_THROWS_AS(parseEta("ten"), Error);
}

TEST_CASE("table rows satisfy the coefficient inequalities") {
    for (double eta : {5.0, 7.0, 10.0, 17.0, kInf}) {
        CAPTURE(eta);
        const auto c = loadBuiltin(GasModel::ipl(eta)).first;
        checkKInequalities(c);
        CHECK_NOTHROW(c.checkInvariants());
        CHECK(c.l1 > 0);
        CHECK(c.l2 > 0);
    }
}

TEST_CASE("Knudsen number conversion") {
    CHECK(knConvert(1.0, GasModel::ipl(5)) == doctest::Approx(std::sqrt(M_PI / 2)).epsilon(1e-12));
    CHECK(knConvert(1.0, GasModel::ipl(kInf)) == doctest::Approx(std::sqrt(M_PI / 2) * 15.0 / 24.0).epsilon(1e-12));
    CHECK(knConvert(1.0, GasModel::ipl(kInf)) == doctest::Approx(0.78332).epsilon(1e-4));
    CHECK_THROWS_AS(knConvert(0.0, GasModel::ipl(5)), Error);
    // linear in the input
    CHECK(knConvert(0.3, GasModel::ipl(10)) == doctest::Approx(0.3 * knConvert(1.0, GasModel::ipl(10))));
}

TEST_CASE("accommodation factor") {
    CHECK(chiTilde(1.0) == doctest::Approx(2.0));
    CHECK(chiTilde(0.5) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("submatrix inverse") {
    MatrixXd a = MatrixXd::Zero(4, 4);
    a(0, 0) = 0; // conservation kernel
    a(1, 1) = -2;
    a(1, 2) = a(2, 1) = 1;
    a(2, 2) = -3;
    a(3, 3) = -1;
    MatrixXd sub = MatrixXd::Zero(3, 3);
    sub << -2, 1, 0, 1, -3, 0, 0, 0, -1;
    // 2x2 block [[-2,1],[1,-3]] sits at n0 = 1; the trailing -1 decouples
    const MatrixXd b = submatrixInverse(a, 1, 1);
    CHECK(b(1, 1) == doctest::Approx(-0.6));
    CHECK(b(1, 2) == doctest::Approx(-0.2));
    CHECK(b(2, 1) == doctest::Approx(-0.2));
    CHECK(b(2, 2) == doctest::Approx(-0.4));
    CHECK(b(3, 3) == doctest::Approx(-1.0));
    CHECK(b(0, 0) == 0.0);
    // multiply back
    const MatrixXd prod = b.bottomRightCorner(3, 3) * sub;
    CHECK((prod - MatrixXd::Identity(3, 3)).norm() < 1e-14);

    CHECK_THROWS_AS(submatrixInverse(a, 0, 0), Error);
}

TEST_CASE("diagonal collision data inverts to the reciprocal") {
    MatrixXd a = MatrixXd::Zero(5, 5);
    for (int i = 1; i < 5; ++i) a(i, i) = -2;
    const MatrixXd b = submatrixInverse(a, 2, 1);
    for (int i = 1; i < 5; ++i) CHECK(b(i, i) == doctest::Approx(-0.5));
    CHECK(b.topRows(1).norm() == 0.0);
}

TEST_CASE("Maxwell pipeline reproduces the anchor row") {
    const auto [k, basis] = derive(maxwellCollisionSet(20));
    const std::array<double, 11> expect = {1, 0, 0, 0, 0, 1, 1, 1, 1, 1, 0};
    for (int i = 0; i < 11; ++i) CHECK(std::abs(k.k[i] - expect[i]) < 1e-10);
    CHECK(k.l1 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(k.l2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(k.maxwellLike(1e-12));
    checkKInequalities(k);

    // first-order vectors reduce to the lowest moments
    const double s152 = std::sqrt(7.5), s15 = std::sqrt(15.0);
    CHECK(std::abs(std::abs(basis.c.c11(1)) - s152) < 1e-12);
    CHECK(std::abs(basis.c.c20(0) - s15) < 1e-12);
    CHECK(basis.c.c11.norm() == doctest::Approx(s152));
    CHECK(basis.c.c20.norm() == doctest::Approx(s15));
    // anchors of the d ratios
    CHECK(basis.d.d30(0) == doctest::Approx(1.0));
    // orthogonal eigenbasis: no cross coupling in the first-order block
    CHECK(std::abs(basis.L.L1(1, 2)) < 1e-12);
    CHECK(std::abs(basis.L.L1(2, 1)) < 1e-12);
}

TEST_CASE("derivation is deterministic") {
    const auto set = maxwellCollisionSet(12);
    const auto a = derive(set).first;
    const auto b = derive(set).first;
    for (int i = 0; i < 11; ++i) CHECK(a.k[i] == b.k[i]);
    CHECK(a.l1 == b.l1);
    CHECK(a.l2 == b.l2);
}

TEST_CASE("all-zero c vectors give zero flux scalars") {
    CArrays c;
    for (VectorXd* v : {&c.c11, &c.c20, &c.c02, &c.c12, &c.c13, &c.c21, &c.c22, &c.c30}) *v = VectorXd::Zero(8);
    const AScalars A = computeA(c);
    CHECK(A.A45 == 0.0);
    CHECK(A.A49 == 0.0);
    CHECK(A.A5_11 == 0.0);
    CHECK(A.A10_11 == 0.0);
}

TEST_CASE("collision file round trip") {
    const auto set = maxwellCollisionSet(6);
    const std::string path = (std::filesystem::temp_directory_path() / "r13_coeffs_roundtrip.txt").string();
    writeCollisionFile(path, set);
    const auto back = readCollisionFile(path);
    CHECK(back.N == 6);
    for (int l = 0; l < 4; ++l) CHECK((back.a[l] - set.a[l]).norm() == 0.0);
}

TEST_CASE("truncation self-convergence on a smooth set") {
    // the Maxwell set is exact at any truncation
    const auto k20 = derive(maxwellCollisionSet(20)).first;
    const auto k30 = derive(maxwellCollisionSet(30)).first;
    for (int i = 0; i < 11; ++i) CHECK(std::abs(k20.k[i] - k30.k[i]) < 1e-10);
}
