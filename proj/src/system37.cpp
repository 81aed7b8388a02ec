#include "r13/errors.hpp"
#include "r13/model.hpp"
#include "r13/tensor.hpp"

#include <cmath>

namespace r13 {

namespace {

constexpr int X = 1; // 1D direction x2

MatrixXd grad(int r) { return stf::gradOp(r, X); }
MatrixXd div(int r) { return stf::divOp(r, X); }

void put(MatrixXd& M, int row, int col, const MatrixXd& blk, double c) {
    M.block(row, col, blk.rows(), blk.cols()) += c * blk;
}

MatrixXd eye(int n) { return MatrixXd::Identity(n, n); }

} // namespace

System37 assemble37System(const BasisCoefficients& b, double kn) {
    if (!(kn > 0)) fail(ErrorKind::Domain, "Kn must be positive");
    using S = System37;
    System37 s;
    s.kn = kn;
    s.E = MatrixXd::Zero(S::DIM, S::DIM);
    s.E.topLeftCorner(S::N13, S::N13).setIdentity();
    s.A = MatrixXd::Zero(S::DIM, S::DIM);
    s.L = MatrixXd::Zero(S::DIM, S::DIM);
    s.W = VectorXd::Ones(S::DIM);
    s.W(S::THETA) = 1.5;
    s.W.segment(S::Q, 3).setConstant(0.4);
    s.W.segment(S::S, 5).setConstant(0.5);

    const double e1 = b.c.eq()(1), es0 = b.c.es()(0);
    const double c21 = b.c.c12(1), c31 = b.c.c13(1), c10 = b.c.c21(0), c20 = b.c.c22(0);
    const AScalars& A = b.A;
    const LBlocks& L = b.L;
    const double r15 = std::sqrt(15.0), r56 = std::sqrt(5.0 / 6.0), r215 = std::sqrt(2.0 / 15.0);
    MatrixXd& F = s.A;

    put(F, S::RHO, S::V, div(1), 1.0);

    put(F, S::THETA, S::V, div(1), 2.0 / 3.0);
    put(F, S::THETA, S::Q, div(1), 2.0 / 3.0 * e1);
    put(F, S::THETA, S::U2I, div(1), -std::sqrt(10.0 / 3.0) * c21);
    put(F, S::THETA, S::U3I, div(1), -std::sqrt(10.0 / 3.0) * c31);

    put(F, S::V, S::RHO, grad(0), 1.0);
    put(F, S::V, S::THETA, grad(0), 1.0);
    put(F, S::V, S::S, div(2), es0);
    put(F, S::V, S::U1IJ, div(2), r15 * c10);
    put(F, S::V, S::U2IJ, div(2), r15 * c20);

    put(F, S::Q, S::THETA, grad(0), 2.5 * e1);
    put(F, S::Q, S::S, div(2), -std::sqrt(2.0) / 6.0 * A.A45);
    put(F, S::Q, S::U1IJ, div(2), -r56 * A.A49);
    put(F, S::Q, S::U2IJ, div(2), -r56 * A.A4_10);
    put(F, S::Q, S::U2, grad(0), -r56 * A.A46);

    put(F, S::S, S::V, grad(1), 2.0 * es0);
    put(F, S::S, S::Q, grad(1), -2.0 * std::sqrt(2.0) / 15.0 * A.A45);
    put(F, S::S, S::U2I, grad(1), 2.0 / r15 * A.A57);
    put(F, S::S, S::U3I, grad(1), 2.0 / r15 * A.A58);
    put(F, S::S, S::U0, div(3), 2.0 / r15 * A.A5_11);

    put(F, S::U2, S::Q, div(1), -r215 * A.A46);
    put(F, S::U2I, S::THETA, grad(0), -std::sqrt(7.5) * c21);
    put(F, S::U2I, S::S, div(2), A.A57 / r15);
    put(F, S::U3I, S::THETA, grad(0), -std::sqrt(7.5) * c31);
    put(F, S::U3I, S::S, div(2), A.A58 / r15);
    put(F, S::U1IJ, S::V, grad(1), r15 * c10);
    put(F, S::U1IJ, S::Q, grad(1), -r215 * A.A49);
    put(F, S::U2IJ, S::V, grad(1), r15 * c20);
    put(F, S::U2IJ, S::Q, grad(1), -r215 * A.A4_10);
    put(F, S::U0, S::S, grad(2), A.A5_11 / r15);

    MatrixXd& R = s.L;
    put(R, S::Q, S::Q, eye(3), L.L1(0, 0) / 3.0);
    put(R, S::Q, S::U2I, eye(3), -r56 * L.L1(0, 1));
    put(R, S::Q, S::U3I, eye(3), -r56 * L.L1(0, 2));
    put(R, S::S, S::S, eye(5), 2.0 / 15.0 * L.L2(0, 0));
    put(R, S::S, S::U1IJ, eye(5), 2.0 / r15 * L.L2(0, 1));
    put(R, S::S, S::U2IJ, eye(5), 2.0 / r15 * L.L2(0, 2));
    put(R, S::U2, S::U2, eye(1), L.L0_22);
    const int vrow[3] = {S::Q, S::U2I, S::U3I};
    for (int i = 1; i < 3; ++i) {
        put(R, vrow[i], S::Q, eye(3), -r215 * L.L1(i, 0));
        put(R, vrow[i], S::U2I, eye(3), L.L1(i, 1));
        put(R, vrow[i], S::U3I, eye(3), L.L1(i, 2));
    }
    const int trow[3] = {S::S, S::U1IJ, S::U2IJ};
    for (int i = 1; i < 3; ++i) {
        put(R, trow[i], S::S, eye(5), L.L2(i, 0) / r15);
        put(R, trow[i], S::U1IJ, eye(5), L.L2(i, 1));
        put(R, trow[i], S::U2IJ, eye(5), L.L2(i, 2));
    }
    put(R, S::U0, S::U0, eye(7), L.L3_00);
    return s;
}

Reduced13 eliminateSecondOrder(const System37& s) {
    const int n = System37::N13, m = System37::DIM - n;
    MatrixXd A11 = s.A.topLeftCorner(n, n), A12 = s.A.topRightCorner(n, m), A21 = s.A.bottomLeftCorner(m, n);
    MatrixXd L11 = s.L.topLeftCorner(n, n), L12 = s.L.topRightCorner(n, m), L21 = s.L.bottomLeftCorner(m, n);
    MatrixXd L22 = s.L.bottomRightCorner(m, m);
    if ((s.A.bottomRightCorner(m, m)).cwiseAbs().maxCoeff() > 0)
        fail(ErrorKind::Numerical, "second-order block carries its own flux");
    Eigen::FullPivLU<MatrixXd> lu(L22);
    if (!lu.isInvertible()) fail(ErrorKind::Numerical, "second-order relaxation block is singular");
    MatrixXd X21 = lu.solve(L21), Y21 = lu.solve(A21);
    Reduced13 r;
    r.F = A11 - A12 * X21 - L12 * Y21;
    r.D = -A12 * Y21;
    r.R = L11 - L12 * X21;
    return r;
}

Reduced13 template13(const std::array<double, 11>& k, double l1, double l2) {
    using S = System37;
    const int n = S::N13;
    Reduced13 t;
    t.F = MatrixXd::Zero(n, n);
    t.D = MatrixXd::Zero(n, n);
    t.R = MatrixXd::Zero(n, n);
    put(t.F, S::RHO, S::V, div(1), 1.0);
    put(t.F, S::THETA, S::V, div(1), 2.0 / 3.0);
    put(t.F, S::THETA, S::Q, div(1), 2.0 / 3.0 * k[0]);
    put(t.F, S::V, S::RHO, grad(0), 1.0);
    put(t.F, S::V, S::THETA, grad(0), 1.0);
    put(t.F, S::V, S::S, div(2), k[5]);
    put(t.F, S::Q, S::THETA, grad(0), 2.5 * k[0]);
    put(t.F, S::Q, S::S, div(2), k[8]);
    put(t.F, S::S, S::V, grad(1), 2.0 * k[5]);
    put(t.F, S::S, S::Q, grad(1), 0.8 * k[8]);

    put(t.D, S::THETA, S::THETA, div(1) * grad(0), k[1]);
    put(t.D, S::THETA, S::S, div(1) * div(2), -k[2]);
    put(t.D, S::V, S::V, div(2) * grad(1), k[3]);
    put(t.D, S::V, S::Q, div(2) * grad(1), k[4]);
    put(t.D, S::Q, S::V, div(2) * grad(1), 2.5 * k[4]);
    put(t.D, S::Q, S::Q, grad(0) * div(1), 2.0 * k[6]);
    put(t.D, S::Q, S::Q, div(2) * grad(1), 2.4 * k[7]);
    put(t.D, S::S, S::THETA, grad(1) * grad(0), -3.0 * k[2]);
    put(t.D, S::S, S::S, div(3) * grad(2), 2.0 * k[9]);
    put(t.D, S::S, S::S, grad(1) * div(2), k[10]);

    put(t.R, S::Q, S::Q, eye(3), -2.0 / 3.0 * l1);
    put(t.R, S::S, S::S, eye(5), -l2);
    return t;
}

namespace {
VectorXd stack(const Reduced13& r) {
    const int n = static_cast<int>(r.F.size());
    VectorXd v(3 * n);
    v << Eigen::Map<const VectorXd>(r.F.data(), n), Eigen::Map<const VectorXd>(r.D.data(), n),
        Eigen::Map<const VectorXd>(r.R.data(), n);
    return v;
}
} // namespace

CoefficientFit fitTemplate(const Reduced13& r, double tol) {
    std::array<double, 11> z{};
    VectorXd t0 = stack(template13(z, 0, 0));
    MatrixXd B(t0.size(), 13);
    for (int p = 0; p < 13; ++p) {
        std::array<double, 11> k{};
        double l1 = 0, l2 = 0;
        if (p < 11) k[p] = 1;
        else if (p == 11) l1 = 1;
        else l2 = 1;
        B.col(p) = stack(template13(k, l1, l2)) - t0;
    }
    VectorXd target = stack(r) - t0;
    VectorXd x = B.colPivHouseholderQr().solve(target);
    CoefficientFit fit;
    for (int i = 0; i < 11; ++i) fit.k[i] = x(i);
    fit.l1 = x(11);
    fit.l2 = x(12);
    double scale = std::max(1.0, stack(r).cwiseAbs().maxCoeff());
    fit.residual = (B * x - target).cwiseAbs().maxCoeff() / scale;
    if (fit.residual > tol)
        fail(ErrorKind::Numerical, "structural mismatch: eliminated system leaves terms outside the R13 stencil (residual " +
                                       std::to_string(fit.residual) + ")");
    return fit;
}

double superBurnettResidual(const System37& s) {
    using S = System37;
    const int n0 = 5, n1 = 8, n2 = S::DIM - S::N13;
    MatrixXd A20 = s.A.block(S::N13, 0, n2, n0);
    MatrixXd L21 = s.L.block(S::N13, n0, n2, n1);
    MatrixXd L11 = s.L.block(n0, n0, n1, n1);
    MatrixXd A10 = s.A.block(n0, 0, n1, n0);
    MatrixXd res = A20 - L21 * L11.fullPivLu().solve(A10);
    return res.cwiseAbs().maxCoeff();
}

ModelCoefficients computeModelCoefficients(const BasisCoefficients& basis) {
    auto M1 = basis.L.L1.bottomRightCorner<2, 2>();
    auto M2 = basis.L.L2.bottomRightCorner<2, 2>();
    for (const Eigen::Matrix2d& M : {Eigen::Matrix2d(M1), Eigen::Matrix2d(M2)}) {
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(0.5 * (M + M.transpose()));
        if (es.eigenvalues().maxCoeff() >= 0) fail(ErrorKind::Numerical, "second-order L block is not negative definite");
    }
    // Kn drops out of the reduced operators; any positive value works
    System37 s = assemble37System(basis, 1.0);
    CoefficientFit fit = fitTemplate(eliminateSecondOrder(s));
    auto pk = closedFormK(basis);
    ModelCoefficients mc;
    mc.k = fit.k;
    const int closedIdx[6] = {1, 2, 3, 4, 7, 10};
    for (int i = 0; i < 6; ++i) mc.k[closedIdx[i]] = pk[i];
    mc.l1 = fit.l1;
    mc.l2 = fit.l2;
    mc.source = ModelCoefficients::Source::Derived;
    mc.truncation = basis.N;
    mc.eta = std::numeric_limits<double>::quiet_NaN();
    return mc;
}

} // namespace r13
