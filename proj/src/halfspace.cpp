// Half-space Gaussian integrals over incoming velocities and the Onsager Gram matrix.
#include "r13/boundary.hpp"
#include "r13/errors.hpp"
#include "r13/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace r13 {

namespace {

// normalized radial Laguerre factor of psi_n^l, x = |xi|^2/2
double lbar(int n, int l, double x) {
    const double a = l + 0.5;
    double p0 = 1.0, p1 = 1.0 + a - x;
    double L = (n == 0) ? p0 : p1;
    for (int k = 1; k < n; ++k) {
        const double p2 = ((2 * k + 1 + a - x) * p1 - (k + a) * p0) / (k + 1);
        p0 = p1;
        p1 = p2;
        L = p2;
    }
    // sqrt(sqrt(pi)/(2^{l+1} n! Gamma(n+l+3/2))) n!
    const double lognorm = 0.5 * (0.5 * std::log(M_PI) - (l + 1) * std::log(2.0) - std::lgamma(n + 1.0) -
                                  std::lgamma(n + l + 1.5)) +
                           std::lgamma(n + 1.0);
    return std::exp(lognorm) * L;
}

double stfComp(const std::vector<int>& idx, const double* xi) {
    const double s = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    auto d = [](int a, int b) { return a == b ? 1.0 : 0.0; };
    switch (idx.size()) {
    case 0: return 1.0;
    case 1: return xi[idx[0]];
    case 2: return xi[idx[0]] * xi[idx[1]] - d(idx[0], idx[1]) * s / 3.0;
    default: {
        const int i = idx[0], j = idx[1], k = idx[2];
        return xi[i] * xi[j] * xi[k] - s / 5.0 * (d(i, j) * xi[k] + d(i, k) * xi[j] + d(j, k) * xi[i]);
    }
    }
}

double comb(const VectorXd& c, const std::vector<int>& idx, const double* xi) {
    const int l = static_cast<int>(idx.size());
    const double x = 0.5 * (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
    double r = 0;
    for (int n = 0; n < c.size(); ++n)
        if (c(n) != 0) r += c(n) * lbar(n, l, x);
    return r == 0 ? 0.0 : r * stfComp(idx, xi);
}

double evalFn(const OddBasisFunction& f, const double* xi) {
    double v = 0;
    for (const auto& t : f.terms) v += t.scale * comb(t.c, t.idx, xi);
    return v;
}

VectorXd delta(int n, int k, double s = 1.0) {
    VectorXd c = VectorXd::Zero(n);
    c(k) = s;
    return c;
}

int highestIndex(const VectorXd& c) {
    for (int n = static_cast<int>(c.size()) - 1; n >= 0; --n)
        if (c(n) != 0) return n;
    return 0;
}

// tensor grid: full space (Hermite^3) and half space (GL on xi_0 in (-R,0), Hermite^2)
struct Grid {
    std::vector<std::array<double, 3>> pts;
    std::vector<double> w;
};

Grid fullGrid(int m) {
    std::vector<double> x, w;
    quad::gaussHermite(m, x, w);
    Grid g;
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c) {
                g.pts.push_back({x[a], x[b], x[c]});
                g.w.push_back(w[a] * w[b] * w[c]);
            }
    return g;
}

Grid halfGrid(int m, int nl, double R) {
    std::vector<double> x, w, lx, lw;
    quad::gaussHermite(m, x, w);
    quad::gaussLegendre(nl, lx, lw);
    Grid g;
    for (int a = 0; a < nl; ++a) {
        const double xn = (lx[a] - 1.0) * R / 2.0;
        const double wn = lw[a] * R / 2.0 * std::exp(-xn * xn / 2.0) / std::sqrt(2.0 * M_PI);
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c) {
                g.pts.push_back({xn, x[b], x[c]});
                g.w.push_back(wn * w[b] * w[c]);
            }
    }
    return g;
}

int autoHermite(const OddBasis& basis) {
    int nmax = 0;
    for (const auto& f : basis.fns)
        for (const auto& t : f.terms) nmax = std::max(nmax, highestIndex(t.c));
    return 2 * nmax + 6;
}

MatrixXd gramHalf(const OddBasis& basis, const Grid& h) {
    const int K = basis.size();
    const std::size_t P = h.pts.size();
    MatrixXd vals(P, K);
    for (std::size_t p = 0; p < P; ++p)
        for (int i = 0; i < K; ++i) vals(p, i) = evalFn(basis.fns[i], h.pts[p].data());
    VectorXd wx(P);
    for (std::size_t p = 0; p < P; ++p) wx(p) = h.w[p] / h.pts[p][0];
    return vals.transpose() * wx.asDiagonal() * vals;
}

VectorXd fullNorms(const OddBasis& basis, const Grid& f) {
    const int K = basis.size();
    VectorXd n = VectorXd::Zero(K);
    for (std::size_t p = 0; p < f.pts.size(); ++p)
        for (int i = 0; i < K; ++i) {
            const double v = evalFn(basis.fns[i], f.pts[p].data());
            n(i) += f.w[p] * v * v;
        }
    return n;
}

} // namespace

OddBasis oddBasis(const BasisCoefficients& b) {
    const CArrays& c = b.c;
    const int n = static_cast<int>(c.c11.size());
    OddBasis B;
    auto fn = [](std::string name, std::vector<OddTerm> terms, bool sec) {
        return OddBasisFunction{std::move(name), std::move(terms), sec};
    };
    const VectorXd d0 = delta(n, 0);
    const double c21 = c.c12(1), c31 = c.c13(1);
    B.maxwell = (c21 == 0 && c31 == 0);
    if (!B.maxwell && c21 == 0) fail(ErrorKind::Numerical, "odd basis: c_1^{2,1} vanishes while c_1^{3,1} does not");
    const double r = B.maxwell ? 0.0 : c31 / c21;
    B.ratio = r;
    B.mu1 = 3.0 * b.A.A5_11 * (1.0 + r * r);
    B.mu2 = 2.0 * (b.A.A58 - r * b.A.A57);

    B.fns.push_back(fn("v_n", {{d0, {0}, 1.0}}, false));
    B.fns.push_back(fn("qbar_n", {{c.c11, {0}, 1.0}}, false));
    if (!B.maxwell) B.fns.push_back(fn("u2_n+r u3_n", {{c.c12, {0}, 1.0}, {c.c13, {0}, r}}, true));
    B.fns.push_back(fn("sbar_t1n", {{c.c20, {0, 1}, 1.0}}, false));
    B.fns.push_back(fn("sbar_t2n", {{c.c20, {0, 2}, 1.0}}, false));
    B.fns.push_back(fn("u1_t1n", {{c.c21, {0, 1}, 1.0}}, true));
    B.fns.push_back(fn("u1_t2n", {{c.c21, {0, 2}, 1.0}}, true));
    if (!B.maxwell) {
        B.fns.push_back(fn("u2_t1n", {{c.c22, {0, 1}, 1.0}}, true));
        B.fns.push_back(fn("u2_t2n", {{c.c22, {0, 2}, 1.0}}, true));
        B.fns.push_back(fn("u0_nnn+mu", {{c.c30, {0, 0, 0}, B.mu1}, {c.c13, {0}, B.mu2}, {c.c12, {0}, -r * B.mu2}}, true));
    } else {
        B.fns.push_back(fn("u0_nnn", {{c.c30, {0, 0, 0}, 1.0}}, true));
    }
    B.fns.push_back(fn("u0_t1t1n", {{c.c30, {1, 1, 0}, 1.0}, {c.c30, {0, 0, 0}, 0.5}}, true));
    B.fns.push_back(fn("u0_t1t2n", {{c.c30, {1, 2, 0}, 1.0}}, true));
    return B;
}

Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> zPattern(const OddBasis& basis) {
    // groups of the 12-element basis: {0,1,2,9,10}, {3,5,7}, {4,6,8}, {11}
    const int g12[12] = {0, 0, 0, 1, 2, 1, 2, 1, 2, 0, 0, 3};
    const int keep9[9] = {0, 1, 3, 4, 5, 6, 9, 10, 11};
    const int K = basis.size();
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> P(K, K);
    auto grp = [&](int i) { return basis.maxwell ? g12[keep9[i]] : g12[i]; };
    for (int i = 0; i < K; ++i)
        for (int j = 0; j < K; ++j) P(i, j) = grp(i) == grp(j);
    return P;
}

MatrixXd applyWallElimination(const MatrixXd& Z) {
    if (Z.rows() != Z.cols() || Z.rows() < 1) fail(ErrorKind::Numerical, "wall elimination: Z must be square");
    const double z0 = Z(0, 0);
    if (!(z0 > 0)) fail(ErrorKind::Numerical, "wall elimination: z0 must be positive (got " + std::to_string(z0) + ")");
    const int n = static_cast<int>(Z.rows()) - 1;
    MatrixXd out = MatrixXd::Zero(Z.rows(), Z.cols());
    out.bottomRightCorner(n, n) = Z.bottomRightCorner(n, n) - Z.col(0).tail(n) * Z.row(0).tail(n) / z0;
    return out;
}

MatrixXd OnsagerOperator::symmetricSupport() const {
    // Z = G D^{-1} with G symmetric and D = diag(norms), so D^{-1/2} Z D^{1/2} is symmetric
    const int n = static_cast<int>(Zelim.rows()) - 1;
    VectorXd s = norms.tail(n).cwiseSqrt();
    MatrixXd S = s.cwiseInverse().asDiagonal() * Zelim.bottomRightCorner(n, n) * s.asDiagonal();
    return -0.5 * (S + S.transpose());
}

OnsagerOperator halfspaceGram(const OddBasis& basis, double chi, const HalfspaceOptions& opt) {
    if (!(chi > 0 && chi <= 1)) fail(ErrorKind::Domain, "accommodation coefficient chi must lie in (0, 1]");
    const int m = opt.hermiteOrder > 0 ? opt.hermiteOrder : autoHermite(basis);
    const Grid full = fullGrid(m);
    const VectorXd norms = fullNorms(basis, full);
    if (norms.minCoeff() <= 0) fail(ErrorKind::Numerical, "odd basis function with zero norm");
    const MatrixXd G1 = gramHalf(basis, halfGrid(m, opt.glOrder, opt.range));
    const MatrixXd G2 = gramHalf(basis, halfGrid(m, opt.glOrder / 2, opt.range));
    OnsagerOperator op;
    op.Z = G1 * norms.cwiseInverse().asDiagonal();
    const MatrixXd Zc = G2 * norms.cwiseInverse().asDiagonal();
    op.quadratureError = (op.Z - Zc).cwiseAbs().maxCoeff();
    if (op.quadratureError > opt.tol)
        fail(ErrorKind::Numerical, "half-space quadrature not converged: order-doubling change " +
                                       std::to_string(op.quadratureError));
    // structural zero pattern holds by parity in the tangential directions; clean quadrature noise
    const auto P = zPattern(basis);
    const double zs = std::max(1.0, op.Z.cwiseAbs().maxCoeff());
    for (int i = 0; i < op.Z.rows(); ++i)
        for (int j = 0; j < op.Z.cols(); ++j)
            if (!P(i, j)) {
                if (std::abs(op.Z(i, j)) > 1e-12 * zs)
                    fail(ErrorKind::Numerical, "Z violates the structural zero pattern at (" + std::to_string(i) + ", " + std::to_string(j) + "): " + std::to_string(op.Z(i, j)));
                op.Z(i, j) = 0.0;
            }
    op.Zelim = applyWallElimination(-op.Z);
    op.Zelim = -op.Zelim;
    op.norms = norms;
    op.chi = chi;
    op.mu1 = basis.mu1;
    op.mu2 = basis.mu2;
    op.maxwellBasis = basis.maxwell;
    for (const auto& f : basis.fns) op.names.push_back(f.name);
    return op;
}

OnsagerOperator halfspaceGram(const BasisCoefficients& b, double chi, const HalfspaceOptions& opt) {
    return halfspaceGram(oddBasis(b), chi, opt);
}

// ---- Maxwell boundary coefficients from the full distribution expansion ----

namespace {

enum Param {
    P_RHO, P_TH, P_V0, P_V1, P_V2, P_Q0, P_Q1, P_Q2, P_S00, P_S01, P_S02, P_S11, P_S12, P_U2, P_A0, P_A1, P_A2,
    P_B0, P_B1, P_B2, P_P00, P_P01, P_P02, P_P11, P_P12, P_R00, P_R01, P_R02, P_R11, P_R12, P_T000, P_T001,
    P_T002, P_T011, P_T012, P_T111, P_T112, P_RHOW, P_THW, P_VW1, P_VW2, NPARAM
};

using Mat3 = Eigen::Matrix3d;

Mat3 sym2(const VectorXd& p, int base) {
    // base -> 00, 01, 02, 11, 12
    Mat3 T = Mat3::Zero();
    const int ij[5][2] = {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}};
    for (int k = 0; k < 5; ++k) T(ij[k][0], ij[k][1]) = T(ij[k][1], ij[k][0]) = p(base + k);
    T(2, 2) = -T(0, 0) - T(1, 1);
    return T;
}

double sym3(const VectorXd& p, int i, int j, int k) {
    int a[3] = {i, j, k};
    std::sort(a, a + 3);
    auto key = [&](int x, int y, int z) { return a[0] == x && a[1] == y && a[2] == z; };
    auto t = [&](int off) { return p(P_T000 + off); };
    // 000 001 002 011 012 111 112 stored; the rest from trace-freeness
    if (key(0, 0, 0)) return t(0);
    if (key(0, 0, 1)) return t(1);
    if (key(0, 0, 2)) return t(2);
    if (key(0, 1, 1)) return t(3);
    if (key(0, 1, 2)) return t(4);
    if (key(1, 1, 1)) return t(5);
    if (key(1, 1, 2)) return t(6);
    if (key(0, 2, 2)) return -t(0) - t(3);
    if (key(1, 2, 2)) return -t(1) - t(5);
    return -t(2) - t(6); // 222
}

struct FParts {
    double f01 = 0, f2 = 0, fW = 0;
};

FParts fparts(const CArrays& C, const VectorXd& p, const double* xi) {
    FParts r;
    const double xx = 0.5 * (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
    r.f01 = p(P_RHO) * lbar(0, 0, 0) - std::sqrt(1.5) * p(P_TH) * lbar(1, 0, xx);
    for (int a = 0; a < 3; ++a) r.f01 += std::sqrt(3.0) * p(P_V0 + a) * lbar(0, 1, xx) * xi[a];
    const Mat3 S = sym2(p, P_S00), Pm = sym2(p, P_P00), Rm = sym2(p, P_R00);
    for (int a = 0; a < 3; ++a) {
        r.f01 += 0.4 * p(P_Q0 + a) * comb(C.c11, {a}, xi);
        r.f2 += 3.0 * (p(P_A0 + a) * comb(C.c12, {a}, xi) + p(P_B0 + a) * comb(C.c13, {a}, xi));
        for (int b = 0; b < 3; ++b) {
            if (S(a, b) != 0) r.f01 += 0.5 * S(a, b) * comb(C.c20, {a, b}, xi);
            if (Pm(a, b) != 0) r.f2 += 7.5 * Pm(a, b) * comb(C.c21, {a, b}, xi);
            if (Rm(a, b) != 0) r.f2 += 7.5 * Rm(a, b) * comb(C.c22, {a, b}, xi);
            for (int c = 0; c < 3; ++c) {
                const double t = sym3(p, a, b, c);
                if (t != 0) r.f2 += 17.5 * t * comb(C.c30, {a, b, c}, xi);
            }
        }
    }
    r.f2 += p(P_U2) * comb(C.c02, {}, xi);
    const double s2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    r.fW = p(P_RHOW) + p(P_VW1) * xi[1] + p(P_VW2) * xi[2] + 0.5 * p(P_THW) * (s2 - 3.0);
    return r;
}

} // namespace

BCCoefficients extractMaxwellBC(const BasisCoefficients& b, double chi, const HalfspaceOptions& opt) {
    const OddBasis basis = oddBasis(b);
    if (!basis.maxwell) fail(ErrorKind::Data, "boundary coefficients are derived only for the Maxwell basis");
    const OnsagerOperator op = halfspaceGram(basis, chi, opt);
    const int K = basis.size();
    const int m = opt.hermiteOrder > 0 ? opt.hermiteOrder : autoHermite(basis);
    std::vector<double> hx, hw;
    quad::gaussHermite(m, hx, hw);

    // LHS_ik = <phi_i, f>, G_ik = <phi_i, xi_n (fW - even part)>; even part by reflecting xi_0
    MatrixXd LHS = MatrixXd::Zero(K, NPARAM), G = MatrixXd::Zero(K, NPARAM);
    for (int a = 0; a < m; ++a)
        for (int bb = 0; bb < m; ++bb)
            for (int c = 0; c < m; ++c) {
                const double w = hw[a] * hw[bb] * hw[c];
                const double xi[3] = {hx[a], hx[bb], hx[c]};
                const double xr[3] = {-hx[a], hx[bb], hx[c]};
                VectorXd phi(K);
                for (int i = 0; i < K; ++i) phi(i) = evalFn(basis.fns[i], xi);
                for (int k = 0; k < NPARAM; ++k) {
                    VectorXd p = VectorXd::Zero(NPARAM);
                    p(k) = 1.0;
                    const FParts f = fparts(b.c, p, xi), fr = fparts(b.c, p, xr);
                    const double ev01 = 0.5 * (f.f01 + fr.f01), ev2 = 0.5 * (f.f2 + fr.f2);
                    for (int i = 0; i < K; ++i) {
                        LHS(i, k) += w * phi(i) * (f.f01 + f.f2);
                        const double g = f.fW - ev01 - (basis.fns[i].secondOrder ? 0.0 : ev2);
                        G(i, k) += w * phi(i) * xi[0] * g;
                    }
                }
            }

    // eliminate v_n = 0 and solve each remaining row for its leading unknown
    const MatrixXd& Z = op.Z;
    const int n = K - 1;
    const MatrixXd Zs = Z.bottomRightCorner(n, n) - Z.col(0).tail(n) * Z.row(0).tail(n) / Z(0, 0);
    const MatrixXd R = Zs * G.bottomRows(n);
    auto row = [&](int i, int lead) -> VectorXd { return R.row(i - 1).transpose() / LHS(i, lead); };

    // second-order moments in terms of gradients (first Maxwellian iteration)
#ifdef R13_DEBUG_BC
    for (int i = 1; i < K; ++i) {
        std::printf("row %d %s LHS:", i, basis.fns[i].name.c_str());
        for (int k = 0; k < NPARAM; ++k) if (std::abs(LHS(i, k)) > 1e-10) std::printf(" [%d]=%.6f", k, LHS(i, k));
        std::printf("\n   R*s2pi:");
        for (int k = 0; k < NPARAM; ++k) if (std::abs(R(i - 1, k)) > 1e-10) std::printf(" [%d]=%.6f", k, R(i - 1, k) * std::sqrt(2 * M_PI));
        std::printf("\n");
    }
#endif
    const double r215 = std::sqrt(2.0 / 15.0);
    const double alpha = -r215 * b.A.A49 / b.L.L2(1, 1);
    const double beta = -r215 * b.A.A46 / b.L.L0_22;
    const double gam = (b.A.A5_11 / std::sqrt(15.0)) / b.L.L3_00;

    BCCoefficients bc;
    bc.chi = chi;
    // rows: 1 qbar_n, 2 sbar_t1n, 4 u1_t1n, 6 u0_nnn, 7 u0_t1t1n + u0_nnn/2, 8 u0_t1t2n
    const VectorXd rq = row(1, P_Q0), rs = row(2, P_S01), ru = row(4, P_P01), rt = row(6, P_T000);
    const VectorXd r7 = row(7, P_T011), r8 = row(8, P_T012);
    // q row: qbar_n = chi~ [m11 (theta - thetaW) + m12 sbar_nn - m13 Kn div q - m14 Kn d<q_n,n>]
    bc.m[11] = rq(P_TH);
    bc.m[12] = rq(P_S00);
    bc.m[13] = -beta * rq(P_U2);
    bc.m[14] = -alpha * rq(P_P00);
    bc.m[15] = 0.0;
    // shear stress row, u0_{t n n} = gam Kn (grad sbar)<t n n>
    bc.m[31] = rs(P_V1);
    bc.m[32] = rs(P_Q1);
    bc.m[33] = 0.0;
    bc.m[34] = -gam * rs(P_T001);
    bc.m[35] = 0.0;
    // u1_{t n} row scaled so that its leading coefficient is m48 = sqrt(210) alpha
    const double su = std::sqrt(210.0);
    bc.m[41] = su * ru(P_V1);
    bc.m[42] = -su * ru(P_Q1);
    bc.m[43] = 0.0;
    bc.m[44] = -su * gam * ru(P_T001);
    bc.m[45] = 0.0;
    bc.m[46] = 0.0;
    bc.m[47] = 0.0;
    bc.m[48] = su * alpha;
    // u0_{nnn} row scaled by -sqrt(105) = 2/gam so that m67 = 2
    const double st = 2.0 / gam;
    bc.m[61] = st * rt(P_TH);
    bc.m[62] = -st * rt(P_S00);
    bc.m[63] = -st * beta * rt(P_U2);
    bc.m[64] = -st * alpha * rt(P_P00);
    bc.m[65] = 0.0;
    bc.m[66] = 0.0;
    bc.m[67] = st * gam;
    bc.m[68] = 0.0;
    bc.m[69] = 0.0;
    bc.m[71] = -r7(P_S11) / gam;
    bc.m[81] = -r8(P_S12) / gam;
    return bc;
}

} // namespace r13
