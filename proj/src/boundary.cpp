// 1D boundary rows, layer removal and the layer spectrum of the parity-split steady system.
#include "r13/boundary.hpp"
#include "r13/errors.hpp"
#include "r13/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace r13 {

VectorXd BCAssembly1D::source(double thetaW, double v1W) const {
    return Rw * Eigen::Vector2d(thetaW, v1W);
}

VectorXd BCAssembly1D::residual(const VectorXd& trace, const VectorXd& deriv, double thetaW, double v1W) const {
    return Rt * trace + Rd * deriv - source(thetaW, v1W);
}

BCAssembly1D assembleBcRows1D(const BCCoefficients& bc, int side, double kn) {
    if (side != 1 && side != -1) fail(ErrorKind::Domain, "wall side must be -1 or +1");
    if (!(kn > 0)) fail(ErrorKind::Domain, "Kn must be positive");
    const double ct = bc.chiTilde();
    if (!(ct > 0)) fail(ErrorKind::Domain, "chi~ must be positive");
    using namespace channel;
    const double s = side, sc = s * ct;
    auto m = [&](int id) { return bc.at(id); };
    // Maxwell tables leave the m2x / m5x groups absent; every other row is required
    const bool full = bc.has(21);

    struct RowSpec {
        std::string name;
        std::vector<std::pair<int, double>> t, d;
        double wTheta = 0, wV = 0;
    };
    std::vector<RowSpec> rows;
    // qbar_n row
    rows.push_back({"qbar", {{Q2, 1.0}, {THETA, -sc * m(11)}, {S22, -sc * m(12)}},
                    {{Q2, sc * (m(13) + 2.0 / 3.0 * m(14)) * kn}, {V2, sc * 2.0 / 3.0 * m(15) * kn}},
                    -sc * m(11), 0.0});
    if (full)
        rows.push_back({"m2", {{Q2, m(26)}, {THETA, sc * m(21)}, {S22, -sc * m(22)}},
                        {{THETA, m(27) * kn}, {S22, -m(28) * kn}, {Q2, -sc * (m(23) + 2.0 / 3.0 * m(24)) * kn},
                         {V2, -sc * 2.0 / 3.0 * m(25) * kn}},
                        sc * m(21), 0.0});
    rows.push_back({"m6", {{Q2, -m(66)}, {THETA, sc * m(61)}, {S22, -sc * m(62)}},
                    {{S22, -(0.6 * m(67) + m(68)) * kn}, {THETA, -m(69) * kn},
                     {Q2, -sc * (m(63) + 2.0 / 3.0 * m(64)) * kn}, {V2, -sc * 2.0 / 3.0 * m(65) * kn}},
                    sc * m(61), 0.0});
    // shear rows
    rows.push_back({"sbar_tn", {{S12, 1.0}, {V1, -sc * m(31)}, {Q1, -sc * m(32)}},
                    {{S12, sc * (m(33) + 8.0 / 15.0 * m(34)) * kn}}, 0.0, -sc * m(31)});
    rows.push_back({"m4", {{S12, m(46)}, {V1, -sc * m(41)}, {Q1, sc * m(42)}},
                    {{V1, 0.5 * m(47) * kn}, {Q1, 0.5 * m(48) * kn}, {S12, sc * (m(43) + 8.0 / 15.0 * m(44)) * kn}},
                    0.0, -sc * m(41)});
    if (full)
        rows.push_back({"m5", {{S12, m(56)}, {V1, -sc * m(51)}, {Q1, sc * m(52)}},
                        {{V1, 0.5 * m(57) * kn}, {Q1, 0.5 * m(58) * kn}, {S12, sc * (m(53) + 8.0 / 15.0 * m(54)) * kn}},
                        0.0, -sc * m(51)});
    // s = s11 + s22/2 decouples
    rows.push_back({"s", {{S, sc * m(71)}}, {{S, kn / 3.0}}, 0.0, 0.0});

    BCAssembly1D a;
    a.side = side;
    const int n = static_cast<int>(rows.size());
    a.Rt = MatrixXd::Zero(n, 9);
    a.Rd = MatrixXd::Zero(n, 9);
    a.Rw = MatrixXd::Zero(n, 2);
    for (int i = 0; i < n; ++i) {
        for (auto [c, v] : rows[i].t) a.Rt(i, c) += v;
        for (auto [c, v] : rows[i].d) a.Rd(i, c) += v;
        a.Rw(i, 0) = rows[i].wTheta;
        a.Rw(i, 1) = rows[i].wV;
        a.names.push_back(rows[i].name);
    }
    a.essential = {V2};
    return a;
}

BCAssembly1D assemblePlanarBcRows(const BCCoefficients& bc, int side, double kn) {
    const BCAssembly1D c = assembleBcRows1D(bc, side, kn);
    const std::vector<int>& cols = channel::temperatureBlock();
    std::vector<int> keep;
    for (int i = 0; i < c.rows(); ++i)
        if (c.names[i] == "qbar" || c.names[i] == "m2" || c.names[i] == "m6") keep.push_back(i);
    BCAssembly1D p;
    p.side = side;
    const int n = static_cast<int>(keep.size()), m = static_cast<int>(cols.size());
    p.Rt = MatrixXd::Zero(n, m);
    p.Rd = MatrixXd::Zero(n, m);
    p.Rw = MatrixXd::Zero(n, 2);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) {
            p.Rt(i, j) = c.Rt(keep[i], cols[j]);
            p.Rd(i, j) = c.Rd(keep[i], cols[j]);
        }
        p.Rw.row(i) = c.Rw.row(keep[i]);
        p.names.push_back(c.names[keep[i]]);
    }
    p.essential = {2};
    return p;
}

RemoveLayersResult removeLayers(const MatrixXd& Q, const std::vector<VectorXd>& l,
                                const std::vector<std::pair<int, int>>& modified) {
    const int n = static_cast<int>(Q.rows());
    if (Q.cols() != n) fail(ErrorKind::Numerical, "remove_layers: Q must be square");
    const double scale = std::max(1.0, Q.cwiseAbs().maxCoeff());
    if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        fail(ErrorKind::Numerical, "remove_layers: Q must be symmetric");
    for (const auto& v : l)
        if (v.size() != n) fail(ErrorKind::Numerical, "remove_layers: layer vector size mismatch");

    RemoveLayersResult res;
    res.Q = Q;
    double r0 = 0;
    for (const auto& v : l) r0 = std::max(r0, (v.transpose() * Q).cwiseAbs().maxCoeff());
    auto finish = [&]() {
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(res.Q);
        res.maxEigenvalue = es.eigenvalues().maxCoeff();
        res.nsdWarning = res.maxEigenvalue > 1e-10;
        return res;
    };
    if (r0 <= 1e-14 * scale) return finish();

    // unknowns: symmetric pairs in the modified block that are not structural zeros
    std::vector<std::pair<int, int>> unk;
    for (auto [i, j] : modified) {
        if (i < 0 || j < 0 || i >= n || j >= n) fail(ErrorKind::Numerical, "remove_layers: index out of range");
        const auto p = std::make_pair(std::min(i, j), std::max(i, j));
        if (Q(p.first, p.second) == 0.0) continue;
        if (std::find(unk.begin(), unk.end(), p) == unk.end()) unk.push_back(p);
    }
    const int nu = static_cast<int>(unk.size());
    if (nu == 0) fail(ErrorKind::Numerical, "remove_layers: no modifiable entries but l^T Q != 0");
    auto isUnknown = [&](int i, int j) {
        const auto p = std::make_pair(std::min(i, j), std::max(i, j));
        auto it = std::find(unk.begin(), unk.end(), p);
        return it == unk.end() ? -1 : static_cast<int>(it - unk.begin());
    };
    // equations sum_i l_i Q_ij = 0 for every l and column j
    const int ne = static_cast<int>(l.size()) * n;
    MatrixXd A = MatrixXd::Zero(ne, nu);
    VectorXd b = VectorXd::Zero(ne);
    for (std::size_t k = 0; k < l.size(); ++k)
        for (int j = 0; j < n; ++j) {
            const int r = static_cast<int>(k) * n + j;
            for (int i = 0; i < n; ++i) {
                const int u = isUnknown(i, j);
                if (u >= 0) A(r, u) += l[k](i);
                else b(r) -= l[k](i) * Q(i, j);
            }
        }
    Eigen::ColPivHouseholderQR<MatrixXd> qr(A);
    qr.setThreshold(1e-12);
    if (qr.rank() < nu)
        fail(ErrorKind::Numerical, "remove_layers: constrained system is singular (rank " + std::to_string(qr.rank()) +
                                       " < " + std::to_string(nu) + ")");
    const VectorXd x = qr.solve(b);
    const double inc = (A * x - b).cwiseAbs().maxCoeff();
    if (inc > 1e-10 * std::max(1.0, b.cwiseAbs().maxCoeff()))
        fail(ErrorKind::Numerical, "remove_layers: constrained system is inconsistent (residual " + std::to_string(inc) + ")");
    for (int u = 0; u < nu; ++u) {
        res.Q(unk[u].first, unk[u].second) = x(u);
        res.Q(unk[u].second, unk[u].first) = x(u);
    }
    res.changed = true;
    return finish();
}

namespace {

MatrixXd schurTilde(const MatrixXd& L, const MatrixXd& B1, const MatrixXd& B2, const char* what) {
    MatrixXd t = B1.transpose() * L * B1;
    if (B2.cols() == 0) return t;
    const MatrixXd L22 = B2.transpose() * L * B2;
    Eigen::FullPivLU<MatrixXd> lu(L22);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) fail(ErrorKind::Numerical, std::string("layer vectors: ") + what + " is singular");
    return t - B1.transpose() * L * B2 * lu.solve(B2.transpose() * L * B1);
}

} // namespace

LayerVectors layerLeftVectors(const MatrixXd& Aoe, const MatrixXd& Loo, const MatrixXd& Lee, double rankTol) {
    const int no = static_cast<int>(Aoe.rows()), ne = static_cast<int>(Aoe.cols());
    if (Loo.rows() != no || Loo.cols() != no || Lee.rows() != ne || Lee.cols() != ne)
        fail(ErrorKind::Numerical, "layer vectors: block size mismatch");
    Eigen::JacobiSVD<MatrixXd> svd(Aoe, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const VectorXd& sv = svd.singularValues();
    const double smax = sv.size() ? sv(0) : 0.0;
    int r = 0;
    while (r < sv.size() && sv(r) > rankTol * std::max(smax, 1e-300)) ++r;
    if (r == 0) fail(ErrorKind::Numerical, "layer vectors: A_oe vanishes");
    const MatrixXd U = svd.matrixU(), V = svd.matrixV();
    const MatrixXd Lo = schurTilde(Loo, U.leftCols(r), U.rightCols(no - r), "U2^T Loo U2");
    const MatrixXd Le = schurTilde(Lee, V.leftCols(r), V.rightCols(ne - r), "V2^T Lee V2");
    const VectorXd inv = sv.head(r).cwiseInverse();
    MatrixXd M = MatrixXd::Zero(2 * r, 2 * r);
    M.topRightCorner(r, r) = inv.asDiagonal() * Le;
    M.bottomLeftCorner(r, r) = inv.asDiagonal() * Lo;
    Eigen::EigenSolver<MatrixXd> es(M);
    if (es.info() != Eigen::Success) fail(ErrorKind::Numerical, "layer vectors: eigen-decomposition failed");
    const VectorXd lam = es.eigenvalues().real();
    const double imag = es.eigenvalues().imag().cwiseAbs().maxCoeff();
    if (imag > 1e-8 * std::max(1.0, lam.cwiseAbs().maxCoeff()))
        fail(ErrorKind::Numerical, "layer vectors: complex layer eigenvalues");
    const MatrixXd R = es.eigenvectors().real();
    const MatrixXd Lt = R.inverse().transpose();
    std::vector<int> ord(2 * r);
    std::iota(ord.begin(), ord.end(), 0);
    std::sort(ord.begin(), ord.end(), [&](int a, int b) { return lam(a) > lam(b); });

    LayerVectors out;
    out.rank = r;
    out.singular = sv;
    out.lambda.resize(2 * r);
    out.lo.resize(r, 2 * r);
    out.le.resize(r, 2 * r);
    out.ro.resize(r, 2 * r);
    out.re.resize(r, 2 * r);
    for (int k = 0; k < 2 * r; ++k) {
        out.lambda(k) = lam(ord[k]);
        out.lo.col(k) = Lt.col(ord[k]).head(r);
        out.le.col(k) = Lt.col(ord[k]).tail(r);
        out.ro.col(k) = R.col(ord[k]).head(r);
        out.re.col(k) = R.col(ord[k]).tail(r);
    }
    for (int k = 0; k < 2 * r; ++k)
        out.pairingError = std::max(out.pairingError, std::abs(out.lambda(k) + out.lambda(2 * r - 1 - k)));
    return out;
}

namespace {

// +1 / -1 parity of each orthonormal stf basis tensor under x2 -> -x2
std::vector<int> parity(int rank) {
    const MatrixXd& B = stf::basis(rank);
    std::vector<int> p(B.cols());
    for (int k = 0; k < B.cols(); ++k) {
        VectorXd t = B.col(k), tr = t;
        for (int f = 0; f < t.size(); ++f) {
            int idx = f, cnt = 0;
            for (int q = 0; q < rank; ++q) {
                if (idx % 3 == 1) ++cnt;
                idx /= 3;
            }
            if (cnt % 2) tr(f) = -tr(f);
        }
        if ((tr - t).norm() < 1e-12) p[k] = 1;
        else if ((tr + t).norm() < 1e-12) p[k] = -1;
        else fail(ErrorKind::Numerical, "stf basis tensor without definite parity");
    }
    return p;
}

} // namespace

LayerVectors layerLeftVectors(const System37& s, double rankTol) {
    using S = System37;
    // block (start, rank) layout
    const int starts[] = {S::RHO, S::THETA, S::V, S::Q, S::S, S::U2, S::U2I, S::U3I, S::U1IJ, S::U2IJ, S::U0};
    const int ranks[] = {0, 0, 1, 1, 2, 0, 1, 1, 2, 2, 3};
    std::vector<int> odd, even;
    for (int b = 0; b < 11; ++b) {
        const auto p = parity(ranks[b]);
        for (std::size_t k = 0; k < p.size(); ++k) (p[k] < 0 ? odd : even).push_back(starts[b] + static_cast<int>(k));
    }
    // entropy weights: 13-moment part from W, second-order part chosen to symmetrize A
    VectorXd w = s.W;
    const VectorXd sw = w.cwiseSqrt();
    const MatrixXd A = sw.asDiagonal() * s.A * sw.cwiseInverse().asDiagonal();
    const MatrixXd L = sw.asDiagonal() * s.L * sw.cwiseInverse().asDiagonal();
    const double sa = std::max(1.0, A.cwiseAbs().maxCoeff()), sl = std::max(1.0, L.cwiseAbs().maxCoeff());
    if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-10 * sa || (L - L.transpose()).cwiseAbs().maxCoeff() > 1e-10 * sl)
        fail(ErrorKind::Numerical, "layer vectors: 37-moment system is not symmetrizable by its entropy weights");
    auto sub = [](const MatrixXd& M, const std::vector<int>& r, const std::vector<int>& c) {
        MatrixXd out(r.size(), c.size());
        for (std::size_t i = 0; i < r.size(); ++i)
            for (std::size_t j = 0; j < c.size(); ++j) out(i, j) = M(r[i], c[j]);
        return out;
    };
    if (sub(A, odd, odd).cwiseAbs().maxCoeff() > 1e-12 * sa || sub(A, even, even).cwiseAbs().maxCoeff() > 1e-12 * sa ||
        sub(L, odd, even).cwiseAbs().maxCoeff() > 1e-12 * sl)
        fail(ErrorKind::Numerical, "layer vectors: system is not in odd/even form");
    return layerLeftVectors(sub(A, odd, even), sub(L, odd, odd) / s.kn, sub(L, even, even) / s.kn, rankTol);
}

CollisionMatrixSet syntheticCollisionSet(int N, double eps, unsigned seed) {
    CollisionMatrixSet s = maxwellCollisionSet(N);
    std::mt19937 gen(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    for (int l = 0; l < 4; ++l) {
        const int n0 = (l == 0) ? 2 : (l == 1 ? 1 : 0);
        const int m = N + 1 - n0;
        MatrixXd B(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) B(i, j) = nd(gen) / ((1.0 + i) * (1.0 + j));
        MatrixXd P = B.transpose() * B;
        P /= P.cwiseAbs().maxCoeff();
        s.a[l].bottomRightCorner(m, m) -= eps * P;
    }
    const double scale = -1.0 / s.a[2](0, 0);
    for (auto& a : s.a) a *= scale;
    s.validate();
    return s;
}

} // namespace r13
