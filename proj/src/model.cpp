#include "r13/model.hpp"

#include "r13/errors.hpp"
#include "r13/tensor.hpp"

#include <cmath>

namespace r13 {

using Vec9 = Eigen::Matrix<double, 9, 1>;

MomentField1D MomentField1D::zeros(const VectorXd& x) {
    MomentField1D f;
    f.x = x;
    f.u = MatrixXd::Zero(x.size(), NCOMP);
    return f;
}

void MomentField1D::validate() const {
    if (u.cols() != NCOMP) fail(ErrorKind::Data, "moment field needs 9 components per node");
    if (u.rows() != x.size()) fail(ErrorKind::Data, "moment field rows do not match grid");
    for (int i = 1; i < x.size(); ++i)
        if (!(x(i) > x(i - 1))) fail(ErrorKind::Data, "grid must be strictly increasing");
    if (!u.allFinite() || !x.allFinite()) fail(ErrorKind::Data, "moment field contains non-finite values");
}

const char* MomentField1D::name(int comp) {
    static const char* names[NCOMP] = {"rho", "theta", "v1", "v2", "qbar1", "qbar2", "sbar11", "sbar12", "sbar22"};
    if (comp < 0 || comp >= NCOMP) fail(ErrorKind::Domain, "component index out of range");
    return names[comp];
}

namespace channel {

const std::vector<int>& temperatureBlock() {
    static const std::vector<int> b{RHO, THETA, V2, Q2, S22};
    return b;
}
const std::vector<int>& shearBlock() {
    static const std::vector<int> b{V1, Q1, S12};
    return b;
}
const std::vector<int>& sBlock() {
    static const std::vector<int> b{S};
    return b;
}

Vec9 toSystem(const Vec9& f) {
    Vec9 s = f;
    s(S) = f(MomentField1D::S11) + 0.5 * f(MomentField1D::S22);
    return s;
}

Vec9 fromSystem(const Vec9& s) {
    Vec9 f = s;
    f(MomentField1D::S11) = s(S) - 0.5 * s(S22);
    return f;
}

} // namespace channel

namespace {

using S37 = System37;

// maps the 13 stf coordinates onto the 9 channel variables and back (out-of-plane parts dropped)
MatrixXd channelFromStf() {
    MatrixXd T = MatrixXd::Zero(9, S37::N13);
    T(channel::RHO, S37::RHO) = 1;
    T(channel::THETA, S37::THETA) = 1;
    for (int r = 1; r <= 2; ++r) {
        const int off = r == 1 ? S37::V : S37::Q;
        const int c0 = r == 1 ? channel::V1 : channel::Q1;
        const MatrixXd& B = stf::basis(1);
        for (int j = 0; j < 3; ++j) {
            T(c0, off + j) = B(0, j);
            T(c0 + 1, off + j) = B(1, j);
        }
    }
    const MatrixXd& B = stf::basis(2);
    for (int j = 0; j < 5; ++j) {
        const double s11 = B(0, j), s12 = B(1, j), s22 = B(4, j);
        T(channel::S, S37::S + j) = s11 + 0.5 * s22;
        T(channel::S12, S37::S + j) = s12;
        T(channel::S22, S37::S + j) = s22;
    }
    return T;
}

MatrixXd stfFromChannel() {
    MatrixXd E = MatrixXd::Zero(S37::N13, 9);
    E(S37::RHO, channel::RHO) = 1;
    E(S37::THETA, channel::THETA) = 1;
    for (int r = 1; r <= 2; ++r) {
        const int off = r == 1 ? S37::V : S37::Q;
        const int c0 = r == 1 ? channel::V1 : channel::Q1;
        for (int a = 0; a < 2; ++a) {
            VectorXd full = VectorXd::Zero(3);
            full(a) = 1;
            E.block(off, c0 + a, 3, 1) = stf::coords(full, 1);
        }
    }
    auto tensor = [](double s11, double s12, double s22) {
        VectorXd full = VectorXd::Zero(9);
        full(0) = s11;
        full(1) = full(3) = s12;
        full(4) = s22;
        full(8) = -s11 - s22;
        return stf::coords(full, 2);
    };
    E.block(S37::S, channel::S, 5, 1) = tensor(1, 0, 0);
    E.block(S37::S, channel::S12, 5, 1) = tensor(0, 1, 0);
    E.block(S37::S, channel::S22, 5, 1) = tensor(-0.5, 0, 1);
    return E;
}

void checkKn(double kn) {
    if (!(kn > 0) || !std::isfinite(kn)) fail(ErrorKind::Domain, "Kn must be positive and finite");
}

} // namespace

SystemMatrices1D assembleChannelSystem(const ModelCoefficients& k, double kn) {
    checkKn(kn);
    k.checkInvariants();
    const Reduced13 t = template13(k.k, k.l1, k.l2);
    const MatrixXd T = channelFromStf(), E = stfFromChannel();
    SystemMatrices1D s;
    s.dim = 9;
    s.kn = kn;
    s.A0 = MatrixXd::Identity(9, 9);
    s.A1 = T * t.F * E;
    s.D = T * t.D * E;
    s.Lrel = T * t.R * E;
    // the in-plane subspace must be invariant under each operator
    const MatrixXd P = MatrixXd::Identity(S37::N13, S37::N13) - E * T;
    for (const MatrixXd* M : {&t.F, &t.D, &t.R})
        if ((P * (*M) * E).cwiseAbs().maxCoeff() > 1e-12)
            fail(ErrorKind::Numerical, "channel reduction leaks into out-of-plane moments");
    // clean round-off from the basis change
    for (MatrixXd* M : {&s.A1, &s.D, &s.Lrel}) *M = M->unaryExpr([](double v) { return std::abs(v) < 1e-14 ? 0.0 : v; });
    s.W = (VectorXd(9) << 1, 1.5, 1, 1, 0.4, 0.4, 1, 1, 0.75).finished();
    s.names = {"rho", "theta", "v1", "v2", "qbar1", "qbar2", "s", "sbar12", "sbar22"};
    s.conservative = {channel::RHO, channel::THETA, channel::V1, channel::V2};
    return s;
}

SystemMatrices1D restrictSystem(const SystemMatrices1D& s, const std::vector<int>& idx) {
    const int n = static_cast<int>(idx.size());
    SystemMatrices1D r;
    r.dim = n;
    r.kn = s.kn;
    r.W.resize(n);
    r.A0.resize(n, n);
    r.A1.resize(n, n);
    r.D.resize(n, n);
    r.Lrel.resize(n, n);
    for (int i = 0; i < n; ++i) {
        if (idx[i] < 0 || idx[i] >= s.dim) fail(ErrorKind::Domain, "restriction index out of range");
        r.W(i) = s.W(idx[i]);
        r.names.push_back(s.names[idx[i]]);
        for (int c : s.conservative)
            if (c == idx[i]) r.conservative.push_back(i);
        for (int j = 0; j < n; ++j) {
            r.A0(i, j) = s.A0(idx[i], idx[j]);
            r.A1(i, j) = s.A1(idx[i], idx[j]);
            r.D(i, j) = s.D(idx[i], idx[j]);
            r.Lrel(i, j) = s.Lrel(idx[i], idx[j]);
        }
    }
    return r;
}

SystemMatrices1D assemblePlanarTemperatureSystem(const ModelCoefficients& k, double kn, bool steady) {
    SystemMatrices1D s = restrictSystem(assembleChannelSystem(k, kn), channel::temperatureBlock());
    s.names = {"rho", "theta", "v", "qbar", "sbar"};
    if (steady) s.A0.setZero();
    return s;
}

VectorXd gradient(const VectorXd& x, const VectorXd& f) {
    const int n = static_cast<int>(x.size());
    if (n < 2) fail(ErrorKind::Domain, "gradient needs at least two nodes");
    if (f.size() != n) fail(ErrorKind::Domain, "gradient: size mismatch");
    VectorXd g(n);
    if (n == 2) {
        g.setConstant((f(1) - f(0)) / (x(1) - x(0)));
        return g;
    }
    // three-point Lagrange derivative at node j of the stencil (a, b, c)
    auto d3 = [&](int a, int b, int c, int j) {
        const double xa = x(a), xb = x(b), xc = x(c), xj = x(j);
        const double la = ((xj - xb) + (xj - xc)) / ((xa - xb) * (xa - xc));
        const double lb = ((xj - xa) + (xj - xc)) / ((xb - xa) * (xb - xc));
        const double lc = ((xj - xa) + (xj - xb)) / ((xc - xa) * (xc - xb));
        return la * f(a) + lb * f(b) + lc * f(c);
    };
    g(0) = d3(0, 1, 2, 0);
    for (int i = 1; i < n - 1; ++i) g(i) = d3(i - 1, i, i + 1, i);
    g(n - 1) = d3(n - 3, n - 2, n - 1, n - 1);
    return g;
}

PhysicalFluxes1D recoverStressHeat(const MomentField1D& f, const ModelCoefficients& k, double kn) {
    checkKn(kn);
    f.validate();
    using C = MomentField1D;
    auto col = [&](int c) { return VectorXd(f.u.col(c)); };
    auto d = [&](int c) { return gradient(f.x, col(c)); };
    PhysicalFluxes1D p;
    p.q2 = k[0] * col(C::Q2) - 1.5 * k[1] * kn * d(C::THETA) + 1.5 * k[2] * kn * d(C::S22);
    p.q1 = k[0] * col(C::Q1) + 1.5 * k[2] * kn * d(C::S12);
    p.sigma12 = k[5] * col(C::S12) - 0.5 * k[4] * kn * d(C::Q1) - 0.5 * k[3] * kn * d(C::V1);
    p.sigma22 = k[5] * col(C::S22) - 2.0 / 3.0 * k[4] * kn * d(C::Q2) - 2.0 / 3.0 * k[3] * kn * d(C::V2);
    return p;
}

double entropy(const MomentField1D& f) {
    f.validate();
    using C = MomentField1D;
    const int n = f.nodes();
    double h = 0;
    auto density = [&](int i) {
        auto u = f.u.row(i);
        const double s11 = u(C::S11), s22 = u(C::S22), s12 = u(C::S12);
        return 0.5 * (u(C::RHO) * u(C::RHO) + 1.5 * u(C::THETA) * u(C::THETA) + u(C::V1) * u(C::V1) +
                      u(C::V2) * u(C::V2) + 0.4 * (u(C::Q1) * u(C::Q1) + u(C::Q2) * u(C::Q2)) + s11 * s11 +
                      s22 * s22 + s11 * s22 + s12 * s12);
    };
    for (int i = 0; i + 1 < n; ++i) h += 0.5 * (f.x(i + 1) - f.x(i)) * (density(i) + density(i + 1));
    return h;
}

} // namespace r13
