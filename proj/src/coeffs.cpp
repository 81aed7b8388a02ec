#include "r13/coeffs.hpp"
#include "r13/quadrature.hpp"
#include "r13/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace r13 {

namespace {

const double kInf = std::numeric_limits<double>::infinity();

using quad::gaussLegendre;

double legendreP(int l, double x) {
    if (l == 0) return 1.0;
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= l; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

// isotropic kernel, integrand polynomial in cos(chi)
double rawMaxwell(int n, int l) {
    static std::vector<double> x, w;
    if (x.empty()) gaussLegendre(48, x, w);
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        double c = std::sqrt(0.5 * (1.0 + x[i]));
        double sn = std::sqrt(0.5 * (1.0 - x[i]));
        double f = std::pow(c, 2 * n + l) * legendreP(l, c) + std::pow(sn, 2 * n + l) * legendreP(l, sn) - 1.0;
        if (n == 0 && l == 0) f -= 1.0;
        s += w[i] * f;
    }
    return s;
}

double maxAbs(const VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

} // namespace

GasModel GasModel::ipl(double eta) {
    GasModel g;
    g.kind = Kind::InversePowerLaw;
    g.eta = eta;
    g.name = "ipl-" + etaString(eta);
    return g;
}

GasModel GasModel::custom(const std::string& name) {
    GasModel g;
    g.kind = Kind::Custom;
    g.eta = std::numeric_limits<double>::quiet_NaN();
    g.name = name;
    return g;
}

double GasModel::omega() const {
    if (kind != Kind::InversePowerLaw) fail(ErrorKind::Domain, "omega undefined for custom gas model " + name);
    if (std::isinf(eta)) return 0.5;
    if (!(eta > 1.0)) fail(ErrorKind::Domain, "omega undefined for eta <= 1");
    return 0.5 + 2.0 / (eta - 1.0);
}

std::string GasModel::label() const {
    return kind == Kind::Custom ? name : "eta=" + etaString(eta);
}

double parseEta(const std::string& s) {
    std::string t = s;
    std::transform(t.begin(), t.end(), t.begin(), ::tolower);
    if (t == "inf" || t == "infinity" || t == "hs" || t == "hard-sphere") return kInf;
    try {
        size_t pos = 0;
        double v = std::stod(t, &pos);
        if (pos != t.size()) throw std::invalid_argument(t);
        return v;
    } catch (const std::exception&) {
        fail(ErrorKind::Config, "cannot parse eta '" + s + "'");
    }
}

std::string etaString(double eta) {
    if (std::isinf(eta)) return "inf";
    std::ostringstream os;
    os << eta;
    return os.str();
}

double chiTilde(double chi) {
    if (chi < 0.0 || chi > 1.0) fail(ErrorKind::Domain, "accommodation coefficient must lie in [0,1]");
    return 2.0 * chi / (2.0 - chi);
}

std::optional<double> BCCoefficients::get(int id) const {
    auto it = m.find(id);
    if (it == m.end()) return std::nullopt;
    return it->second;
}

double BCCoefficients::at(int id) const {
    auto it = m.find(id);
    if (it == m.end()) fail(ErrorKind::Data, "boundary coefficient m" + std::to_string(id) + " is absent");
    return it->second;
}

bool ModelCoefficients::maxwellLike(double tol) const {
    for (int i : {1, 2, 3, 4, 10})
        if (std::abs(k[i]) > tol) return false;
    return true;
}

void ModelCoefficients::checkInvariants() const {
    if (k[6] < 0 || k[9] < 0 || l1 < 0 || l2 < 0)
        fail(ErrorKind::Numerical, "k6, k9, l1, l2 must be nonnegative");
    double lhs1 = std::pow(3.0 * k[2], 2) / 4.0, rhs1 = 1.5 * k[1] * 0.5 * k[10];
    double lhs2 = k[4] * k[4], rhs2 = k[3] * 24.0 / 25.0 * k[7];
    if (lhs1 > rhs1 * (1 + 1e-12) + 1e-300 || lhs2 > rhs2 * (1 + 1e-12) + 1e-300)
        fail(ErrorKind::Numerical, "Cauchy-Schwarz coefficient inequalities violated");
}

double maxwellEigenvalue(int n, int l) {
    static const double ref = rawMaxwell(0, 2);
    return -rawMaxwell(n, l) / ref;
}

CollisionMatrixSet maxwellCollisionSet(int N) {
    if (N < 4) fail(ErrorKind::Domain, "truncation N must be >= 4");
    CollisionMatrixSet s;
    s.N = N;
    for (int l = 0; l < 4; ++l) {
        s.a[l] = MatrixXd::Zero(N + 1, N + 1);
        for (int n = 0; n <= N; ++n) s.a[l](n, n) = maxwellEigenvalue(n, l);
    }
    // exact conservation zeros
    s.a[0](0, 0) = s.a[0](1, 1) = 0.0;
    s.a[1](0, 0) = 0.0;
    return s;
}

void CollisionMatrixSet::validate() const {
    if (N < 4) fail(ErrorKind::Data, "collision matrices: truncation N must be >= 4");
    for (int l = 0; l < 4; ++l) {
        const MatrixXd& m = a[l];
        if (m.rows() != N + 1 || m.cols() != N + 1)
            fail(ErrorKind::Data, "collision matrix a_" + std::to_string(l) + " has wrong size");
        double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
        if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
            fail(ErrorKind::Data, "collision matrix a_" + std::to_string(l) + " is not symmetric");
    }
    auto zeroRowCol = [&](int l, int idx) {
        if (a[l].row(idx).cwiseAbs().maxCoeff() > 0.0 || a[l].col(idx).cwiseAbs().maxCoeff() > 0.0)
            fail(ErrorKind::Data, "conservation zeros violated in a_" + std::to_string(l) + " row/col " + std::to_string(idx));
    };
    zeroRowCol(0, 0);
    zeroRowCol(0, 1);
    zeroRowCol(1, 0);
    for (int l = 0; l < 4; ++l) {
        int n0 = (l == 0) ? 2 : (l == 1 ? 1 : 0);
        MatrixXd sub = a[l].bottomRightCorner(N + 1 - n0, N + 1 - n0);
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (sub + sub.transpose()));
        double scale = es.eigenvalues().cwiseAbs().maxCoeff();
        if (es.eigenvalues().maxCoeff() >= -1e-12 * scale)
            fail(ErrorKind::Data, "collision matrix a_" + std::to_string(l) + " is not negative definite off the conservation kernel");
    }
}

CollisionMatrixSet readCollisionFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, "cannot open collision-matrix file " + path);
    CollisionMatrixSet s;
    s.N = -1;
    for (int blk = 0; blk < 4; ++blk) {
        int l = -1, N = -1;
        if (!(in >> l >> N)) fail(ErrorKind::Data, path + ": missing header for block " + std::to_string(blk));
        if (l != blk) fail(ErrorKind::Data, path + ": expected block l=" + std::to_string(blk));
        if (N < 4) fail(ErrorKind::Data, path + ": truncation N must be >= 4");
        if (s.N >= 0 && N != s.N) fail(ErrorKind::Data, path + ": inconsistent truncations across blocks");
        s.N = N;
        s.a[l] = MatrixXd(N + 1, N + 1);
        for (int i = 0; i <= N; ++i)
            for (int j = 0; j <= N; ++j)
                if (!(in >> s.a[l](i, j)))
                    fail(ErrorKind::Data, path + ": truncated matrix data in block l=" + std::to_string(l));
    }
    s.validate();
    return s;
}

void writeCollisionFile(const std::string& path, const CollisionMatrixSet& set) {
    std::ofstream out(path);
    if (!out) fail(ErrorKind::Io, "cannot write " + path);
    out << std::setprecision(17);
    for (int l = 0; l < 4; ++l) {
        if (l) out << "\n";
        out << l << " " << set.N << "\n";
        for (int i = 0; i <= set.N; ++i) {
            for (int j = 0; j <= set.N; ++j) out << (j ? " " : "") << set.a[l](i, j);
            out << "\n";
        }
    }
}

CollisionMatrixSet truncate(const CollisionMatrixSet& a, int N) {
    if (N > a.N || N < 4) fail(ErrorKind::Domain, "invalid truncation");
    CollisionMatrixSet s;
    s.N = N;
    for (int l = 0; l < 4; ++l) s.a[l] = a.a[l].topLeftCorner(N + 1, N + 1);
    return s;
}

double knConvert(double knbar, const GasModel& model) {
    if (!(knbar > 0.0)) fail(ErrorKind::Domain, "Knudsen number must be positive");
    double w = model.omega();
    return std::sqrt(M_PI / 2.0) * 15.0 * knbar / ((5.0 - 2.0 * w) * (7.0 - 2.0 * w));
}

MatrixXd submatrixInverse(const MatrixXd& al, int l, int n0) {
    if ((l == 0 && (n0 == 0 || n0 == 1)) || (l == 1 && n0 == 0))
        fail(ErrorKind::Domain, "b^(" + std::to_string(n0) + ")_" + std::to_string(l) +
                                    " does not exist (conservation kernel)");
    const int N = static_cast<int>(al.rows()) - 1;
    if (n0 > N) fail(ErrorKind::Domain, "n0 exceeds truncation");
    const int m = N + 1 - n0;
    MatrixXd sub = al.bottomRightCorner(m, m);
    Eigen::FullPivLU<MatrixXd> lu(sub);
    lu.setThreshold(1e-13);
    if (!lu.isInvertible())
        fail(ErrorKind::Numerical, "singular submatrix a_" + std::to_string(l) + " from n0=" + std::to_string(n0) +
                                       " at N=" + std::to_string(N));
    MatrixXd inv = lu.inverse();
    inv = 0.5 * (inv + inv.transpose());
    MatrixXd b = MatrixXd::Zero(N + 1, N + 1);
    b.bottomRightCorner(m, m) = inv;
    return b;
}

InverseSet computeInverses(const CollisionMatrixSet& a) {
    InverseSet b;
    b.b1_1 = submatrixInverse(a.a[1], 1, 1);
    b.b2_0 = submatrixInverse(a.a[2], 2, 0);
    b.b0_2 = submatrixInverse(a.a[0], 0, 2);
    b.b1_2 = submatrixInverse(a.a[1], 1, 2);
    b.b2_1 = submatrixInverse(a.a[2], 2, 1);
    b.b3_0 = submatrixInverse(a.a[3], 3, 0);
    return b;
}

BetaGamma computeBetaGamma(const InverseSet& b) {
    const int N = static_cast<int>(b.b1_1.rows()) - 1;
    BetaGamma r;
    r.beta1 = VectorXd::Zero(N + 1);
    r.beta2 = VectorXd::Zero(N + 1);
    for (int n = 1; n <= N; ++n) r.beta1(n) = b.b1_1(1, n);
    for (int n = 0; n <= N; ++n) r.beta2(n) = b.b2_0(0, n);
    const double b111 = r.beta1(1), b200 = r.beta2(0);
    if (b111 == 0.0 || b200 == 0.0) fail(ErrorKind::Numerical, "degenerate transport: b_111 or b_200 vanishes");

    auto B1 = [&](int n) { return (n >= 1 && n <= N) ? r.beta1(n) : 0.0; };
    auto B2 = [&](int n) { return (n >= 0 && n <= N) ? r.beta2(n) : 0.0; };
    GammaArrays& g = r.gamma;
    g.g0 = g.gt1 = g.gs1 = g.gt2 = g.gs2 = g.g3 = VectorXd::Zero(N + 1);
    for (int n = 2; n <= N; ++n) {
        double s0 = 0, st = 0, ss = 0;
        for (int np = 2; np <= N; ++np) {
            s0 += b.b0_2(n, np) * (std::sqrt(2.0 * np + 3) * B1(np) - std::sqrt(2.0 * np) * B1(np - 1));
            st += b.b1_2(n, np) * B1(np);
            ss += b.b1_2(n, np) * (std::sqrt(2.0 * np + 5) * B2(np) - std::sqrt(2.0 * np) * B2(np - 1));
        }
        g.g0(n) = s0 / b111;
        g.gt1(n) = st / b111;
        g.gs1(n) = ss / b200;
    }
    for (int n = 1; n <= N; ++n) {
        double st = 0, ss = 0;
        for (int np = 1; np <= N; ++np) {
            st += b.b2_1(n, np) * B2(np);
            ss += b.b2_1(n, np) * (std::sqrt(2.0 * np + 5) * B1(np) - std::sqrt(2.0 * (np + 1)) * B1(np + 1));
        }
        g.gt2(n) = st / b200;
        g.gs2(n) = 0.4 * ss / b111;
    }
    for (int n = 0; n <= N; ++n) {
        double s = 0;
        for (int np = 0; np <= N; ++np)
            s += b.b3_0(n, np) * (std::sqrt(2.0 * np + 7) * B2(np) - std::sqrt(2.0 * (np + 1)) * B2(np + 1));
        g.g3(n) = 3.0 / 7.0 * s / b200;
    }
    return r;
}

DArrays computeD(const GammaArrays& g) {
    const int N = static_cast<int>(g.g0.size()) - 1;
    DArrays d;
    d.d02 = d.d12 = d.d13 = d.d21 = d.d22 = d.d30 = VectorXd::Zero(N + 1);
    if (g.g0(2) == 0.0) fail(ErrorKind::Numerical, "degenerate closure: gamma_0^2 vanishes");
    if (g.g3(0) == 0.0) fail(ErrorKind::Numerical, "degenerate closure: gamma_3^0 vanishes");
    for (int n = 2; n <= N; ++n) d.d02(n) = g.g0(n) / g.g0(2);
    for (int n = 0; n <= N; ++n) d.d30(n) = g.g3(n) / g.g3(0);

    const double ref = std::max({maxAbs(g.g0), maxAbs(g.g3), 1e-300});
    // vector block, anchors n = 2, 3
    {
        double big = std::max(maxAbs(g.gt1.tail(N - 1)), maxAbs(g.gs1.tail(N - 1)));
        double off = N > 3 ? std::max(maxAbs(g.gt1.tail(N - 3)), maxAbs(g.gs1.tail(N - 3))) : 0.0;
        double den = g.gs1(3) * g.gt1(2) - g.gs1(2) * g.gt1(3);
        if (off <= 1e-14 * ref && std::abs(den) <= 1e-12 * big * big) {
            // relations reduce to the anchors themselves (Maxwell limit)
            d.d12(2) = 1.0;
            d.d13(3) = 1.0;
        } else {
            if (std::abs(den) <= 1e-12 * big * big)
                fail(ErrorKind::Numerical, "degenerate closure: vector-block denominator vanishes");
            for (int n = 2; n <= N; ++n) {
                d.d12(n) = (g.gt1(n) * g.gs1(3) - g.gs1(n) * g.gt1(3)) / den;
                d.d13(n) = (g.gs1(n) * g.gt1(2) - g.gt1(n) * g.gs1(2)) / den;
            }
        }
    }
    // tensor block, anchors n = 1, 2
    {
        double big = std::max(maxAbs(g.gt2.tail(N)), maxAbs(g.gs2.tail(N)));
        double off = N > 2 ? std::max(maxAbs(g.gt2.tail(N - 2)), maxAbs(g.gs2.tail(N - 2))) : 0.0;
        double den = g.gs2(2) * g.gt2(1) - g.gs2(1) * g.gt2(2);
        if (off <= 1e-14 * ref && std::abs(den) <= 1e-12 * big * big) {
            d.d21(1) = 1.0;
            d.d22(2) = 1.0;
        } else {
            if (std::abs(den) <= 1e-12 * big * big)
                fail(ErrorKind::Numerical, "degenerate closure: tensor-block denominator vanishes");
            for (int n = 1; n <= N; ++n) {
                d.d21(n) = (g.gt2(n) * g.gs2(2) - g.gs2(n) * g.gt2(2)) / den;
                d.d22(n) = (g.gs2(n) * g.gt2(1) - g.gt2(n) * g.gs2(1)) / den;
            }
        }
    }
    return d;
}

namespace {

// two-dimensional solution space of the second-order linear relations; returns (first, second) full vectors
std::pair<VectorXd, VectorXd> secondOrderPair(const VectorXd& beta, int base, const VectorXd& dA, const VectorXd& dB,
                                              const char* what) {
    // base = 1 (vector: anchors 2,3, psi^1 slot) or 0 (tensor: anchors 1,2, psi^0 slot)
    const int N = static_cast<int>(beta.size()) - 1;
    const int a0 = base + 1, a1 = base + 2;
    const int nx = N - base; // unknowns x_{a0..N}
    VectorXd r = beta / beta(base);
    MatrixXd M = MatrixXd::Zero(N - a1, nx);
    for (int n = a1 + 1; n <= N; ++n) {
        int row = n - a1 - 1;
        double kap = r(n) - r(a0) * dA(n) - r(a1) * dB(n);
        M(row, n - a0) += 1.0;
        M(row, 0) -= dA(n);
        M(row, 1) -= dB(n);
        for (int np = a0; np <= N; ++np) M(row, np - a0) += kap * r(np);
    }
    Eigen::JacobiSVD<MatrixXd> svd(M, Eigen::ComputeFullV);
    const VectorXd& sv = svd.singularValues();
    double smax = sv.size() ? sv(0) : 1.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-10 * std::max(smax, 1.0)) ++rank;
    if (nx - rank != 2)
        fail(ErrorKind::Numerical, std::string("rank error: solution space for ") + what + " has dimension " +
                                       std::to_string(nx - rank) + " at N=" + std::to_string(N));
    MatrixXd K = svd.matrixV().rightCols(2);
    auto full = [&](const VectorXd& x) {
        VectorXd f = VectorXd::Zero(N + 1);
        double s = 0;
        for (int n = a0; n <= N; ++n) {
            f(n) = x(n - a0);
            s += r(n) * x(n - a0);
        }
        f(base) = -s;
        return f;
    };
    VectorXd ya = K.col(0), yb = K.col(1);
    VectorXd z = ya * yb(1) - yb * ya(1); // second anchor coefficient vanishes
    if (z.norm() < 1e-12) fail(ErrorKind::Numerical, std::string("pivot error for ") + what);
    VectorXd F1 = full(z);
    F1 /= F1.norm();
    if (std::abs(F1(a0)) < 1e-12) fail(ErrorKind::Numerical, std::string("pivot error: first anchor vanishes for ") + what);
    if (F1(a0) < 0) F1 = -F1;
    VectorXd y2 = (std::abs(ya(1)) >= std::abs(yb(1))) ? ya : yb;
    VectorXd F2 = full(y2);
    F2 -= F2.dot(F1) * F1;
    if (F2.norm() < 1e-12) fail(ErrorKind::Numerical, std::string("pivot error: dependent pair for ") + what);
    F2 /= F2.norm();
    if (std::abs(F2(a1)) < 1e-12) fail(ErrorKind::Numerical, std::string("pivot error: second anchor vanishes for ") + what);
    if (F2(a1) < 0) F2 = -F2;
    F1(a1) = 0.0; // exact by construction
    return {F1, F2};
}

} // namespace

CArrays computeC(const VectorXd& beta1, const VectorXd& beta2, const DArrays& d) {
    const int N = static_cast<int>(beta1.size()) - 1;
    if (beta1(1) == 0.0 || beta2(0) == 0.0) fail(ErrorKind::Numerical, "degenerate transport: beta_1^1 or beta_2^0 vanishes");
    CArrays c;
    VectorXd v = VectorXd::Zero(N + 1);
    v.tail(N) = beta1.tail(N) / beta1(1);
    c.c11 = -std::sqrt(7.5) * v / v.norm();
    VectorXd w = beta2 / beta2(0);
    c.c20 = std::sqrt(15.0) * w / w.norm();
    c.c02 = d.d02;
    c.c02.head(2).setZero();
    c.c02 /= c.c02.norm();
    if (c.c02(2) < 0) c.c02 = -c.c02;
    c.c30 = d.d30 / d.d30.norm();
    if (c.c30(0) < 0) c.c30 = -c.c30;
    auto p1 = secondOrderPair(beta1, 1, d.d12, d.d13, "phi_i^2/phi_i^3");
    c.c12 = p1.first;
    c.c13 = p1.second;
    auto p2 = secondOrderPair(beta2, 0, d.d21, d.d22, "phi_ij^1/phi_ij^2");
    c.c21 = p2.first;
    c.c22 = p2.second;
    return c;
}

VectorXd CArrays::eq() const { return -c11 / std::sqrt(7.5); }
VectorXd CArrays::es() const { return c20 / std::sqrt(15.0); }

AScalars computeA(const CArrays& c) {
    const int N = static_cast<int>(c.c11.size()) - 1;
    auto at = [&](const VectorXd& v, int n) { return (n >= 0 && n <= N) ? v(n) : 0.0; };
    auto sq = [](double x) { return std::sqrt(x); };
    // sum_{n>=n0} u^n (sqrt(2n+p) w^n - sqrt(2 shift) w^{n+-1})
    auto down = [&](const VectorXd& u, const VectorXd& w, int n0, int p) {
        double s = 0;
        for (int n = n0; n <= N; ++n) s += at(u, n) * (sq(2.0 * n + p) * at(w, n) - sq(2.0 * n) * at(w, n - 1));
        return s;
    };
    auto up = [&](const VectorXd& u, const VectorXd& w, int n0, int p) {
        double s = 0;
        for (int n = n0; n <= N; ++n) s += at(u, n) * (sq(2.0 * n + p) * at(w, n) - sq(2.0 * (n + 1)) * at(w, n + 1));
        return s;
    };
    const VectorXd e1 = c.eq(), e2 = c.es();
    AScalars A;
    A.A45 = 3.0 * down(e1, e2, 1, 5);
    A.A46 = up(e1, c.c02, 1, 3);
    A.A49 = 3.0 * down(e1, c.c21, 1, 5);
    A.A4_10 = 3.0 * down(e1, c.c22, 1, 5);
    A.A57 = 3.0 * up(e2, c.c12, 0, 5);
    A.A58 = 3.0 * up(e2, c.c13, 0, 5);
    A.A5_11 = 7.5 * down(e2, c.c30, 0, 7);
    A.A67 = down(c.c02, c.c12, 2, 3);
    A.A68 = down(c.c02, c.c13, 2, 3);
    A.A79 = 3.0 * down(c.c12, c.c21, 1, 5);
    A.A7_10 = 3.0 * down(c.c12, c.c22, 1, 5);
    A.A89 = 3.0 * down(c.c13, c.c21, 1, 5);
    A.A8_10 = 3.0 * down(c.c13, c.c22, 1, 5);
    A.A9_11 = 7.5 * down(c.c21, c.c30, 0, 7);
    A.A10_11 = 7.5 * down(c.c22, c.c30, 0, 7);
    return A;
}

LBlocks computeLBlocks(const CollisionMatrixSet& a, const CArrays& c) {
    const int N = a.N;
    for (const VectorXd* v : {&c.c11, &c.c20, &c.c02, &c.c12, &c.c13, &c.c21, &c.c22, &c.c30})
        if (v->size() != N + 1) fail(ErrorKind::Domain, "dimension error: c arrays and collision matrices have different truncations");
    const double g[4] = {1.0, 3.0, 7.5, 17.5};
    LBlocks L;
    L.L0_22 = g[0] * c.c02.dot(a.a[0] * c.c02);
    const VectorXd v1[3] = {c.eq(), c.c12, c.c13};
    const VectorXd v2[3] = {c.es(), c.c21, c.c22};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            L.L1(i, j) = g[1] * v1[i].dot(a.a[1] * v1[j]);
            L.L2(i, j) = g[2] * v2[i].dot(a.a[2] * v2[j]);
        }
    L.L3_00 = g[3] * c.c30.dot(a.a[3] * c.c30);
    return L;
}

std::array<double, 6> closedFormK(const BasisCoefficients& b) {
    Eigen::Matrix2d M1 = b.L.L1.bottomRightCorner<2, 2>();
    Eigen::Matrix2d M2 = b.L.L2.bottomRightCorner<2, 2>();
    Eigen::Vector2d c1(b.c.c12(1), b.c.c13(1));
    Eigen::Vector2d a5(b.A.A57, b.A.A58);
    Eigen::Vector2d c2(b.c.c21(0), b.c.c22(0));
    Eigen::Vector2d a4(b.A.A49, b.A.A4_10);
    Eigen::Matrix2d M1i = M1.inverse(), M2i = M2.inverse();
    std::array<double, 6> k;
    k[0] = -5.0 * c1.dot(M1i * c1);
    k[1] = -std::sqrt(2.0) / 3.0 * c1.dot(M1i * a5);
    k[2] = -15.0 * c2.dot(M2i * c2);
    k[3] = std::sqrt(2.0) * a4.dot(M2i * c2);
    k[4] = -5.0 / 36.0 * a4.dot(M2i * a4);
    k[5] = -2.0 / 15.0 * a5.dot(M1i * a5);
    return k;
}

std::pair<ModelCoefficients, BasisCoefficients> derive(const CollisionMatrixSet& a) {
    auto stage = [](const char* name, auto&& fn) {
        try {
            return fn();
        } catch (const Error& e) {
            throw Error(e.kind(), std::string(name) + ": " + e.what());
        }
    };
    stage("validate", [&] { a.validate(); return 0; });
    BasisCoefficients basis;
    basis.N = a.N;
    InverseSet inv = stage("submatrix_inverse", [&] { return computeInverses(a); });
    BetaGamma bg = stage("compute_beta_gamma", [&] { return computeBetaGamma(inv); });
    basis.beta1 = bg.beta1;
    basis.beta2 = bg.beta2;
    basis.gamma = bg.gamma;
    basis.d = stage("compute_d", [&] { return computeD(basis.gamma); });
    basis.c = stage("compute_c", [&] { return computeC(basis.beta1, basis.beta2, basis.d); });
    basis.A = stage("compute_A", [&] { return computeA(basis.c); });
    basis.L = stage("compute_L_blocks", [&] { return computeLBlocks(a, basis.c); });
    ModelCoefficients mc = stage("compute_model_coefficients", [&] { return computeModelCoefficients(basis); });
    return {mc, basis};
}

} // namespace r13
