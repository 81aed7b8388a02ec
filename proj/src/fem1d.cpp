// P1 Galerkin / Crank-Nicolson solver for the channel system with Robin-type wall rows.
#include "r13/fem1d.hpp"
#include "r13/errors.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <set>

extern "C" {
void dgbtrf_(const int* m, const int* n, const int* kl, const int* ku, double* ab, const int* ldab, int* ipiv,
             int* info);
void dgbtrs_(const char* trans, const int* n, const int* kl, const int* ku, const int* nrhs, const double* ab,
             const int* ldab, const int* ipiv, double* b, const int* ldb, int* info);
}

namespace r13 {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

BcMode parseBcMode(const std::string& s) {
    if (s == "onsager") return BcMode::Onsager;
    if (s == "modified") return BcMode::Modified;
    fail(ErrorKind::Config, "unknown bc_mode '" + s + "' (expected onsager or modified)");
}

const char* bcModeName(BcMode m) { return m == BcMode::Onsager ? "onsager" : "modified"; }

FemConfig FemConfig::couette() {
    FemConfig c;
    c.vLeft = -0.2;
    c.vRight = 0.2;
    return c;
}

FemConfig FemConfig::fourier() {
    FemConfig c;
    c.thetaRight = 0.2;
    return c;
}

double FemConfig::resolvedKn() const {
    if (kn.has_value() == knbar.has_value()) fail(ErrorKind::Config, "exactly one of kn and knbar must be given");
    if (kn) {
        if (!(*kn > 0)) fail(ErrorKind::Config, "kn must be positive");
        return *kn;
    }
    if (!(*knbar > 0)) fail(ErrorKind::Config, "knbar must be positive");
    return knConvert(*knbar, GasModel::ipl(eta));
}

int FemConfig::nodes() const { return static_cast<int>(std::lround(1.0 / h)) + 1; }
int FemConfig::steps() const { return static_cast<int>(std::lround(tEnd / dt)); }

void FemConfig::validate() const {
    if (!(h > 0) || !(h <= 0.5)) fail(ErrorKind::Config, "mesh.h must lie in (0, 1/2]");
    if (std::abs((nodes() - 1) * h - 1.0) > 1e-9) fail(ErrorKind::Config, "mesh.h must divide the unit channel width");
    if (!(dt > 0)) fail(ErrorKind::Config, "time.dt must be positive");
    if (!(tEnd > 0)) fail(ErrorKind::Config, "time.t_end must be positive");
    if (!(chi > 0 && chi <= 1)) fail(ErrorKind::Config, "model.chi must lie in (0, 1]");
    if (!(eta > 4)) fail(ErrorKind::Config, "model.eta must exceed 4");
    for (double t : snapshots)
        if (!(t >= 0)) fail(ErrorKind::Config, "snapshot times must be non-negative");
    if (steadyTol < 0) fail(ErrorKind::Config, "steady tolerance must be non-negative");
    resolvedKn();
}

std::pair<ModelCoefficients, BCCoefficients> loadRunCoefficients(double eta, double chi, BcMode mode) {
    const GasModel g = GasModel::ipl(eta);
    auto res = loadBuiltin(g, chi);
    // tabulated m are the layer-free ones; they coincide with the plain Onsager set for Maxwell molecules
    if (mode == BcMode::Onsager && !g.isMaxwell())
        fail(ErrorKind::Data, "unmodified boundary coefficients are not tabulated for eta = " + etaString(eta));
    return res;
}

namespace {

// wall rows as a Robin map for the diffusive flux Kn W D u':
// u'_F = Rd_F^{-1} (Rw w - Rt u_b - Rd_O u'_O), so the flux is T (Rw w - Rt u_b) + G u'_O with
// T = Kn W D_F Rd_F^{-1}, G = Kn W D_O - T Rd_O; u'_O (normal velocity) comes from the wall element
struct WallClosure {
    MatrixXd T, G, Rt, Rw;
    std::vector<int> F, O;
};

WallClosure wallClosure(const SystemMatrices1D& sys, const BCAssembly1D& bc) {
    const int nc = sys.dim;
    if (bc.Rt.cols() != nc || bc.Rd.cols() != nc)
        fail(ErrorKind::Numerical, "formulation error: boundary rows do not match the system size");
    const std::set<int> ess(bc.essential.begin(), bc.essential.end());
    WallClosure w;
    for (int j = 0; j < nc; ++j) {
        const bool inD = sys.D.col(j).cwiseAbs().maxCoeff() > 0;
        const bool inRd = bc.Rd.col(j).cwiseAbs().maxCoeff() > 0;
        if (inD && !ess.count(j)) w.F.push_back(j);
        else if (inD || inRd) w.O.push_back(j);
    }
    const int nr = bc.rows(), nf = static_cast<int>(w.F.size());
    if (nr != nf)
        fail(ErrorKind::Numerical, "formulation error: " + std::to_string(nr) + " boundary rows for " +
                                       std::to_string(nf) + " boundary flux terms");
    MatrixXd RdF(nr, nf), WDF(nc, nf);
    for (int k = 0; k < nf; ++k) {
        RdF.col(k) = bc.Rd.col(w.F[k]);
        WDF.col(k) = sys.W.asDiagonal() * sys.D.col(w.F[k]);
    }
    Eigen::FullPivLU<MatrixXd> lu(RdF);
    if (!lu.isInvertible()) fail(ErrorKind::Numerical, "formulation error: boundary rows do not determine the wall fluxes");
    w.T = sys.kn * WDF * lu.inverse();
    w.Rt = bc.Rt;
    w.Rw = bc.Rw;
    w.G = MatrixXd::Zero(nc, nc);
    for (int j : w.O) w.G.col(j) = sys.kn * sys.W.asDiagonal() * sys.D.col(j) - w.T * bc.Rd.col(j);
    return w;
}

int findName(const SystemMatrices1D& s, std::initializer_list<const char*> names) {
    for (int i = 0; i < s.dim; ++i)
        for (const char* n : names)
            if (s.names[i] == n) return i;
    return -1;
}

} // namespace

FemOperators assembleFem(const SystemMatrices1D& sys, const BCAssembly1D& left, const BCAssembly1D& right,
                         const VectorXd& x, const Eigen::Vector2d& wallLeft, const Eigen::Vector2d& wallRight) {
    const int n = static_cast<int>(x.size()), nc = sys.dim;
    if (n < 3) fail(ErrorKind::Domain, "the mesh needs at least three nodes");
    for (int i = 0; i + 1 < n; ++i)
        if (!(x(i + 1) > x(i))) fail(ErrorKind::Domain, "mesh nodes must be strictly increasing");
    if (left.side != -1 || right.side != 1) fail(ErrorKind::Domain, "boundary rows are attached to the wrong walls");

    FemOperators ops;
    ops.x = x;
    ops.nc = nc;
    ops.sys = sys;
    const MatrixXd W = sys.W.asDiagonal();
    const MatrixXd WA0 = W * sys.A0, WA1 = W * sys.A1, WD = sys.kn * W * sys.D, WL = W * sys.Lrel / sys.kn;
    std::vector<Triplet> tm, tk;
    auto addBlock = [&](std::vector<Triplet>& t, int a, int b, const MatrixXd& B, double f) {
        for (int i = 0; i < nc; ++i)
            for (int j = 0; j < nc; ++j)
                if (B(i, j) != 0.0) t.emplace_back(a * nc + i, b * nc + j, f * B(i, j));
    };
    for (int e = 0; e + 1 < n; ++e) {
        const double h = x(e + 1) - x(e);
        const int nd[2] = {e, e + 1};
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                const double mass = h / 6.0 * (a == b ? 2.0 : 1.0);
                const double conv = b == 1 ? 0.5 : -0.5; // int phi_a phi_b'
                const double stiff = (a == b ? 1.0 : -1.0) / h;
                addBlock(tm, nd[a], nd[b], WA0, mass);
                addBlock(tk, nd[a], nd[b], WA1, conv);
                addBlock(tk, nd[a], nd[b], WD, stiff);
                addBlock(tk, nd[a], nd[b], WL, -mass);
            }
    }
    ops.g = VectorXd::Zero(n * nc);
    for (const BCAssembly1D* bc : {&left, &right}) {
        const WallClosure w = wallClosure(sys, *bc);
        const int s = bc->side, b = s < 0 ? 0 : n - 1, p = s < 0 ? 1 : n - 2;
        const double h = std::abs(x(b) - x(p));
        // the outward flux s * (...) enters the right-hand side; u' = s (u_b - u_p) / h
        addBlock(tk, b, b, w.T * w.Rt, s);
        addBlock(tk, b, b, w.G, -1.0 / h);
        addBlock(tk, b, p, w.G, 1.0 / h);
        const Eigen::Vector2d wall = s < 0 ? wallLeft : wallRight;
        ops.g.segment(b * nc, nc) = s * w.T * (w.Rw * wall);
        for (int c : bc->essential) ops.essential.push_back(b * nc + c);
    }
    std::sort(ops.essential.begin(), ops.essential.end());
    ops.M.resize(n * nc, n * nc);
    ops.K.resize(n * nc, n * nc);
    ops.M.setFromTriplets(tm.begin(), tm.end());
    ops.K.setFromTriplets(tk.begin(), tk.end());
    ops.M.prune(0.0);
    ops.K.prune(0.0);
    ops.rhoComp = findName(sys, {"rho"});
    ops.normalComp = left.essential.empty() ? -1 : left.essential.front();
    return ops;
}

BandedLU::BandedLU(const SpMat& A) {
    n_ = static_cast<int>(A.rows());
    if (A.cols() != n_) fail(ErrorKind::Numerical, "banded solver needs a square matrix");
    for (int j = 0; j < A.outerSize(); ++j)
        for (SpMat::InnerIterator it(A, j); it; ++it) {
            const int i = static_cast<int>(it.row()), c = static_cast<int>(it.col());
            kl_ = std::max(kl_, i - c);
            ku_ = std::max(ku_, c - i);
        }
    ldab_ = 2 * kl_ + ku_ + 1;
    ab_.assign(static_cast<std::size_t>(ldab_) * n_, 0.0);
    for (int j = 0; j < A.outerSize(); ++j)
        for (SpMat::InnerIterator it(A, j); it; ++it) {
            const int i = static_cast<int>(it.row()), c = static_cast<int>(it.col());
            ab_[static_cast<std::size_t>(c) * ldab_ + kl_ + ku_ + i - c] += it.value();
        }
    ipiv_.resize(n_);
    int info = 0;
    dgbtrf_(&n_, &n_, &kl_, &ku_, ab_.data(), &ldab_, ipiv_.data(), &info);
    if (info != 0) fail(ErrorKind::Numerical, "singular banded matrix (pivot " + std::to_string(info) + ")");
}

VectorXd BandedLU::solve(const VectorXd& b) const {
    if (b.size() != n_) fail(ErrorKind::Numerical, "banded solve: size mismatch");
    VectorXd x = b;
    const int nrhs = 1;
    int info = 0;
    const char trans = 'N';
    dgbtrs_(&trans, &n_, &kl_, &ku_, &nrhs, ab_.data(), &ldab_, ipiv_.data(), x.data(), &n_, &info);
    if (info != 0) fail(ErrorKind::Numerical, "banded solve failed");
    return x;
}

namespace {

// rows of `dofs` replaced by identity rows
SpMat replaceRows(const SpMat& A, const std::vector<int>& dofs) {
    std::vector<char> mask(A.rows(), 0);
    for (int d : dofs) mask[d] = 1;
    std::vector<Triplet> t;
    for (int j = 0; j < A.outerSize(); ++j)
        for (SpMat::InnerIterator it(A, j); it; ++it)
            if (!mask[it.row()]) t.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    for (int d : dofs) t.emplace_back(d, d, 1.0);
    SpMat r(A.rows(), A.cols());
    r.setFromTriplets(t.begin(), t.end());
    return r;
}

} // namespace

CrankNicolson::CrankNicolson(const FemOperators& ops, double dt) : ops_(&ops), dt_(dt) {
    if (!(dt > 0)) fail(ErrorKind::Domain, "time step must be positive");
    const SpMat A = ops.M + 0.5 * dt * ops.K;
    B_ = ops.M - 0.5 * dt * ops.K;
    lu_ = BandedLU(replaceRows(A, ops.essential));
}

VectorXd CrankNicolson::step(const VectorXd& u) const {
    VectorXd rhs = B_ * u + dt_ * ops_->g;
    for (int d : ops_->essential) rhs(d) = 0.0;
    return lu_.solve(rhs);
}

double discreteEnergy(const FemOperators& ops, const VectorXd& u) { return 0.5 * u.dot(ops.M * u); }

SteadyResidual::SteadyResidual(const FemOperators& ops) : ops_(&ops), mass_(replaceRows(ops.M, ops.essential)) {}

double SteadyResidual::operator()(const VectorXd& u) const {
    VectorXd z = ops_->g - ops_->K * u;
    for (int d : ops_->essential) z(d) = 0.0;
    const VectorXd r = mass_.solve(z);
    return std::sqrt(std::max(0.0, r.dot(ops_->M * r)));
}

VectorXd densityFromMomentum(const FemOperators& ops, const VectorXd& u) {
    const int n = static_cast<int>(ops.x.size()), r = ops.rhoComp, v = ops.normalComp;
    if (r < 0 || v < 0) fail(ErrorKind::Domain, "density recovery needs density and normal velocity components");
    // interior normal-momentum rows fix rho up to a constant and a checkerboard; close with
    // zero mean and a vanishing alternating sum of second differences
    VectorXd u0 = u;
    for (int i = 0; i < n; ++i) u0(ops.dof(i, r)) = 0.0;
    const VectorXd rhs = ops.g - ops.K * u0;
    std::vector<int> rowOf(ops.size(), -1);
    for (int i = 1; i + 1 < n; ++i) rowOf[ops.dof(i, v)] = i - 1;
    std::vector<Triplet> t;
    VectorXd b = VectorXd::Zero(n);
    for (int i = 1; i + 1 < n; ++i) b(i - 1) = rhs(ops.dof(i, v));
    for (int j = 0; j < n; ++j)
        for (SpMat::InnerIterator it(ops.K, ops.dof(j, r)); it; ++it)
            if (rowOf[it.row()] >= 0) t.emplace_back(rowOf[it.row()], j, it.value());
    const double len = ops.x(n - 1) - ops.x(0);
    for (int i = 0; i + 1 < n; ++i) {
        const double w = 0.5 * (ops.x(i + 1) - ops.x(i)) / len;
        t.emplace_back(n - 2, i, w);
        t.emplace_back(n - 2, i + 1, w);
    }
    for (int i = 1; i + 1 < n; ++i) {
        const double sgn = i % 2 ? -1.0 : 1.0;
        t.emplace_back(n - 1, i - 1, sgn);
        t.emplace_back(n - 1, i, -2.0 * sgn);
        t.emplace_back(n - 1, i + 1, sgn);
    }
    SpMat A(n, n);
    A.setFromTriplets(t.begin(), t.end());
    Eigen::SparseLU<SpMat> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success) fail(ErrorKind::Numerical, "normal momentum rows do not determine the density");
    return lu.solve(b);
}

VectorXd steadySolveFem(const FemOperators& ops) {
    const int n = static_cast<int>(ops.x.size()), nc = ops.nc;
    if (ops.rhoComp < 0 || ops.normalComp < 0) fail(ErrorKind::Domain, "steady solve needs density and normal velocity");
    std::vector<int> map(n * nc, -1), keep;
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < nc; ++c)
            if (c != ops.rhoComp && c != ops.normalComp) {
                map[i * nc + c] = static_cast<int>(keep.size());
                keep.push_back(i * nc + c);
            }
    const int m = static_cast<int>(keep.size());
    std::vector<Triplet> t;
    for (int j = 0; j < ops.K.outerSize(); ++j)
        for (SpMat::InnerIterator it(ops.K, j); it; ++it) {
            const int r = map[it.row()], c = map[it.col()];
            if (r >= 0 && c >= 0) t.emplace_back(r, c, it.value());
        }
    SpMat Ks(m, m);
    Ks.setFromTriplets(t.begin(), t.end());
    // components without diffusion enter only through centred differences; their checkerboards are
    // exact null vectors (Maxwell theta and v1). Bordering removes them with a constraint on the
    // alternating sum of second differences, which is O(h^2) for smooth profiles.
    const double kmax = VectorXd(Ks.coeffs()).cwiseAbs().maxCoeff();
    std::vector<VectorXd> nulls, constraints;
    for (int c = 0; c < nc; ++c) {
        if (c == ops.rhoComp || c == ops.normalComp) continue;
        VectorXd z = VectorXd::Zero(m), y = VectorXd::Zero(m);
        for (int i = 0; i < n; ++i) z(map[i * nc + c]) = i % 2 ? -1.0 : 1.0;
        if ((Ks * z).cwiseAbs().maxCoeff() > 1e-12 * kmax) continue;
        for (int i = 1; i + 1 < n; ++i) {
            const double sgn = i % 2 ? -1.0 : 1.0;
            y(map[(i - 1) * nc + c]) += sgn;
            y(map[i * nc + c]) -= 2.0 * sgn;
            y(map[(i + 1) * nc + c]) += sgn;
        }
        nulls.push_back(z / z.norm());
        constraints.push_back(y / y.norm());
    }
    const int nb = static_cast<int>(nulls.size());
    for (int k = 0; k < nb; ++k)
        for (int i = 0; i < m; ++i) {
            if (nulls[k](i) != 0.0) t.emplace_back(i, m + k, nulls[k](i));
            if (constraints[k](i) != 0.0) t.emplace_back(m + k, i, constraints[k](i));
        }
    SpMat Kb(m + nb, m + nb);
    Kb.setFromTriplets(t.begin(), t.end());
    VectorXd gs = VectorXd::Zero(m + nb);
    for (int k = 0; k < m; ++k) gs(k) = ops.g(keep[k]);
    Eigen::SparseLU<SpMat> lu;
    lu.compute(Kb);
    if (lu.info() != Eigen::Success) fail(ErrorKind::Numerical, "steady FEM system is singular");
    const VectorXd us = lu.solve(gs);
    if (nb > 0 && us.tail(nb).cwiseAbs().maxCoeff() > 1e-8 * std::max(1.0, gs.cwiseAbs().maxCoeff()))
        fail(ErrorKind::Numerical, "steady FEM system is inconsistent with its null space");
    VectorXd u = VectorXd::Zero(n * nc);
    for (int k = 0; k < m; ++k) u(keep[k]) = us(k);
    const VectorXd rho = densityFromMomentum(ops, u);
    for (int i = 0; i < n; ++i) u(i * nc + ops.rhoComp) = rho(i);
    return u;
}

MomentField1D toField(const FemOperators& ops, const VectorXd& u) {
    if (ops.nc != 9) fail(ErrorKind::Domain, "field conversion needs the channel system");
    MomentField1D f = MomentField1D::zeros(ops.x);
    for (int i = 0; i < f.nodes(); ++i)
        f.u.row(i) = channel::fromSystem(u.segment<9>(i * 9)).transpose();
    return f;
}

VectorXd fromField(const FemOperators& ops, const MomentField1D& f) {
    if (ops.nc != 9) fail(ErrorKind::Domain, "field conversion needs the channel system");
    if (f.nodes() != ops.x.size()) fail(ErrorKind::Domain, "field does not match the mesh");
    VectorXd u(ops.size());
    for (int i = 0; i < f.nodes(); ++i) u.segment<9>(i * 9) = channel::toSystem(f.u.row(i).transpose());
    return u;
}

FemOperators buildChannelOperators(const FemConfig& cfg) {
    cfg.validate();
    const double kn = cfg.resolvedKn();
    const auto [mc, bc] = loadRunCoefficients(cfg.eta, cfg.chi, cfg.bcMode);
    const SystemMatrices1D sys = assembleChannelSystem(mc, kn);
    const VectorXd x = VectorXd::LinSpaced(cfg.nodes(), -0.5, 0.5);
    return assembleFem(sys, assembleBcRows1D(bc, -1, kn), assembleBcRows1D(bc, 1, kn), x,
                       Eigen::Vector2d(cfg.thetaLeft, cfg.vLeft), Eigen::Vector2d(cfg.thetaRight, cfg.vRight));
}

FemRun runScenario(const FemConfig& cfg, const std::optional<MomentField1D>& initial) {
    const FemOperators ops = buildChannelOperators(cfg);
    FemRun run;
    run.kn = cfg.resolvedKn();
    run.coeffs = loadRunCoefficients(cfg.eta, cfg.chi, cfg.bcMode).first;
    VectorXd u;
    if (initial) {
        u = fromField(ops, *initial);
    } else {
        u = VectorXd::Zero(ops.size());
        for (int i = 0; i < static_cast<int>(ops.x.size()); ++i)
            u(ops.dof(i, channel::THETA)) = 0.5 * (cfg.thetaLeft + cfg.thetaRight);
    }
    for (int d : ops.essential) u(d) = 0.0;

    const CrankNicolson cn(ops, cfg.dt);
    const SteadyResidual residual(ops);
    const int nsteps = cfg.steps();
    std::set<int> snapSteps;
    for (double t : cfg.snapshots) snapSteps.insert(static_cast<int>(std::lround(t / cfg.dt)));

    auto record = [&](int k, const VectorXd& state, double supply) {
        const MomentField1D f = toField(ops, state);
        run.series.t.push_back(k * cfg.dt);
        run.series.entropy.push_back(entropy(f));
        run.series.energy.push_back(discreteEnergy(ops, state));
        run.series.residual.push_back(residual(state));
        run.series.wallSupply.push_back(supply);
        if (snapSteps.count(k)) {
            run.snapshotTimes.push_back(k * cfg.dt);
            run.snapshots.push_back(f);
        }
    };
    record(0, u, 0.0);
    int k = 0;
    while (k < nsteps) {
        const VectorXd next = cn.step(u);
        ++k;
        if (k % 100 == 0 && !next.allFinite())
            fail(ErrorKind::Numerical, "non-finite state at step " + std::to_string(k));
        const double supply = cfg.dt * (0.5 * (u + next)).dot(ops.g);
        u = next;
        record(k, u, supply);
        if (cfg.steadyTol > 0 && run.series.residual.back() < cfg.steadyTol) {
            run.converged = true;
            break;
        }
    }
    if (!u.allFinite()) fail(ErrorKind::Numerical, "non-finite state at step " + std::to_string(k));
    if (run.snapshotTimes.empty() || run.snapshotTimes.back() != k * cfg.dt) {
        run.snapshotTimes.push_back(k * cfg.dt);
        run.snapshots.push_back(toField(ops, u));
    }
    run.steps = k;
    return run;
}

MomentField1D steadyChannel(const FemConfig& cfg) {
    const FemOperators ops = buildChannelOperators(cfg);
    return toField(ops, steadySolveFem(ops));
}

double steadyL2Error(const MomentField1D& f, const SteadySolution& s) {
    const int n = f.nodes();
    VectorXd e2(n);
    for (int i = 0; i < n; ++i) {
        const SteadyPoint p = s.at(f.x(i));
        const double a = f.u(i, MomentField1D::THETA) - p.theta, b = f.u(i, MomentField1D::Q2) - p.qbar,
                     c = f.u(i, MomentField1D::S22) - p.sigma;
        e2(i) = a * a + b * b + c * c;
    }
    double sum = 0;
    for (int i = 0; i + 1 < n; ++i) sum += 0.5 * (f.x(i + 1) - f.x(i)) * (e2(i) + e2(i + 1));
    return std::sqrt(sum);
}

} // namespace r13
