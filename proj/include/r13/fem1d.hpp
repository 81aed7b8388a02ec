#pragma once
// P1 finite elements in space, Crank-Nicolson in time, for the channel moment system.
#include "r13/boundary.hpp"
#include "r13/model.hpp"
#include "r13/steady1d.hpp"

#include <Eigen/Sparse>
#include <optional>
#include <vector>

namespace r13 {

enum class BcMode { Onsager, Modified };

BcMode parseBcMode(const std::string& s);
const char* bcModeName(BcMode m);

struct FemConfig {
    double h = 1e-3;
    double dt = 2.5e-4;
    double tEnd = 1.0;
    double eta = 10.0;
    std::optional<double> kn, knbar;
    double chi = 1.0;
    double thetaLeft = 0, thetaRight = 0, vLeft = 0, vRight = 0;
    BcMode bcMode = BcMode::Modified;
    std::vector<double> snapshots;
    double steadyTol = 0; // stop once the steady residual drops below this (0: run to tEnd)

    static FemConfig couette();
    static FemConfig fourier();
    double resolvedKn() const;
    int nodes() const;
    int steps() const;
    void validate() const; // Config error on bad values
};

// boundary coefficients for a run; the unmodified set is only known for Maxwell molecules
std::pair<ModelCoefficients, BCCoefficients> loadRunCoefficients(double eta, double chi, BcMode mode);

// M u_t + K u = g; all forms carry the entropy weights W. Unknowns are node-major: dof = node * nc + comp.
struct FemOperators {
    VectorXd x;
    int nc = 0;
    SystemMatrices1D sys;
    Eigen::SparseMatrix<double> M, K;
    VectorXd g;
    std::vector<int> essential; // dofs held at zero
    int rhoComp = -1, normalComp = -1;

    int size() const { return static_cast<int>(x.size()) * nc; }
    int dof(int node, int comp) const { return node * nc + comp; }
};

FemOperators assembleFem(const SystemMatrices1D& sys, const BCAssembly1D& left, const BCAssembly1D& right,
                         const VectorXd& x, const Eigen::Vector2d& wallLeft, const Eigen::Vector2d& wallRight);

// general band LU (LAPACK dgbtrf/dgbtrs)
class BandedLU {
public:
    BandedLU() = default;
    explicit BandedLU(const Eigen::SparseMatrix<double>& A);
    VectorXd solve(const VectorXd& b) const;
    int size() const { return n_; }

private:
    int n_ = 0, kl_ = 0, ku_ = 0, ldab_ = 0;
    std::vector<double> ab_;
    std::vector<int> ipiv_;
};

class CrankNicolson {
public:
    CrankNicolson(const FemOperators& ops, double dt);
    VectorXd step(const VectorXd& u) const;
    double dt() const { return dt_; }

private:
    const FemOperators* ops_;
    double dt_;
    Eigen::SparseMatrix<double> B_;
    BandedLU lu_;
};

// 1/2 u^T M u
double discreteEnergy(const FemOperators& ops, const VectorXd& u);

// || M^{-1} (g - K u) || in the M norm, essential dofs excluded
class SteadyResidual {
public:
    explicit SteadyResidual(const FemOperators& ops);
    double operator()(const VectorXd& u) const;

private:
    const FemOperators* ops_;
    BandedLU mass_;
};

// steady limit: the normal velocity vanishes, the remaining non-density unknowns solve K u = g,
// density follows from the discrete normal momentum rows with zero mean
VectorXd steadySolveFem(const FemOperators& ops);

VectorXd densityFromMomentum(const FemOperators& ops, const VectorXd& u);

// node-major system vector <-> field (channel operators only)
MomentField1D toField(const FemOperators& ops, const VectorXd& u);
VectorXd fromField(const FemOperators& ops, const MomentField1D& f);

struct TimeSeries {
    std::vector<double> t, entropy, residual, energy, wallSupply;
};

struct FemRun {
    std::vector<double> snapshotTimes;
    std::vector<MomentField1D> snapshots;
    TimeSeries series;
    ModelCoefficients coeffs;
    double kn = 0;
    int steps = 0;
    bool converged = false;
};

FemOperators buildChannelOperators(const FemConfig& cfg);
FemRun runScenario(const FemConfig& cfg, const std::optional<MomentField1D>& initial = std::nullopt);

// steady channel solution on the config mesh (no time stepping)
MomentField1D steadyChannel(const FemConfig& cfg);

// L2 norm (trapezoidal) of the difference in theta, qbar2 and sbar22 against the analytic profiles
double steadyL2Error(const MomentField1D& f, const SteadySolution& s);

} // namespace r13
