#pragma once
// Onsager wall boundary conditions: half-space Gram matrix, wall elimination,
// 1D boundary rows, Knudsen-layer spectra and the layer-removal modification.
#include "r13/coeffs.hpp"
#include "r13/model.hpp"

#include <string>
#include <vector>

namespace r13 {

// one term c-vector * psi_n^{idx} (axis 0 is the wall normal, 1 and 2 tangential)
struct OddTerm {
    VectorXd c;
    std::vector<int> idx;
    double scale = 1.0;
};

struct OddBasisFunction {
    std::string name;
    std::vector<OddTerm> terms;
    bool secondOrder = false;
};

struct OddBasis {
    std::vector<OddBasisFunction> fns;
    bool maxwell = false;
    double ratio = 0;       // c_1^{3,1}/c_1^{2,1}
    double mu1 = 0, mu2 = 0;
    int size() const { return static_cast<int>(fns.size()); }
};

// 12-element basis in canonical order; the 9-element Maxwell basis when c_1^{2,1} = c_1^{3,1} = 0
OddBasis oddBasis(const BasisCoefficients& b);

// structural nonzero pattern of Z for the 12-element basis (true = may be nonzero)
Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> zPattern(const OddBasis& basis);

struct OnsagerOperator {
    MatrixXd Z;     // raw <phi_i, C xi_n^-1 phi_j>/<phi_j, phi_j>, incoming xi_n < 0
    MatrixXd Zelim; // after the v_n = 0 elimination (first row/column zero)
    std::vector<std::string> names;
    double chi = 1.0;
    double mu1 = 0, mu2 = 0;
    bool maxwellBasis = false;
    double quadratureError = 0; // order-doubling estimate
    VectorXd norms;             // <phi_j, phi_j>

    double chiTilde() const { return 2.0 * chi / (2.0 - chi); }
    // symmetrized -Zelim (orthonormal odd basis) restricted to the support
    MatrixXd symmetricSupport() const;
};

struct HalfspaceOptions {
    int glOrder = 200;     // Gauss-Legendre points on xi_n in (-R, 0)
    double range = 12.0;   // R in standard deviations
    int hermiteOrder = 0;  // 0 = automatic from the highest nonzero c index
    double tol = 1e-10;
};

OnsagerOperator halfspaceGram(const OddBasis& basis, double chi, const HalfspaceOptions& opt = {});
OnsagerOperator halfspaceGram(const BasisCoefficients& b, double chi, const HalfspaceOptions& opt = {});

// [[z0, zeta0^T], [zeta1, Z1]] -> [[0, 0], [0, Z1 - zeta1 zeta0^T / z0]]; throws if z0 <= 0
MatrixXd applyWallElimination(const MatrixXd& Z);

// boundary coefficients from the half-space integrals (Maxwell basis only)
BCCoefficients extractMaxwellBC(const BasisCoefficients& b, double chi, const HalfspaceOptions& opt = {});

// Per-wall boundary rows  Rt * trace + Rd * u' = Rw * (thetaW, v1W)
// on the channel variables (rho, theta, v1, v2, q1, q2, s, s12, s22); Rd includes the Kn factor.
struct BCAssembly1D {
    MatrixXd Rt, Rd, Rw;
    int side = 1; // s_n: -1 left wall, +1 right wall
    std::vector<std::string> names;
    std::vector<int> essential; // variables fixed to 0 at the wall (v2)
    int rows() const { return static_cast<int>(Rt.rows()); }
    // wall source for given (thetaW, v1W)
    VectorXd source(double thetaW, double v1W) const;
    VectorXd residual(const VectorXd& trace, const VectorXd& deriv, double thetaW, double v1W) const;
};

BCAssembly1D assembleBcRows1D(const BCCoefficients& bc, int side, double kn);

// temperature rows only (q, m2, m6), planar variables (rho, theta, v, qbar, sbar)
BCAssembly1D assemblePlanarBcRows(const BCCoefficients& bc, int side, double kn);

// Knudsen-layer structure of the planar steady problem
struct LayerSpectrum {
    Eigen::Matrix2d b = Eigen::Matrix2d::Zero();
    Eigen::Vector2d c = Eigen::Vector2d::Zero();
    double lambda1 = 0, lambda2 = 0;
    bool degenerate = false; // Maxwell: single layer, lambda2 undefined (NaN)
    Eigen::Matrix4d M1 = Eigen::Matrix4d::Zero(), M0 = Eigen::Matrix4d::Zero();
};

LayerSpectrum reduceToOde(const ModelCoefficients& k, double kn = 1.0);
// lambdas from b only
Eigen::Vector2d layerEigenvalues(const Eigen::Matrix2d& b);

// Q -> Q~ with l^T Q~ = 0, Q~ symmetric, unchanged outside `modified` and zero on structural zeros
struct RemoveLayersResult {
    MatrixXd Q;
    bool changed = false;
    bool nsdWarning = false;
    double maxEigenvalue = 0;
};
RemoveLayersResult removeLayers(const MatrixXd& Q, const std::vector<VectorXd>& l,
                                const std::vector<std::pair<int, int>>& modified);

struct LayerVectors {
    VectorXd lambda;                 // descending, +-pairs
    MatrixXd lo, le;                 // columns: left vectors per eigenvalue
    MatrixXd ro, re;                 // right vectors
    int rank = 0;                    // rank of A_oe
    Eigen::VectorXd singular;        // singular values of A_oe
    double pairingError = 0;         // max |lambda_j + lambda_{n+1-j}|
};

// generic steady form [[0, Aoe],[Aeo, 0]] u' = diag(Loo, Lee) u
LayerVectors layerLeftVectors(const MatrixXd& Aoe, const MatrixXd& Loo, const MatrixXd& Lee, double rankTol = 1e-10);
// 37-moment steady form split by parity in the x2 direction (entropy-symmetrized)
LayerVectors layerLeftVectors(const System37& s, double rankTol = 1e-10);

// deterministic non-Maxwell collision data: Maxwell plus a small negative semidefinite
// perturbation that keeps the conservation structure
CollisionMatrixSet syntheticCollisionSet(int N = 10, double eps = 0.05, unsigned seed = 7);

} // namespace r13
