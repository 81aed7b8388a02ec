#pragma once
// Linear R13 system in 1D: channel (9 moments), planar temperature (5), 37-moment assembly.
#include "r13/coeffs.hpp"

#include <string>
#include <vector>

namespace r13 {

// node-wise moments; columns follow Comp
struct MomentField1D {
    enum Comp { RHO = 0, THETA, V1, V2, Q1, Q2, S11, S12, S22, NCOMP };
    VectorXd x;
    MatrixXd u; // nodes x 9

    static MomentField1D zeros(const VectorXd& x);
    int nodes() const { return static_cast<int>(x.size()); }
    void validate() const;
    static const char* name(int comp);
};

// A0 u_t + A1 u_x = Kn D u_xx + (1/Kn) Lrel u
// Channel ordering: rho, theta, v1, v2, q1, q2, s, s12, s22 with s = s11 + s22/2
// (that keeps W diagonal: 1/2|sbar|^2 = s^2 + 3/4 s22^2 + s12^2).
struct SystemMatrices1D {
    VectorXd W;
    MatrixXd A0, A1, D, Lrel;
    int dim = 0;
    std::vector<std::string> names;
    std::vector<int> conservative; // indices of rho, theta, v
    double kn = 1.0;

    MatrixXd knD() const { return kn * D; }
    MatrixXd relaxation() const { return Lrel / kn; }
};

namespace channel {
constexpr int RHO = 0, THETA = 1, V1 = 2, V2 = 3, Q1 = 4, Q2 = 5, S = 6, S12 = 7, S22 = 8;
const std::vector<int>& temperatureBlock(); // rho, theta, v2, q2, s22
const std::vector<int>& shearBlock();       // v1, q1, s12
const std::vector<int>& sBlock();           // s
Eigen::Matrix<double, 9, 1> toSystem(const Eigen::Matrix<double, 9, 1>& field);
Eigen::Matrix<double, 9, 1> fromSystem(const Eigen::Matrix<double, 9, 1>& sys);
} // namespace channel

SystemMatrices1D assembleChannelSystem(const ModelCoefficients& k, double kn);
SystemMatrices1D assemblePlanarTemperatureSystem(const ModelCoefficients& k, double kn, bool steady = false);
SystemMatrices1D restrictSystem(const SystemMatrices1D& s, const std::vector<int>& idx);

struct PhysicalFluxes1D {
    VectorXd sigma12, sigma22, q1, q2;
};

// first derivative on a (possibly nonuniform) grid, second order everywhere
VectorXd gradient(const VectorXd& x, const VectorXd& f);

PhysicalFluxes1D recoverStressHeat(const MomentField1D& field, const ModelCoefficients& k, double kn);

// 1/2 * integral of rho^2 + 3/2 theta^2 + |v|^2 + 2/5 |q|^2 + 1/2 |sigma|^2 (trapezoidal)
double entropy(const MomentField1D& field);

// 37-moment system along x2 in orthonormal stf coordinates:
// E u_t + A u_x = (1/Kn) L u
struct System37 {
    static constexpr int RHO = 0, THETA = 1, V = 2, Q = 5, S = 8, U2 = 13, U2I = 14, U3I = 17, U1IJ = 20, U2IJ = 25,
                         U0 = 30, DIM = 37, N13 = 13;
    MatrixXd E, A, L;
    VectorXd W; // entropy weights
    double kn = 1.0;
};

System37 assemble37System(const BasisCoefficients& basis, double kn);

// eliminated 13-moment operators: u_t + F u_x = Kn D u_xx + (1/Kn) R u
struct Reduced13 {
    MatrixXd F, D, R;
};
Reduced13 eliminateSecondOrder(const System37& s);
Reduced13 template13(const std::array<double, 11>& k, double l1, double l2);

// least-squares fit of (k, l) to a reduced operator; throws on stencil mismatch
struct CoefficientFit {
    std::array<double, 11> k{};
    double l1 = 0, l2 = 0;
    double residual = 0; // relative
};
CoefficientFit fitTemplate(const Reduced13& r, double tol = 1e-8);

// || A20 - L21 L11^{-1} A10 ||_max on the assembled blocks
double superBurnettResidual(const System37& s);

} // namespace r13
