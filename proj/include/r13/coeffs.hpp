#pragma once
// Collision data -> moment-system coefficients, plus the built-in IPL tables.
#include <Eigen/Dense>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>

namespace r13 {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct GasModel {
    enum class Kind { InversePowerLaw, Custom };
    Kind kind = Kind::InversePowerLaw;
    double eta = 5.0; // +inf for hard spheres
    std::string name;

    static GasModel ipl(double eta);
    static GasModel custom(const std::string& name);
    double omega() const; // 1/2 + 2/(eta-1)
    bool isMaxwell() const { return kind == Kind::InversePowerLaw && eta == 5.0; }
    std::string label() const;
};

// parses "5", "10", "inf", "hs"
double parseEta(const std::string& s);
std::string etaString(double eta);

// a_l for l = 0..3, each (N+1)x(N+1)
struct CollisionMatrixSet {
    int N = 0;
    std::array<MatrixXd, 4> a;
    void validate() const;
};

// isotropic-scattering Maxwell kernel, diagonal in the Burnett basis, a_2,00 = -1
CollisionMatrixSet maxwellCollisionSet(int N = 20);
double maxwellEigenvalue(int n, int l);

CollisionMatrixSet readCollisionFile(const std::string& path);
void writeCollisionFile(const std::string& path, const CollisionMatrixSet& set);

// b^{(n0)}_l stored zero-padded as (N+1)x(N+1); entries with n or n'' < n0 are zero
struct InverseSet {
    MatrixXd b1_1, b2_0, b0_2, b1_2, b2_1, b3_0;
};

struct GammaArrays {
    // all indexed by n = 0..N, zero where undefined
    VectorXd g0, gt1, gs1, gt2, gs2, g3;
};

struct DArrays {
    VectorXd d02, d12, d13, d21, d22, d30;
};

// full psi-coefficient vectors over n = 0..N
struct CArrays {
    VectorXd c11, c20;           // first order, norms^2 15/2 and 15
    VectorXd c02, c12, c13;      // second order scalars/vectors; c12(1), c13(1) are the psi^1 parts
    VectorXd c21, c22, c30;      // c21(0), c22(0) are the psi^0 parts
    VectorXd eq() const;         // unit, positively oriented heat-flux vector
    VectorXd es() const;         // unit stress vector
};

struct AScalars {
    double A45 = 0, A46 = 0, A49 = 0, A4_10 = 0, A57 = 0, A58 = 0, A5_11 = 0;
    double A67 = 0, A68 = 0, A79 = 0, A7_10 = 0, A89 = 0, A8_10 = 0, A9_11 = 0, A10_11 = 0;
};

struct LBlocks {
    double L0_22 = 0;
    Eigen::Matrix3d L1 = Eigen::Matrix3d::Zero(); // indices 1,2,3 -> 0,1,2
    Eigen::Matrix3d L2 = Eigen::Matrix3d::Zero(); // indices 0,1,2
    double L3_00 = 0;
};

struct BasisCoefficients {
    int N = 0;
    VectorXd beta1, beta2;
    GammaArrays gamma;
    DArrays d;
    CArrays c;
    AScalars A;
    LBlocks L;
};

struct ModelCoefficients {
    enum class Source { BuiltinTable, Derived };
    std::array<double, 11> k{};
    double l1 = 0, l2 = 0;
    Source source = Source::BuiltinTable;
    int truncation = 0;
    double eta = 0; // NaN for custom data

    double operator[](int i) const { return k.at(i); }
    bool maxwellLike(double tol = 0.0) const; // k1..k4, k10 vanish
    void checkInvariants() const;             // throws Numerical on violation
};

struct BCCoefficients {
    std::map<int, double> m; // key 11..81; missing key = Absent
    double chi = 1.0;
    double chiTilde() const { return 2.0 * chi / (2.0 - chi); }
    std::optional<double> get(int id) const;
    double at(int id) const; // Data error if absent
    bool has(int id) const { return m.count(id) != 0; }
};

double chiTilde(double chi);

std::pair<ModelCoefficients, BCCoefficients> loadBuiltin(const GasModel& model, double chi = 1.0);

double knConvert(double knbar, const GasModel& model);

MatrixXd submatrixInverse(const MatrixXd& al, int l, int n0);
InverseSet computeInverses(const CollisionMatrixSet& a);

struct BetaGamma {
    VectorXd beta1, beta2;
    GammaArrays gamma;
};
BetaGamma computeBetaGamma(const InverseSet& b);

DArrays computeD(const GammaArrays& g);
CArrays computeC(const VectorXd& beta1, const VectorXd& beta2, const DArrays& d);
AScalars computeA(const CArrays& c);
LBlocks computeLBlocks(const CollisionMatrixSet& a, const CArrays& c);

ModelCoefficients computeModelCoefficients(const BasisCoefficients& basis);

// closed-form k1, k2, k3, k4, k7, k10 (index order)
std::array<double, 6> closedFormK(const BasisCoefficients& basis);

std::pair<ModelCoefficients, BasisCoefficients> derive(const CollisionMatrixSet& a);

// lower-truncation copy (top-left blocks)
CollisionMatrixSet truncate(const CollisionMatrixSet& a, int N);

} // namespace r13
