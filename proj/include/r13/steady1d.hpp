#pragma once
// Analytic steady solution of the planar temperature problem on (-1/2, 1/2).
#include "r13/boundary.hpp"

#include <array>
#include <vector>

namespace r13 {

// pointwise values of the planar state and its derivatives
struct SteadyPoint {
    double theta = 0, sigma = 0, qbar = 0, rho = 0;
    double dtheta = 0, dsigma = 0, dqbar = 0;
    double d2theta = 0, d2sigma = 0, d2qbar = 0;
};

struct SteadyMode {
    double mu = 0;                      // g ~ exp(-mu (x - anchor) / Kn)
    double anchor = 0;                  // wall where the mode is O(1)
    double amplitude = 0;
    Eigen::Vector4d r = Eigen::Vector4d::Zero(); // (xi, xi', theta, sbar) with xi = Kn theta'
};

struct SteadySolution {
    double kn = 0;
    double lambda1 = 0, lambda2 = 0;
    bool degenerate = false;
    std::vector<SteadyMode> modes;
    Eigen::Vector4d P = Eigen::Vector4d::Zero(), Q = Eigen::Vector4d::Zero(); // linear part P x + Q
    double Cq = 0, Cq1 = 0, Cq2 = 0, Crho = 0;
    // sinh/cosh form: kappa1..4 for (sinh l1, cosh l1, sinh l2, cosh l2), kappa5 x, kappa6
    std::array<double, 6> kappaTheta{}, kappaSigma{};
    double conditionNumber = 0;
    double bcResidual = 0;
    std::array<double, 11> k{};
    double l1 = 0, l2 = 0;
    double scale = 0; // (max|theta| + max|sbar| + max|qbar|) / Kn over the samples

    // sampled profiles
    VectorXd x, rho, theta, v2, qbar, sigma, q;

    SteadyPoint at(double x) const;
    // residuals of the five planar equations at x, relative to the term magnitudes
    double equationResidual(double x) const;
    // theta wall amplitudes per mode (amplitude * r_theta)
    std::vector<double> wallAmplitudesTheta() const;
};

SteadySolution solveFourierSteady(const ModelCoefficients& k, const BCCoefficients& bc, double kn,
                                  double thetaLeft, double thetaRight, int samples = 401);

// least-squares layer fit; basis {sinh(l1 x/Kn), cosh(l1 x/Kn), sinh(l2 x/Kn), cosh(l2 x/Kn), x, 1}
// or, wall-anchored, {e^{-l1(x+1/2)/Kn}, e^{l1(x-1/2)/Kn}, e^{-l2(x+1/2)/Kn}, e^{l2(x-1/2)/Kn}, x, 1}
struct LayerFit {
    std::array<double, 6> amp{};
    bool wallAnchored = false;
    double residual = 0;     // rms
    double condition = 0;    // of the column-scaled design matrix
};

enum class FitBasis { Auto, Hyperbolic, WallAnchored };

LayerFit fitLayerAmplitudes(const VectorXd& x, const VectorXd& y, double lambda1, double lambda2, double kn,
                            FitBasis basis = FitBasis::Auto);

// max |lambda2 amplitudes| / max(|lambda1 amplitudes|, |x amp|, |const amp|)
double layerRatio(const LayerFit& f);

} // namespace r13
