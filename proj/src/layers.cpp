// Planar steady temperature problem reduced to the first-order (xi, xi', theta, sbar) system.
#include "r13/boundary.hpp"
#include "r13/errors.hpp"

#include <cmath>
#include <limits>

namespace r13 {

Eigen::Vector2d layerEigenvalues(const Eigen::Matrix2d& b) {
    const double b11 = b(0, 0), b12 = b(0, 1), b21 = b(1, 0), b22 = b(1, 1);
    const double disc = b11 * b11 - 2 * b11 * b22 + b22 * b22 + 4 * b12 * b21;
    if (disc < 0) fail(ErrorKind::Numerical, "layer eigenvalues are complex");
    Eigen::Vector2d lam;
    for (int j = 1; j <= 2; ++j) {
        const double v = ((j % 2 ? -1.0 : 1.0) * std::sqrt(disc) - b11 - b22) / 2.0;
        if (v <= 0) fail(ErrorKind::Numerical, "layer eigenvalue is not real positive");
        lam(j - 1) = std::sqrt(v);
    }
    return lam;
}

LayerSpectrum reduceToOde(const ModelCoefficients& kc, double kn) {
    if (!(kn > 0)) fail(ErrorKind::Domain, "Kn must be positive");
    const auto& k = kc.k;
    const double l1 = kc.l1, l2 = kc.l2;
    LayerSpectrum s;
    const double a = k[6] + 0.8 * k[7];
    // unknowns (xi, xi', theta, sbar) with xi = Kn theta'
    Eigen::Matrix4d M1, M0;
    M1 << 0, 0, 1, 0,
          0, 0, 0, 1,
          -3 * a * k[1] / k[0], 3 * a * k[2] / k[0], 0, 0,
          2 * k[2] + 4 * k[8] * k[1] / (5 * k[0]), -(1.2 * k[9] + 2.0 / 3.0 * k[10] + 4 * k[8] * k[2] / (5 * k[0])), 0, 0;
    M0 << -1, 0, 0, 0,
          0, -1, 0, 0,
          0, 0, 2.5 * k[0] + l1 * k[1] / k[0], k[8] - l1 * k[2] / k[0],
          0, 0, 0, l2;
    s.M1 = M1;
    s.M0 = M0;
    Eigen::FullPivLU<Eigen::Matrix4d> lu(M1);
    lu.setThreshold(1e-14);
    if (!lu.isInvertible()) {
        if (!kc.maxwellLike(1e-14))
            fail(ErrorKind::Numerical, "reduce_to_ode: leading matrix is singular for non-Maxwell coefficients");
        // single layer: (6/5 k9 + 2/3 k10) Kn^2 sbar'' = l2 sbar
        const double d = 1.2 * k[9] + 2.0 / 3.0 * k[10];
        s.degenerate = true;
        s.b(1, 1) = -l2 / d;
        s.lambda1 = std::sqrt(l2 / d);
        s.lambda2 = std::numeric_limits<double>::quiet_NaN();
        return s;
    }
    const Eigen::Matrix4d B = lu.solve(M0);
    s.b << B(0, 2), B(0, 3), B(1, 2), B(1, 3);
    const Eigen::Vector4d c = lu.solve(Eigen::Vector4d(0, 0, 1, 0));
    s.c = c.head<2>();
    const Eigen::Vector2d lam = layerEigenvalues(s.b);
    s.lambda1 = lam(0);
    s.lambda2 = lam(1);
    return s;
}

} // namespace r13
