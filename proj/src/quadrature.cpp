#include "r13/quadrature.hpp"

#include "r13/errors.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace r13::quad {

void gaussLegendre(int n, std::vector<double>& x, std::vector<double>& w) {
    if (n < 1) fail(ErrorKind::Domain, "Gauss-Legendre order must be positive");
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        x[i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
}

void gaussHermite(int n, std::vector<double>& x, std::vector<double>& w) {
    if (n < 1) fail(ErrorKind::Domain, "Gauss-Hermite order must be positive");
    // Golub-Welsch on the Jacobi matrix of He_k
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) J(k, k - 1) = J(k - 1, k) = std::sqrt(static_cast<double>(k));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i) {
        x[i] = es.eigenvalues()(i);
        w[i] = es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
    }
    // exact mirror symmetry keeps odd moments at roundoff zero
    for (int i = 0; i < n / 2; ++i) {
        const double xs = 0.5 * (x[n - 1 - i] - x[i]), ws = 0.5 * (w[i] + w[n - 1 - i]);
        x[i] = -xs;
        x[n - 1 - i] = xs;
        w[i] = w[n - 1 - i] = ws;
    }
    if (n % 2) x[n / 2] = 0.0;
    double sum = 0;
    for (double v : w) sum += v;
    for (double& v : w) v /= sum;
}

} // namespace r13::quad
