// Analytic steady Fourier problem: wall-anchored exponential modes plus a linear part.
#include "r13/steady1d.hpp"
#include "r13/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace r13 {

namespace {

struct G {
    Eigen::Vector4d g = Eigen::Vector4d::Zero(), d1 = Eigen::Vector4d::Zero(), d2 = Eigen::Vector4d::Zero(),
                    d3 = Eigen::Vector4d::Zero();
};

G evalModes(const std::vector<SteadyMode>& modes, const Eigen::Vector4d& P, const Eigen::Vector4d& Q, double kn,
            double x) {
    G r;
    r.g = P * x + Q;
    r.d1 = P;
    for (const auto& m : modes) {
        const double e = m.amplitude * std::exp(-m.mu * (x - m.anchor) / kn);
        const double s = -m.mu / kn;
        r.g += e * m.r;
        r.d1 += s * e * m.r;
        r.d2 += s * s * e * m.r;
        r.d3 += s * s * s * e * m.r;
    }
    return r;
}

SteadyPoint pointFrom(const G& g, const std::array<double, 11>& k, double kn, double Cq, double Crho) {
    SteadyPoint p;
    p.theta = g.g(2);
    p.sigma = g.g(3);
    p.dtheta = g.d1(2);
    p.dsigma = g.d1(3);
    p.d2theta = g.d2(2);
    p.d2sigma = g.d2(3);
    const double f = 1.5 * kn / k[0];
    p.qbar = f * (k[1] * p.dtheta - k[2] * p.dsigma) + Cq;
    p.dqbar = f * (k[1] * p.d2theta - k[2] * p.d2sigma);
    p.d2qbar = f * (k[1] * g.d3(2) - k[2] * g.d3(3));
    p.rho = -p.theta - k[5] * p.sigma + 2.0 / 3.0 * k[4] * kn * p.dqbar + Crho;
    return p;
}

} // namespace

SteadyPoint SteadySolution::at(double x) const {
    return pointFrom(evalModes(modes, P, Q, kn, x), k, kn, Cq, Crho);
}

double SteadySolution::equationResidual(double x) const {
    const SteadyPoint p = at(x);
    const double drho = -p.dtheta - k[5] * p.dsigma + 2.0 / 3.0 * k[4] * kn * p.d2qbar;
    const std::vector<std::vector<double>> eqs = {
        {2.0 / 3.0 * k[0] * p.dqbar, -k[1] * kn * p.d2theta, k[2] * kn * p.d2sigma},
        {drho, p.dtheta, -2.0 / 3.0 * k[4] * kn * p.d2qbar, k[5] * p.dsigma},
        {2.5 * k[0] * p.dtheta, -(2 * k[6] + 1.6 * k[7]) * kn * p.d2qbar, k[8] * p.dsigma, 2.0 / 3.0 * l1 * p.qbar / kn},
        {2 * k[2] * kn * p.d2theta, 8.0 / 15.0 * k[8] * p.dqbar, -(1.2 * k[9] + 2.0 / 3.0 * k[10]) * kn * p.d2sigma,
         l2 * p.sigma / kn}};
    // terms far below the solution scale are compared against that scale instead of each other
    const double floor = 1e-6 * scale;
    double worst = 0;
    for (const auto& e : eqs) {
        double sum = 0, mag = 0;
        for (double t : e) {
            sum += t;
            mag = std::max(mag, std::abs(t));
        }
        if (mag > 0) worst = std::max(worst, std::abs(sum) / std::max(mag, floor));
    }
    return worst;
}

std::vector<double> SteadySolution::wallAmplitudesTheta() const {
    std::vector<double> a;
    for (const auto& m : modes) a.push_back(m.amplitude * m.r(2));
    return a;
}

SteadySolution solveFourierSteady(const ModelCoefficients& kc, const BCCoefficients& bc, double kn,
                                  double thetaLeft, double thetaRight, int samples) {
    if (!(kn > 0)) fail(ErrorKind::Domain, "Kn must be positive");
    if (samples < 2) fail(ErrorKind::Domain, "at least two sample points are required");
    const auto& k = kc.k;
    const LayerSpectrum spec = reduceToOde(kc, kn);
    SteadySolution sol;
    sol.kn = kn;
    sol.k = k;
    sol.l1 = kc.l1;
    sol.l2 = kc.l2;
    sol.lambda1 = spec.lambda1;
    sol.lambda2 = spec.lambda2;
    sol.degenerate = spec.degenerate;

    // modes (amplitude 1 placeholders) and the maps (Cq, C2) -> P, Q
    std::vector<SteadyMode> modes;
    Eigen::Matrix<double, 4, 2> Pmap = Eigen::Matrix<double, 4, 2>::Zero(), Qmap = Pmap;
    const double c1PerCq = -2.0 * kc.l1 / (3.0 * kn);
    if (spec.degenerate) {
        const double ct = -k[8] / (2.5 * k[0]);
        for (double mu : {spec.lambda1, -spec.lambda1}) {
            SteadyMode m;
            m.mu = mu;
            m.anchor = mu > 0 ? -0.5 : 0.5;
            m.r << -mu * ct, -mu, ct, 1.0;
            modes.push_back(m);
        }
        // theta = (C1 x + C2) / (5/2 k0), xi = Kn theta'
        Pmap(2, 0) = c1PerCq / (2.5 * k[0]);
        Qmap(0, 0) = kn * c1PerCq / (2.5 * k[0]);
        Qmap(2, 1) = 1.0 / (2.5 * k[0]);
    } else {
        Eigen::FullPivLU<Eigen::Matrix4d> lu(spec.M1);
        const Eigen::Matrix4d A = lu.solve(spec.M0);
        const Eigen::Vector4d c = lu.solve(Eigen::Vector4d(0, 0, 1, 0));
        Eigen::EigenSolver<Eigen::Matrix4d> es(A);
        if (es.eigenvalues().imag().cwiseAbs().maxCoeff() > 1e-10 * es.eigenvalues().cwiseAbs().maxCoeff())
            fail(ErrorKind::Numerical, "steady layer modes are not real");
        for (int j = 0; j < 4; ++j) {
            SteadyMode m;
            m.mu = es.eigenvalues()(j).real();
            m.anchor = m.mu > 0 ? -0.5 : 0.5;
            m.r = es.eigenvectors().col(j).real();
            // normalize so the theta component is 1 when possible
            const double s = std::abs(m.r(2)) > 1e-300 ? m.r(2) : m.r.norm();
            m.r /= s;
            modes.push_back(m);
        }
        const Eigen::Matrix4d Ainv = A.inverse();
        const Eigen::Vector4d p1 = Ainv * c * c1PerCq; // P per unit Cq
        Pmap.col(0) = p1;
        Qmap.col(0) = -kn * Ainv * p1;
        Qmap.col(1) = Ainv * c;
    }
    const int nm = static_cast<int>(modes.size()), nu = nm + 2;

    const BCAssembly1D left = assemblePlanarBcRows(bc, -1, kn), right = assemblePlanarBcRows(bc, 1, kn);
    if (left.rows() + right.rows() != nu)
        fail(ErrorKind::Numerical, "steady problem: " + std::to_string(left.rows() + right.rows()) +
                                       " boundary rows for " + std::to_string(nu) + " unknowns");
    auto residualRows = [&](const VectorXd& u) {
        std::vector<SteadyMode> ms = modes;
        for (int j = 0; j < nm; ++j) ms[j].amplitude = u(j);
        const Eigen::Vector2d cc(u(nm), u(nm + 1));
        const Eigen::Vector4d P = Pmap * cc, Q = Qmap * cc;
        VectorXd r(nu);
        int row = 0;
        for (const auto* a : {&left, &right}) {
            const double xw = 0.5 * a->side;
            const SteadyPoint p = pointFrom(evalModes(ms, P, Q, kn, xw), k, kn, u(nm), 0.0);
            VectorXd tr(5), dr(5);
            tr << 0, p.theta, 0, p.qbar, p.sigma;
            dr << 0, p.dtheta, 0, p.dqbar, p.dsigma;
            const VectorXd rr = a->residual(tr, dr, a->side < 0 ? thetaLeft : thetaRight, 0.0);
            r.segment(row, rr.size()) = rr;
            row += static_cast<int>(rr.size());
        }
        return r;
    };
    const VectorXd r0 = residualRows(VectorXd::Zero(nu));
    MatrixXd J(nu, nu);
    for (int j = 0; j < nu; ++j) J.col(j) = residualRows(VectorXd::Unit(nu, j)) - r0;
    Eigen::JacobiSVD<MatrixXd> svd(J);
    const auto& sv = svd.singularValues();
    sol.conditionNumber = sv(nu - 1) > 0 ? sv(0) / sv(nu - 1) : std::numeric_limits<double>::infinity();
    if (!(sol.conditionNumber < 1e14))
        fail(ErrorKind::Numerical, "ill-posed boundary system: condition number " + std::to_string(sol.conditionNumber));
    const VectorXd u = J.fullPivLu().solve(-r0);
    sol.bcResidual = residualRows(u).cwiseAbs().maxCoeff();

    for (int j = 0; j < nm; ++j) modes[j].amplitude = u(j);
    sol.modes = modes;
    sol.Cq = u(nm);
    sol.Cq1 = c1PerCq * sol.Cq;
    sol.Cq2 = u(nm + 1);
    const Eigen::Vector2d cc(sol.Cq, sol.Cq2);
    sol.P = Pmap * cc;
    sol.Q = Qmap * cc;

    // zero-mean gauge: mean(rho) over (-1/2, 1/2); int x = 0
    {
        Eigen::Vector4d mean = sol.Q;
        for (const auto& m : sol.modes) {
            const double I = std::abs(m.mu) > 0
                                 ? kn / m.mu * (std::exp(-m.mu * (-0.5 - m.anchor) / kn) - std::exp(-m.mu * (0.5 - m.anchor) / kn))
                                 : 1.0;
            mean += m.amplitude * I * m.r;
        }
        const double dqMean = sol.at(0.5).qbar - sol.at(-0.5).qbar;
        sol.Crho = -(-mean(2) - k[5] * mean(3) + 2.0 / 3.0 * k[4] * kn * dqMean);
    }

    // sinh/cosh amplitudes: e^{-mu(x-a)/Kn} = e^{mu a/Kn} (cosh(|mu| x/Kn) - sign(mu) sinh(|mu| x/Kn))
    for (const auto& m : sol.modes) {
        const bool second = !sol.degenerate && std::abs(std::abs(m.mu) - sol.lambda2) < std::abs(std::abs(m.mu) - sol.lambda1);
        const int base = second ? 2 : 0;
        const double f = m.amplitude * std::exp(m.mu * m.anchor / kn);
        const double sg = m.mu > 0 ? 1.0 : -1.0;
        sol.kappaTheta[base] += -sg * f * m.r(2);
        sol.kappaTheta[base + 1] += f * m.r(2);
        sol.kappaSigma[base] += -sg * f * m.r(3);
        sol.kappaSigma[base + 1] += f * m.r(3);
    }
    sol.kappaTheta[4] = sol.P(2);
    sol.kappaTheta[5] = sol.Q(2);
    sol.kappaSigma[4] = sol.P(3);
    sol.kappaSigma[5] = sol.Q(3);

    sol.x = VectorXd::LinSpaced(samples, -0.5, 0.5);
    sol.rho.resize(samples);
    sol.theta.resize(samples);
    sol.v2 = VectorXd::Zero(samples);
    sol.qbar.resize(samples);
    sol.sigma.resize(samples);
    sol.q.resize(samples);
    for (int i = 0; i < samples; ++i) {
        const SteadyPoint p = sol.at(sol.x(i));
        sol.rho(i) = p.rho;
        sol.theta(i) = p.theta;
        sol.qbar(i) = p.qbar;
        sol.sigma(i) = p.sigma;
        sol.q(i) = k[0] * p.qbar - 1.5 * k[1] * kn * p.dtheta + 1.5 * k[2] * kn * p.dsigma;
    }
    sol.scale = (sol.theta.cwiseAbs().maxCoeff() + sol.sigma.cwiseAbs().maxCoeff() + sol.qbar.cwiseAbs().maxCoeff()) / kn;
    return sol;
}

LayerFit fitLayerAmplitudes(const VectorXd& x, const VectorXd& y, double lambda1, double lambda2, double kn,
                            FitBasis basis) {
    const int n = static_cast<int>(x.size());
    if (y.size() != n) fail(ErrorKind::Domain, "layer fit: size mismatch");
    if (n < 12) fail(ErrorKind::Domain, "layer fit needs at least 12 samples");
    if (!(kn > 0) || !(lambda1 > 0)) fail(ErrorKind::Domain, "layer fit: lambda1 and Kn must be positive");
    const bool hasL2 = std::isfinite(lambda2);
    if (hasL2 && std::abs(lambda2 - lambda1) <= 1e-12 * lambda2) fail(ErrorKind::Domain, "layer fit: lambdas must be distinct");
    std::vector<int> cols = {0, 1, 4, 5};
    if (hasL2) cols = {0, 1, 2, 3, 4, 5};

    auto design = [&](bool anchored) {
        MatrixXd X(n, cols.size());
        for (int i = 0; i < n; ++i)
            for (std::size_t c = 0; c < cols.size(); ++c) {
                const double lam = cols[c] < 2 ? lambda1 : lambda2, t = x(i);
                double v = 0;
                switch (cols[c]) {
                case 0: case 2: v = anchored ? std::exp(-lam * (t + 0.5) / kn) : std::sinh(lam * t / kn); break;
                case 1: case 3: v = anchored ? std::exp(lam * (t - 0.5) / kn) : std::cosh(lam * t / kn); break;
                case 4: v = t; break;
                default: v = 1.0;
                }
                X(i, c) = v;
            }
        return X;
    };
    auto solve = [&](bool anchored) {
        LayerFit f;
        f.wallAnchored = anchored;
        MatrixXd X = design(anchored);
        if (!X.allFinite()) {
            f.condition = std::numeric_limits<double>::infinity();
            return f;
        }
        VectorXd sc(X.cols());
        for (int c = 0; c < X.cols(); ++c) {
            sc(c) = X.col(c).cwiseAbs().maxCoeff();
            if (sc(c) == 0) sc(c) = 1;
            X.col(c) /= sc(c);
        }
        Eigen::JacobiSVD<MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& s = svd.singularValues();
        f.condition = s(s.size() - 1) > 0 ? s(0) / s(s.size() - 1) : std::numeric_limits<double>::infinity();
        const VectorXd a = svd.solve(y);
        for (std::size_t c = 0; c < cols.size(); ++c) f.amp[cols[c]] = a(c) / sc(c);
        f.residual = std::sqrt((X * a - y).squaredNorm() / n);
        return f;
    };
    if (basis == FitBasis::WallAnchored) return solve(true);
    LayerFit h = solve(false);
    if (basis == FitBasis::Hyperbolic) return h;
    if (!std::isfinite(h.condition) || h.condition > 1e12) return solve(true);
    return h;
}

double layerRatio(const LayerFit& f) {
    const double layer2 = std::max(std::abs(f.amp[2]), std::abs(f.amp[3]));
    double smooth = 0;
    for (int i : {0, 1, 4, 5}) smooth = std::max(smooth, std::abs(f.amp[i]));
    return smooth > 0 ? layer2 / smooth : (layer2 > 0 ? std::numeric_limits<double>::infinity() : 0.0);
}

} // namespace r13
