#include "r13/tensor.hpp"
#include "r13/errors.hpp"

#include <array>
#include <mutex>

namespace r13::stf {

namespace {

int pow3(int r) {
    int p = 1;
    for (int i = 0; i < r; ++i) p *= 3;
    return p;
}

std::array<int, 3> unflat(int idx, int rank) {
    std::array<int, 3> ix{0, 0, 0};
    for (int k = rank - 1; k >= 0; --k) {
        ix[k] = idx % 3;
        idx /= 3;
    }
    return ix;
}

int flat(const std::array<int, 3>& ix, int rank) {
    int f = 0;
    for (int k = 0; k < rank; ++k) f = 3 * f + ix[k];
    return f;
}

VectorXd symmetrize(const VectorXd& t, int rank) {
    if (rank <= 1) return t;
    VectorXd s = VectorXd::Zero(t.size());
    for (int f = 0; f < t.size(); ++f) {
        auto ix = unflat(f, rank);
        if (rank == 2) {
            s(f) = 0.5 * (t(flat({ix[0], ix[1], 0}, 2)) + t(flat({ix[1], ix[0], 0}, 2)));
        } else {
            const int p[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
            double acc = 0;
            for (auto& q : p) acc += t(flat({ix[q[0]], ix[q[1]], ix[q[2]]}, 3));
            s(f) = acc / 6.0;
        }
    }
    return s;
}

} // namespace

int dim(int rank) {
    if (rank < 0 || rank > 3) fail(ErrorKind::Domain, "stf rank must be 0..3");
    return 2 * rank + 1;
}

VectorXd project(const VectorXd& full, int rank) {
    VectorXd s = symmetrize(full, rank);
    if (rank <= 1) return s;
    VectorXd out = s;
    if (rank == 2) {
        double tr = s(0) + s(4) + s(8);
        for (int i = 0; i < 3; ++i) out(4 * i) -= tr / 3.0;
        return out;
    }
    // rank 3: subtract (1/5)(d_ij t_k + d_ik t_j + d_jk t_i), t_k = S_kll
    double tr[3];
    for (int k = 0; k < 3; ++k) {
        tr[k] = 0;
        for (int l = 0; l < 3; ++l) tr[k] += s(flat({k, l, l}, 3));
    }
    for (int f = 0; f < 27; ++f) {
        auto ix = unflat(f, 3);
        double c = 0;
        if (ix[0] == ix[1]) c += tr[ix[2]];
        if (ix[0] == ix[2]) c += tr[ix[1]];
        if (ix[1] == ix[2]) c += tr[ix[0]];
        out(f) -= c / 5.0;
    }
    return out;
}

const MatrixXd& basis(int rank) {
    static std::array<MatrixXd, 4> cache;
    static std::once_flag once;
    std::call_once(once, [] {
        for (int r = 0; r < 4; ++r) {
            const int n = pow3(r), d = 2 * r + 1;
            MatrixXd B(n, d);
            int found = 0;
            for (int f = 0; f < n && found < d; ++f) {
                VectorXd e = VectorXd::Zero(n);
                e(f) = 1.0;
                VectorXd v = project(e, r);
                for (int j = 0; j < found; ++j) v -= B.col(j).dot(v) * B.col(j);
                for (int j = 0; j < found; ++j) v -= B.col(j).dot(v) * B.col(j);
                if (v.norm() > 1e-8) B.col(found++) = v / v.norm();
            }
            cache[r] = B;
        }
    });
    if (rank < 0 || rank > 3) fail(ErrorKind::Domain, "stf rank must be 0..3");
    return cache[rank];
}

VectorXd coords(const VectorXd& full, int rank) { return basis(rank).transpose() * full; }
VectorXd fullTensor(const VectorXd& c, int rank) { return basis(rank) * c; }

MatrixXd gradOp(int rank, int dir) {
    if (rank > 2) fail(ErrorKind::Domain, "gradOp: rank too high");
    const MatrixXd& B = basis(rank);
    MatrixXd G(dim(rank + 1), dim(rank));
    for (int j = 0; j < B.cols(); ++j) {
        VectorXd t = VectorXd::Zero(pow3(rank + 1));
        for (int f = 0; f < B.rows(); ++f) t(3 * f + dir) = B(f, j);
        G.col(j) = coords(project(t, rank + 1), rank + 1);
    }
    return G;
}

MatrixXd divOp(int rank, int dir) {
    if (rank < 1) fail(ErrorKind::Domain, "divOp: rank must be >= 1");
    const MatrixXd& B = basis(rank);
    MatrixXd D(dim(rank - 1), dim(rank));
    for (int j = 0; j < B.cols(); ++j) {
        VectorXd t(pow3(rank - 1));
        for (int f = 0; f < t.size(); ++f) t(f) = B(3 * f + dir, j);
        D.col(j) = coords(t, rank - 1);
    }
    return D;
}

} // namespace r13::stf
