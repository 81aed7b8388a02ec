// Built-in coefficient tables for the inverse-power-law model (eta = 5 is Maxwell, closed forms).
#include "r13/coeffs.hpp"
#include "r13/errors.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace r13 {

namespace {

struct Row {
    double eta;
    std::array<double, 11> k;
    double l1, l2;
    std::vector<std::pair<int, double>> m;
};

const std::vector<Row>& rows() {
    static const std::vector<Row> t = [] {
        const double inf = std::numeric_limits<double>::infinity();
        const double s = std::sqrt(2.0 * M_PI);
        std::vector<Row> r;
        r.push_back({5.0, {1, 0, 0, 0, 0, 1, 1, 1, 1, 1, 0}, 1.0, 1.0,
                     {{11, 2 / s}, {12, 1 / (2 * s)}, {13, 8 / (5 * s)}, {14, 48 / (25 * s)}, {15, 0},
                      {31, 1 / s}, {32, 1 / (5 * s)}, {33, 0}, {34, 2 / s}, {35, 0},
                      {41, 1 / s}, {42, 11 / (5 * s)}, {43, 0}, {44, 2 / s}, {45, 0},
                      {46, 0}, {47, 0}, {48, 24.0 / 5.0},
                      {61, 2 / (5 * s)}, {62, 7 / (5 * s)}, {63, 8 / (25 * s)}, {64, 48 / (125 * s)}, {65, 0},
                      {66, 0}, {67, 2}, {68, 0}, {69, 0},
                      {71, 1 / (2 * s)}, {81, 1 / (2 * s)}}});
        r.push_back({7.0,
                     {9.9785e-1, 3.0773e-3, 1.2550e-5, 2.6072e-3, 4.8885e-2, 9.9794e-1, 8.9911e-1, 9.7119e-1, 8.6773e-1,
                      9.6577e-1, 2.8590e-7},
                     9.9420e-1, 9.9545e-1,
                     {{11, 8.2699e-1}, {12, 1.7756e-1}, {13, 5.9524e-1}, {14, 7.7155e-1}, {15, 4.0454e-2},
                      {21, 4.9821e-3}, {22, 1.9210e-2}, {23, 3.5585e-3}, {24, 4.6126e-3}, {25, 2.4185e-4},
                      {26, 2.9445e-2}, {27, 1.1082e-1}, {28, 4.5197e-4},
                      {31, 4.0358e-1}, {32, 7.2977e-2}, {33, 5.8325e-8}, {34, 7.8808e-1}, {35, 7.6807e-6},
                      {41, 3.4342e-1}, {42, 8.5528e-1}, {43, 5.6647e-8}, {44, 7.6541e-1}, {45, 7.4598e-6},
                      {46, 1.2222e-1}, {47, 2.4505e-1}, {48, 4.7008},
                      {51, 3.4282e-2}, {52, 8.5377e-2}, {53, 5.6547e-9}, {54, 7.6406e-2}, {55, 7.4466e-7},
                      {56, 2.7746e-2}, {57, 5.5632e-2}, {58, 4.7964e-1},
                      {61, 1.5598e-1}, {62, 6.0144e-1}, {63, 1.1141e-1}, {64, 1.4441e-1}, {65, 7.5718e-3},
                      {66, 2.1284e-7}, {67, 2.0460}, {68, 9.0196e-8}, {69, 3.5825e-7},
                      {71, 2.0678e-1}, {81, 2.0678e-1}}});
        r.push_back({10.0,
                     {9.9396e-1, 8.7436e-3, 4.5818e-5, 7.4080e-3, 8.1805e-2, 9.9420e-1, 8.4173e-1, 9.5624e-1, 7.7962e-1,
                      9.4997e-1, 1.1896e-6},
                     9.8385e-1, 9.8727e-1,
                     {{11, 8.4706e-1}, {12, 1.6277e-1}, {13, 5.7153e-1}, {14, 7.7914e-1}, {15, 6.9432e-2},
                      {21, 7.5057e-3}, {22, 3.1012e-2}, {23, 4.9556e-3}, {24, 6.7557e-3}, {25, 6.0203e-4},
                      {26, 5.0347e-2}, {27, 1.9074e-1}, {28, 9.9954e-4},
                      {31, 4.0655e-1}, {32, 6.8340e-2}, {33, 2.4645e-7}, {34, 7.8723e-1}, {35, 2.8477e-5},
                      {41, 3.0441e-1}, {42, 8.4194e-1}, {43, 2.3349e-7}, {44, 7.4584e-1}, {45, 2.6980e-5},
                      {46, 2.0315e-1}, {47, 4.0914e-1}, {48, 4.6366},
                      {51, 5.2206e-2}, {52, 1.4439e-1}, {53, 4.0044e-8}, {54, 1.2791e-1}, {55, 4.6270e-6},
                      {56, 6.0867e-2}, {57, 1.2259e-1}, {58, 8.1033e-1},
                      {61, 1.5101e-1}, {62, 6.2395e-1}, {63, 9.9703e-2}, {64, 1.3592e-1}, {65, 1.2112e-2},
                      {66, 1.6606e-6}, {67, 2.0707}, {68, 3.0801e-7}, {69, 2.8135e-6},
                      {71, 2.0996e-1}, {81, 2.0996e-1}}});
        r.push_back({17.0,
                     {9.8883e-1, 1.6341e-2, 1.0021e-4, 1.3840e-2, 1.1124e-1, 9.8926e-1, 7.9687e-1, 9.4576e-1, 7.0221e-1,
                      9.4062e-1, 2.8475e-6},
                     9.7049e-1, 9.7666e-1,
                     {{11, 8.6507e-1}, {12, 1.4961e-1}, {13, 5.5359e-1}, {14, 7.8843e-1}, {15, 9.6598e-2},
                      {21, 9.2216e-3}, {22, 4.0714e-2}, {23, 5.6679e-3}, {24, 8.0723e-3}, {25, 9.8900e-4},
                      {26, 7.0089e-2}, {27, 2.6780e-1}, {28, 1.6422e-3},
                      {31, 4.0908e-1}, {32, 6.4237e-2}, {33, 5.9816e-7}, {34, 7.9036e-1}, {35, 6.3150e-5},
                      {41, 2.6826e-1}, {42, 8.3207e-1}, {43, 5.5187e-7}, {44, 7.2919e-1}, {45, 5.8263e-5},
                      {46, 2.7309e-1}, {47, 5.5322e-1}, {48, 4.5779},
                      {51, 6.4303e-2}, {52, 1.9945e-1}, {53, 1.3228e-7}, {54, 1.7479e-1}, {55, 1.3966e-5},
                      {56, 1.0110e-1}, {57, 2.0482e-1}, {58, 1.1154},
                      {61, 1.4747e-1}, {62, 6.5107e-1}, {63, 9.0636e-2}, {64, 1.2909e-1}, {65, 1.5815e-2},
                      {66, 5.1333e-6}, {67, 2.1281}, {68, 6.3694e-7}, {69, 8.7714e-6},
                      {71, 2.1152e-1}, {81, 2.1152e-1}}});
        r.push_back({inf,
                     {9.7971e-1, 3.0261e-2, 2.0798e-4, 2.5607e-2, 1.5056e-1, 9.8041e-1, 7.4535e-1, 9.3584e-1, 6.0171e-1,
                      9.3491e-1, 6.3621e-6},
                     9.4741e-1, 9.5812e-1,
                     {{11, 8.8890e-1}, {12, 1.3234e-1}, {13, 5.3390e-1}, {14, 8.0443e-1}, {15, 1.3481e-1},
                      {21, 1.0730e-2}, {22, 5.2344e-2}, {23, 5.9826e-3}, {24, 9.0140e-3}, {25, 1.5106e-3},
                      {26, 9.8823e-2}, {27, 3.8322e-1}, {28, 2.6338e-3},
                      {31, 4.1227e-1}, {32, 5.8927e-2}, {33, 1.3613e-6}, {34, 8.0020e-1}, {35, 1.3351e-4},
                      {41, 2.1746e-1}, {42, 8.2380e-1}, {43, 1.2025e-6}, {44, 7.0683e-1}, {45, 1.1793e-4},
                      {46, 3.6056e-1}, {47, 7.3790e-1}, {48, 4.4916},
                      {51, 7.3794e-2}, {52, 2.7955e-1}, {53, 4.0806e-7}, {54, 2.3986e-1}, {55, 4.0020e-5},
                      {56, 1.7187e-1}, {57, 3.5174e-1}, {58, 1.5445},
                      {61, 1.4418e-1}, {62, 7.0335e-1}, {63, 8.0389e-2}, {64, 1.2112e-1}, {65, 2.0298e-2},
                      {66, 1.5172e-5}, {67, 2.2756}, {68, 1.2781e-6}, {69, 2.6311e-5},
                      {71, 2.1169e-1}, {81, 2.1169e-1}}});
        return r;
    }();
    return t;
}

} // namespace

std::pair<ModelCoefficients, BCCoefficients> loadBuiltin(const GasModel& model, double chi) {
    if (!(chi > 0 && chi <= 1)) fail(ErrorKind::Domain, "accommodation coefficient chi must lie in (0, 1]");
    if (model.kind != GasModel::Kind::InversePowerLaw)
        fail(ErrorKind::Data, "no builtin table for custom gas '" + model.name + "'");
    for (const Row& r : rows()) {
        if (r.eta != model.eta) continue;
        ModelCoefficients mc;
        mc.k = r.k;
        mc.l1 = r.l1;
        mc.l2 = r.l2;
        mc.source = ModelCoefficients::Source::BuiltinTable;
        mc.eta = r.eta;
        BCCoefficients bc;
        bc.chi = chi;
        for (auto [id, v] : r.m) bc.m[id] = v;
        return {mc, bc};
    }
    fail(ErrorKind::Data, "no builtin table for eta=" + etaString(model.eta) + " (available: 5, 7, 10, 17, inf)");
}

} // namespace r13
