#pragma once
// Acceptance suite: one result per criterion, tolerances fixed here.
#include <string>
#include <vector>

namespace r13 {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;
    double seconds = 0;
};

namespace tol {
constexpr double lambdaRel = 1e-3;
constexpr double maxwellAnchor = 1e-10;
constexpr double maxwellBoundary = 1e-8;
constexpr double layerRatio = 1e-6;
constexpr double femL2 = 1e-4;
constexpr double femSeconds = 120;
constexpr double energyStep = 1e-12;
constexpr double symmetry = 1e-12;
constexpr double superBurnett = 1e-10;
constexpr double order = 1.9;
} // namespace tol

CriterionResult criterion(int id);
// all criteria in order; ids outside 1..9 are rejected
std::vector<CriterionResult> runAcceptance(const std::vector<int>& ids = {});

std::string formatResult(const CriterionResult& r);

} // namespace r13
