#pragma once
// Gauss rules used by the collision kernel and the half-space integrals.
#include <vector>

namespace r13::quad {

// nodes/weights on [-1, 1]
void gaussLegendre(int n, std::vector<double>& x, std::vector<double>& w);

// probabilists' Hermite: weights sum to 1 for the standard normal density
void gaussHermite(int n, std::vector<double>& x, std::vector<double>& w);

} // namespace r13::quad
