#pragma once
#include <vector>

namespace cosmon {

struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [a, b] (Newton iteration on Legendre roots).
QuadRule gauss_legendre(int n, double a, double b);

} // namespace cosmon
