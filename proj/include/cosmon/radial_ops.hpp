#pragma once
#include <vector>

#include "cosmon/linalg.hpp"

namespace cosmon {

// Fornberg finite-difference weights: w[i] such that sum_i w[i] f(x[i])
// approximates the m-th derivative of f at z.
std::vector<double> fd_weights(double z, const std::vector<double>& nodes, int m);

enum class InnerEdge {
    OneSided,  // plain 4th-order biased stencils at the first two rows
    Frobenius, // stencils exact on span{ r^(nu+2i) }, i = 0..4 (regular branch)
};

struct RadialD1Options {
    InnerEdge inner = InnerEdge::OneSided;
    double frobenius_nu = 0.0; // |nu|, used when inner == Frobenius
};

// 4th-order first-derivative matrix d/dr on a strictly increasing grid
// (5-point centered stencils inside, edge handling per options). kl = ku = 4.
BandedMatrix radial_d1(const std::vector<double>& r, const RadialD1Options& opts);

// (r d/dr)^2 = diag(r) D1 diag(r) D1, kl = ku = 8.
BandedMatrix radial_rdr2(const std::vector<double>& r, const RadialD1Options& opts);

} // namespace cosmon
