#include "cosmon/radial_ops.hpp"

#include <cmath>
#include <stdexcept>

namespace cosmon {

std::vector<double> fd_weights(double z, const std::vector<double>& nodes, int m) {
    // B. Fornberg, Math. Comp. 51 (1988) 699-706.
    const int n = static_cast<int>(nodes.size()) - 1;
    if (n < m) throw std::invalid_argument("fd_weights: too few nodes");
    std::vector<std::vector<double>> c(n + 1, std::vector<double>(m + 1, 0.0));
    double c1 = 1.0;
    double c4 = nodes[0] - z;
    c[0][0] = 1.0;
    for (int i = 1; i <= n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = nodes[i] - z;
        for (int j = 0; j < i; ++j) {
            const double c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k)
                c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n + 1);
    for (int i = 0; i <= n; ++i) w[i] = c[i][m];
    return w;
}

namespace {

// Weights for d/dr at row `row` exact on { r^(nu+2i), i = 0..4 } over the
// first five grid nodes.  The regular Frobenius branch lives in this span, so
// (r d/dr)^2 built from these rows is exact on it.
std::vector<double> frobenius_weights(const std::vector<double>& r, int row, double nu) {
    const int n = 5;
    const double rr = r[row];
    std::vector<double> rho(n);
    for (int i = 0; i < n; ++i) rho[i] = r[i] / rr;
    // Solve sum_i v_i rho_i^(2m) = nu + 2m, m = 0..4, then w_i = v_i rho_i^(-nu) / rr.
    std::vector<cplx> M(n * n);
    for (int m = 0; m < n; ++m)
        for (int i = 0; i < n; ++i) M[m * n + i] = std::pow(rho[i], 2.0 * m);
    DenseLU lu(std::move(M), n);
    std::vector<cplx> rhs(n);
    for (int m = 0; m < n; ++m) rhs[m] = nu + 2.0 * m;
    lu.solve_inplace(rhs);
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) w[i] = rhs[i].real() * std::pow(rho[i], -nu) / rr;
    return w;
}

} // namespace

BandedMatrix radial_d1(const std::vector<double>& r, const RadialD1Options& opts) {
    const int n = static_cast<int>(r.size());
    if (n < 6) throw std::invalid_argument("radial_d1: grid too small");
    BandedMatrix d(n, 4, 4);

    // Large regular exponents underflow the far-node weights; the plain
    // polynomial stencil is then just as consistent (the field is ~0 there).
    const bool use_frob = opts.inner == InnerEdge::Frobenius && opts.frobenius_nu <= 30.0;

    for (int i = 0; i < n; ++i) {
        int lo;
        if (i < 2)
            lo = 0;
        else if (i > n - 3)
            lo = n - 5;
        else
            lo = i - 2;

        if (i < 2 && use_frob) {
            const auto w = frobenius_weights(r, i, opts.frobenius_nu);
            for (int c = 0; c < 5; ++c) d.at(i, c) = w[c];
            continue;
        }

        std::vector<double> nodes(r.begin() + lo, r.begin() + lo + 5);
        const auto w = fd_weights(r[i], nodes, 1);
        for (int c = 0; c < 5; ++c) d.at(i, lo + c) += w[c];
    }
    return d;
}

BandedMatrix radial_rdr2(const std::vector<double>& r, const RadialD1Options& opts) {
    const int n = static_cast<int>(r.size());
    const BandedMatrix d1 = radial_d1(r, opts);
    BandedMatrix a(n, 8, 8);
    // a = diag(r) d1 diag(r) d1
    for (int i = 0; i < n; ++i) {
        const int c0 = std::max(0, i - 4), c1 = std::min(n - 1, i + 4);
        for (int c = c0; c <= c1; ++c) {
            const double lik = r[i] * d1.get(i, c) * r[c];
            if (lik == 0.0) continue;
            const int j0 = std::max(0, c - 4), j1 = std::min(n - 1, c + 4);
            for (int j = j0; j <= j1; ++j) {
                const double v = d1.get(c, j);
                if (v != 0.0) a.at(i, j) += lik * v;
            }
        }
    }
    return a;
}

} // namespace cosmon
