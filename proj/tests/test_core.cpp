#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>

#include "cosmon/cutoffs.hpp"
#include "cosmon/fft.hpp"
#include "cosmon/field.hpp"
#include "cosmon/linalg.hpp"
#include "cosmon/ode.hpp"
#include "cosmon/quadrature.hpp"
#include "cosmon/radial_ops.hpp"
#include "cosmon/rng.hpp"

using namespace cosmon;

TEST_CASE("fft matches the naive DFT reference") {
    SplitMix64 rng(1);
    for (std::size_t n : {8u, 64u, 256u}) {
        std::vector<cplx> x(n);
        for (auto& v : x) v = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
        auto ref = dft_naive(x);
        auto y = x;
        fft(y);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(std::abs(y[i] - ref[i]) < 1e-11 * std::sqrt(double(n)));
    }
}

TEST_CASE("ifft inverts fft and Parseval holds") {
    SplitMix64 rng(2);
    std::vector<cplx> x(512);
    for (auto& v : x) v = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    auto y = x;
    fft(y);
    double sx = 0, sy = 0;
    for (auto& v : x) sx += std::norm(v);
    for (auto& v : y) sy += std::norm(v);
    CHECK(sy / (512.0 * sx) == doctest::Approx(1.0).epsilon(1e-12));
    ifft(y);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(y[i] - x[i]) < 1e-13);
}

TEST_CASE("dense LU solves random systems") {
    SplitMix64 rng(3);
    const int n = 40;
    std::vector<cplx> a(n * n);
    for (auto& v : a) v = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    std::vector<cplx> x_true(n);
    for (auto& v : x_true) v = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    std::vector<cplx> b(n, cplx(0, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b[i] += a[i * n + j] * x_true[j];
    DenseLU lu(a, n);
    auto x = lu.solve(b);
    for (int i = 0; i < n; ++i) CHECK(std::abs(x[i] - x_true[i]) < 1e-10);
}

TEST_CASE("banded LU agrees with dense LU") {
    SplitMix64 rng(4);
    const int n = 60, kl = 3, ku = 2;
    BandedMatrix bm(n, kl, ku);
    std::vector<cplx> dense(n * n, cplx(0, 0));
    for (int i = 0; i < n; ++i)
        for (int j = std::max(0, i - kl); j <= std::min(n - 1, i + ku); ++j) {
            const double v = rng.uniform(-1, 1) + (i == j ? 4.0 : 0.0);
            bm.at(i, j) = v;
            dense[i * n + j] = v;
        }
    std::vector<cplx> b(n);
    for (auto& v : b) v = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    BandedLU blu(bm);
    auto xb = b;
    blu.solve_inplace(xb);
    DenseLU dlu(dense, n);
    auto xd = dlu.solve(b);
    for (int i = 0; i < n; ++i) CHECK(std::abs(xb[i] - xd[i]) < 1e-11);

    // matvec round trip
    auto y = bm.matvec(xb);
    for (int i = 0; i < n; ++i) CHECK(std::abs(y[i] - b[i]) < 1e-11);
}

TEST_CASE("banded LU needs pivoting and still works") {
    BandedMatrix bm(4, 1, 1);
    bm.at(0, 0) = 1e-14;
    bm.at(0, 1) = 1.0;
    bm.at(1, 0) = 1.0;
    bm.at(1, 1) = 1.0;
    bm.at(1, 2) = 2.0;
    bm.at(2, 1) = -1.0;
    bm.at(2, 2) = 3.0;
    bm.at(2, 3) = 1.0;
    bm.at(3, 2) = 2.0;
    bm.at(3, 3) = -1.0;
    std::vector<double> x_true{1.0, -2.0, 3.0, 0.5};
    std::vector<double> b(4, 0.0);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) b[i] += bm.get(i, j) * x_true[j];
    BandedLU lu(bm);
    lu.solve_inplace(b);
    for (int i = 0; i < 4; ++i) CHECK(b[i] == doctest::Approx(x_true[i]).epsilon(1e-10));
}

TEST_CASE("Dormand-Prince integrates circular motion to tolerance") {
    DormandPrince<2>::Rhs rhs = [](double, const std::array<double, 2>& y,
                                   std::array<double, 2>& dy) {
        dy[0] = -y[1];
        dy[1] = y[0];
    };
    DormandPrince<2> rk(rhs, 1e-12, 1e-12);
    const auto out = rk.integrate(0.0, {1.0, 0.0}, {M_PI / 2, M_PI, 10.0});
    CHECK(std::abs(out[0][0]) < 1e-9);
    CHECK(out[1][0] == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(out[2][0] == doctest::Approx(std::cos(10.0)).epsilon(1e-8));
    CHECK(out[2][1] == doctest::Approx(std::sin(10.0)).epsilon(1e-8));
}

TEST_CASE("Dormand-Prince integrates backwards") {
    DormandPrince<1>::Rhs rhs = [](double, const std::array<double, 1>& y,
                                   std::array<double, 1>& dy) { dy[0] = y[0]; };
    DormandPrince<1> rk(rhs, 1e-12, 1e-14);
    const auto out = rk.integrate(0.0, {1.0}, {-1.0, -2.0});
    CHECK(out[0][0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-10));
    CHECK(out[1][0] == doctest::Approx(std::exp(-2.0)).epsilon(1e-10));
}

TEST_CASE("Gauss-Legendre integrates polynomials exactly and smooth functions fast") {
    const QuadRule q = gauss_legendre(12, 0.0, 2.0);
    double s = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i)
        s += q.weights[i] * std::pow(q.nodes[i], 7.0);
    CHECK(s == doctest::Approx(std::pow(2.0, 8.0) / 8.0).epsilon(1e-13));
    s = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) s += q.weights[i] * std::exp(q.nodes[i]);
    CHECK(s == doctest::Approx(std::exp(2.0) - 1.0).epsilon(1e-12));
}

TEST_CASE("plateau cutoffs hit their plateau and support exactly") {
    const Plateau rho(2.0 / 3, 3.0 / 4, 5.0 / 4, 4.0 / 3);
    CHECK(rho(0.5) == 0.0);
    CHECK(rho(2.0 / 3) == 0.0);
    CHECK(rho(0.70) > 0.0);
    CHECK(rho(0.70) < 1.0);
    CHECK(rho(1.0) == 1.0);
    CHECK(rho(5.0 / 4) == 1.0);
    CHECK(rho(4.0 / 3) == 0.0);
    CHECK(rho(2.0) == 0.0);
}

TEST_CASE("bump derivatives match finite differences") {
    const Bump b(0.3, 0.9);
    const double h = 1e-6;
    for (double r : {0.35, 0.5, 0.62, 0.85}) {
        const double fd1 = (b.value(r + h) - b.value(r - h)) / (2 * h);
        const double fd2 = (b.value(r + h) - 2 * b.value(r) + b.value(r - h)) / (h * h);
        CHECK(b.deriv(r) == doctest::Approx(fd1).epsilon(1e-6));
        CHECK(b.deriv2(r) == doctest::Approx(fd2).epsilon(1e-4));
    }
    CHECK(b.value(0.29) == 0.0);
    CHECK(b.deriv(0.91) == 0.0);
}

TEST_CASE("smooth_step_deriv matches finite differences") {
    const double h = 1e-7;
    for (double y : {0.2, 0.5, 0.77}) {
        const double fd = (smooth_step(y + h) - smooth_step(y - h)) / (2 * h);
        CHECK(smooth_step_deriv(y) == doctest::Approx(fd).epsilon(1e-5));
    }
}

TEST_CASE("SplitMix64 reproduces and stays in range") {
    SplitMix64 rng(1234567);
    const uint64_t a = rng.next_u64();
    const uint64_t b = rng.next_u64();
    SplitMix64 rng2(1234567);
    CHECK(rng2.next_u64() == a);
    CHECK(rng2.next_u64() == b);
    CHECK(a != b);
    for (int i = 0; i < 1000; ++i) {
        const double d = rng.next_double();
        CHECK(d >= 0.0);
        CHECK(d < 1.0);
    }
}

TEST_CASE("fd_weights reproduce the centered 4th-order stencil") {
    std::vector<double> nodes{-2, -1, 0, 1, 2};
    const auto w = fd_weights(0.0, nodes, 1);
    CHECK(w[0] == doctest::Approx(1.0 / 12).epsilon(1e-12));
    CHECK(w[1] == doctest::Approx(-8.0 / 12).epsilon(1e-12));
    CHECK(std::abs(w[2]) < 1e-12);
    CHECK(w[3] == doctest::Approx(8.0 / 12).epsilon(1e-12));
    CHECK(w[4] == doctest::Approx(-1.0 / 12).epsilon(1e-12));
}

TEST_CASE("radial (r d/dr)^2 is 4th order on smooth fields") {
    auto residual = [](std::size_t n) {
        const auto r = SpacetimeField::staggered_grid(4.0, n);
        RadialD1Options opts;
        const BandedMatrix a = radial_rdr2(r, opts);
        std::vector<double> u(n), exact(n);
        for (std::size_t j = 0; j < n; ++j) {
            u[j] = std::sin(r[j]);
            // (r d/dr)^2 sin r = r cos r - r^2 sin r
            exact[j] = r[j] * std::cos(r[j]) - r[j] * r[j] * std::sin(r[j]);
        }
        const auto v = a.matvec(u);
        double worst = 0.0;
        for (std::size_t j = 4; j + 4 < n; ++j) worst = std::max(worst, std::abs(v[j] - exact[j]));
        return worst;
    };
    const double e1 = residual(128), e2 = residual(256);
    CHECK(e2 < e1 / 12.0); // ~16x per refinement
}

TEST_CASE("Frobenius edge rows differentiate the regular branch exactly") {
    const auto r = SpacetimeField::staggered_grid(2.0, 64);
    RadialD1Options opts;
    opts.inner = InnerEdge::Frobenius;
    opts.frobenius_nu = 0.6;
    const BandedMatrix d1 = radial_d1(r, opts);
    // f = r^0.6 + 0.3 r^2.6: rows 0,1 must be exact up to roundoff
    std::vector<double> u(64), fp(64);
    for (int j = 0; j < 64; ++j) {
        u[j] = std::pow(r[j], 0.6) + 0.3 * std::pow(r[j], 2.6);
        fp[j] = 0.6 * std::pow(r[j], -0.4) + 0.3 * 2.6 * std::pow(r[j], 1.6);
    }
    const auto v = d1.matvec(u);
    CHECK(std::abs(v[0] - fp[0]) < 1e-8 * std::abs(fp[0]));
    CHECK(std::abs(v[1] - fp[1]) < 1e-8 * std::abs(fp[1]));
}

TEST_CASE("weighted field norm uses r dr dt") {
    // u = 1 on t in [0, T), r staggered on (0, 2): |u|^2 = T * r_max^2 / 2
    SpacetimeField u = SpacetimeField::zeros(3.0, 8, SpacetimeField::staggered_grid(2.0, 256));
    for (auto& v : u.values) v = cplx(1.0, 0.0);
    CHECK(u.weighted_norm_sq() == doctest::Approx(3.0 * 2.0).epsilon(1e-12));
}

TEST_CASE("field binary serialization round-trips the payload") {
    SpacetimeField u = SpacetimeField::zeros(4.0, 4, SpacetimeField::staggered_grid(2.0, 8));
    SplitMix64 rng(9);
    for (auto& v : u.values) v = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    write_field_binary(u, "test_field.json", "test_field.bin");
    std::ifstream bin("test_field.bin", std::ios::binary);
    REQUIRE(bin.good());
    std::vector<double> rg(8);
    bin.read(reinterpret_cast<char*>(rg.data()), 8 * sizeof(double));
    for (int j = 0; j < 8; ++j) CHECK(rg[j] == u.r[j]);
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        double re, im;
        bin.read(reinterpret_cast<char*>(&re), sizeof(double));
        bin.read(reinterpret_cast<char*>(&im), sizeof(double));
        CHECK(re == u.values[i].real());
        CHECK(im == u.values[i].imag());
    }
    std::ifstream js("test_field.json");
    std::string first;
    std::getline(js, first);
    CHECK(first == "{");
    std::remove("test_field.json");
    std::remove("test_field.bin");
}
