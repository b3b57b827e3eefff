#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "cosmon/rays.hpp"
#include "cosmon/rng.hpp"

using namespace cosmon;
using namespace cosmon::rays;

namespace {

PhasePoint null_seed(const BackgroundParams& bg, double t0, double r0, double lambda,
                     int xi_sign) {
    const double spread = std::sqrt(std::max(0.0, r0 * r0 - bg.a_rot * bg.a_rot));
    return {t0, r0, 0.0, lambda, xi_sign * lambda * spread / r0, 0.0};
}

// closed-form t along the null ray: t(s) = t0 - [w - a atan(w/a)] + [c - a atan(c/a)]
double exact_t(const BackgroundParams& bg, const PhasePoint& q0, double s) {
    const double a = bg.a_rot;
    const double c = q0.r * q0.xi / q0.lambda;
    const double w = 2.0 * q0.lambda * s + c;
    auto F = [&](double x) { return x - a * std::atan(x / a); };
    return q0.t - (F(w) - F(c));
}

} // namespace

TEST_CASE("hamilton field hand values") {
    const BackgroundParams bg(1.0);
    const HamiltonVector v = hamilton_field(bg, {0, 1, 0, 1, 0, 0});
    CHECK(v.dt == 0.0); // t stationary at r = a
    CHECK(v.dr == 0.0);
    CHECK(v.dphi == 0.0);
    CHECK(v.dlambda == 0.0);
    CHECK(v.dxi == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(v.deta == 0.0);

    const HamiltonVector w = hamilton_field(bg, {0, 1e9, 0, 1, 1, 0});
    CHECK(w.dt == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(w.dr == doctest::Approx(2.0).epsilon(1e-14));

    const HamiltonVector z = hamilton_field(bg, {0, 2, 0, 0, 0, 0});
    CHECK(z.dt == 0.0);
    CHECK(z.dr == 0.0);
    CHECK(z.dxi == 0.0);

    CHECK_THROWS_AS(hamilton_field(bg, {0, 0, 0, 1, 0, 0}), std::domain_error);
}

TEST_CASE("integrate_ray reproduces r(1) = sqrt(5) from the turning point") {
    const BackgroundParams bg(1.0);
    const PhasePoint q0{0, 1, 0, 1, 0, 0};
    const RayPath p = integrate_ray(bg, q0, {-1.0, 0.0, 1.0}, 1e-12);
    REQUIRE(p.samples.size() == 3);
    CHECK(p.samples[2].q.r == doctest::Approx(std::sqrt(5.0)).epsilon(1e-10));
    CHECK(p.samples[0].q.r == doctest::Approx(std::sqrt(5.0)).epsilon(1e-10));
    // conserved coordinates
    for (const auto& s : p.samples) {
        CHECK(s.q.lambda == 1.0);
        CHECK(s.q.eta == 0.0);
        CHECK(s.q.phi == 0.0);
    }
}

TEST_CASE("closed-form match and conservation on random null seeds") {
    const BackgroundParams bg(1.0);
    SplitMix64 rng(21);
    std::vector<double> s_values;
    for (int i = -40; i <= 40; ++i) s_values.push_back(0.25 * i);
    for (int trial = 0; trial < 25; ++trial) {
        const double r0 = rng.uniform(1.0, 5.0);
        const double lam = rng.next_sign() * rng.uniform(0.5, 2.0);
        const PhasePoint q0 = null_seed(bg, rng.uniform(-1, 1), r0, lam, rng.next_sign());
        const RayPath p = integrate_ray(bg, q0, s_values, 1e-10);
        const double c = p.closed_form_c();
        for (const auto& smp : p.samples) {
            const double w = 2.0 * lam * smp.s + c;
            const double dev = std::abs(smp.q.r * smp.q.r - 1.0 - w * w);
            CHECK(dev <= 1e-8 * (1.0 + smp.s * smp.s) * lam * lam);
            // null constraint drift
            CHECK(std::abs(principal_symbol(bg, smp.q)) <= 1e-8 * lam * lam);
            // exact t along the flow
            CHECK(smp.q.t == doctest::Approx(exact_t(bg, q0, smp.s)).epsilon(1e-8));
        }
    }
}

TEST_CASE("t is monotone with |dt/ds| >= |lambda| once r > 2a") {
    const BackgroundParams bg(1.0);
    const PhasePoint q0 = null_seed(bg, 0.0, 1.2, -1.0, 1);
    std::vector<double> s_values;
    for (int i = 0; i <= 100; ++i) s_values.push_back(0.2 * i);
    const RayPath p = integrate_ray(bg, q0, s_values, 1e-10);
    double prev_t = p.samples.front().q.t;
    for (std::size_t i = 1; i < p.samples.size(); ++i) {
        // lambda < 0: t nondecreasing in s
        CHECK(p.samples[i].q.t >= prev_t - 1e-12);
        prev_t = p.samples[i].q.t;
        if (p.samples[i].q.r > kMonotoneRadiusFactor * bg.a_rot) {
            const HamiltonVector v = hamilton_field(bg, p.samples[i].q);
            CHECK(std::abs(v.dt) >= std::abs(q0.lambda));
        }
    }
}

TEST_CASE("no radial points: dxi/ds = 2 lambda^2 / a at r = a") {
    const BackgroundParams bg(2.0);
    const HamiltonVector v = hamilton_field(bg, {0, 2.0, 0, 3.0, 0, 0});
    CHECK(v.dxi == doctest::Approx(2.0 * 9.0 / 2.0).epsilon(1e-13));
    CHECK(v.dxi > 0.0);
}

TEST_CASE("integrate_ray rejects seeds off the characteristic set") {
    const BackgroundParams bg(1.0);
    CHECK_THROWS_AS(integrate_ray(bg, {0, 2, 0, 1, 1, 0}, {1.0}, 1e-10), std::domain_error);
    CHECK_THROWS_AS(integrate_ray(bg, null_seed(bg, 0, 2, 1, 1), {}, 1e-10),
                    std::invalid_argument);
}

TEST_CASE("forward flowout keeps the forward-in-time branch") {
    const BackgroundParams bg(1.0);

    // turning-point seed, lambda < 0: t is nondecreasing in s, so the s >= 0
    // branch is retained in full and t is stationary to second order at s = 0
    const PhasePoint turn{0, 1, 0, -1, 0, 0};
    const auto flows = forward_flowout(bg, {turn}, 2.0, 1e-10);
    REQUIRE(flows.size() == 1);
    double max_s = -1e300, min_s = 1e300;
    for (const auto& smp : flows[0].samples) {
        max_s = std::max(max_s, smp.s);
        min_s = std::min(min_s, smp.s);
        CHECK(smp.q.t >= turn.t - 1e-8);
    }
    CHECK(max_s == doctest::Approx(2.0).epsilon(1e-12)); // full forward branch kept
    // t is stationary only to second order at the turning point, so at most a
    // tolerance-sized sliver of the backward branch survives
    CHECK(min_s <= 0.0);
    CHECK(min_s > -0.2);

    // far away with lambda > 0: exactly one direction survives
    const PhasePoint far = null_seed(bg, 0.0, 4.0, 1.0, 1);
    const auto f2 = forward_flowout(bg, {far}, 2.0, 1e-10);
    for (const auto& smp : f2[0].samples) CHECK(smp.s <= 1e-12);
    CHECK(f2[0].samples.size() > 10);

    // empty seeds
    CHECK(forward_flowout(bg, {}, 1.0).empty());
}

TEST_CASE("escape analysis of a single turning point matches the closed form") {
    // K = {(t=0, r=a)}, R=2: escape at r=3 happens at |t| = 2 sqrt(2) - atan(2 sqrt(2))
    const BackgroundParams bg(1.0);
    const EscapeBox K{0.0, 0.0, 1.0, 1.0};
    const EscapeReport rep = escape_analysis(bg, K, 2.0, 1e-10, 1, 1);
    const double T_exact = 2.0 * std::sqrt(2.0) - std::atan(2.0 * std::sqrt(2.0));
    CHECK(rep.T >= T_exact - 1e-6);
    CHECK(rep.T <= T_exact + 0.01); // sampling overshoot only
    CHECK(rep.seed_count == 2);     // lambda = +-1, xi = 0
}

TEST_CASE("escape analysis boundary and monotonicity") {
    const BackgroundParams bg(1.0);
    // K already beyond R+1 at t = 0: incoming seeds escape at time zero, the
    // outgoing ones dip to the turning point and return; the dip time is the
    // closed-form [F(w_out) - F(w0)] with F(x) = x - atan(x), about 3.673 here
    const EscapeBox K_out{0.0, 0.0, 3.5, 3.5};
    const EscapeReport rep = escape_analysis(bg, K_out, 2.0, 1e-10, 1, 1);
    auto F = [](double x) { return x - std::atan(x); };
    const double w0 = std::sqrt(3.5 * 3.5 - 1.0), wout = std::sqrt(9.0 - 1.0);
    const double T_dip = F(wout) + F(w0);
    CHECK(rep.T >= T_dip - 1e-6);
    CHECK(rep.T <= T_dip + 0.02);

    // enlarging K never decreases T
    const EscapeBox K1{-0.2, 0.2, 1.0, 1.5};
    const EscapeBox K2{-0.4, 0.4, 1.0, 2.0};
    const double T1 = escape_analysis(bg, K1, 2.0, 1e-10, 4, 3).T;
    const double T2 = escape_analysis(bg, K2, 2.0, 1e-10, 4, 3).T;
    CHECK(T2 >= T1 - 1e-9);
}

TEST_CASE("batch integration: parallel equals serial exactly") {
    const BackgroundParams bg(1.0);
    SplitMix64 rng(33);
    std::vector<PhasePoint> seeds;
    for (int i = 0; i < 16; ++i)
        seeds.push_back(null_seed(bg, 0.0, rng.uniform(1.0, 4.0),
                                  rng.next_sign() * rng.uniform(0.5, 2.0), rng.next_sign()));
    std::vector<double> s_values;
    for (int i = -20; i <= 20; ++i) s_values.push_back(0.3 * i);
    const auto a = integrate_batch(bg, seeds, s_values, 1e-10);
    const auto b = integrate_batch_serial(bg, seeds, s_values, 1e-10);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        REQUIRE(a[i].samples.size() == b[i].samples.size());
        for (std::size_t j = 0; j < a[i].samples.size(); ++j) {
            CHECK(a[i].samples[j].q.r == b[i].samples[j].q.r); // bitwise
            CHECK(a[i].samples[j].q.t == b[i].samples[j].q.t);
            CHECK(a[i].samples[j].q.xi == b[i].samples[j].q.xi);
        }
    }
}

TEST_CASE("ray CSV carries the documented header and the sqrt(5) row") {
    const BackgroundParams bg(1.0);
    const RayPath p = integrate_ray(bg, {0, 1, 0, 1, 0, 0}, {0.0, 1.0}, 1e-12);
    const std::string path = "test_ray_out.csv";
    write_ray_csv(p, path);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "s,t,r,phi,lambda,xi,eta");
    std::string row0, row1;
    std::getline(in, row0);
    std::getline(in, row1);
    double s, t, r;
    std::sscanf(row1.c_str(), "%lf,%lf,%lf", &s, &t, &r);
    CHECK(s == 1.0);
    CHECK(r == doctest::Approx(std::sqrt(5.0)).epsilon(1e-10));
    std::remove(path.c_str());
}
