#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "cosmon/fft.hpp"
#include "cosmon/modes.hpp"
#include "cosmon/rng.hpp"
#include "cosmon/solver.hpp"
#include "cosmon/specfun.hpp"

using namespace cosmon;
using namespace cosmon::solver;

namespace {

GridSpec test_grid(std::size_t nt = 64, std::size_t nr = 256, int k = 0, double m = 0.0) {
    GridSpec g{32.0, nt, 6.0, nr};
    g.bg = BackgroundParams(1.0);
    g.mode = ModeParams(k, m);
    return g;
}

AbsorberSpec test_spec(const GridSpec& g, double R = 3.3, double r0 = 2.5) {
    return AbsorberSpec(g.bg, R, r0);
}

} // namespace

TEST_CASE("AbsorberSpec enforces its constraints") {
    const BackgroundParams bg(1.0);
    CHECK_THROWS_AS(AbsorberSpec(bg, 3.0, 2.0), std::invalid_argument);  // 1 - 1/9 < 9/10
    CHECK_THROWS_AS(AbsorberSpec(bg, 3.3, 3.4), std::invalid_argument);  // R < R0
    const AbsorberSpec ok(bg, 3.3, 2.5);
    CHECK(ok.chi(3.3) == 0.0);
    CHECK(ok.chi(3.4) == 0.0); // rise starts at R + 1/3
    CHECK(ok.chi(4.31) == 1.0);
    CHECK(ok.chi_tilde(3.3) == 0.0);
    CHECK(ok.chi_tilde(3.64) == 1.0);
    // chi~ = 1 wherever chi > 0 and chi~ chi = chi on a dense sample
    for (double r = 3.0; r < 6.0; r += 0.01) {
        if (ok.chi(r) > 0.0) CHECK(ok.chi_tilde(r) == 1.0);
        CHECK(ok.chi_tilde(r) * ok.chi(r) == ok.chi(r));
    }
}

TEST_CASE("absorber grid validation and resolution warning") {
    const GridSpec g = test_grid();
    const AbsorberSpec spec = test_spec(g);
    CHECK(validate_absorber_on_grid(spec, g).empty());

    GridSpec tiny = test_grid(16, 32);
    const auto warnings = validate_absorber_on_grid(spec, tiny);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("under-resolved") != std::string::npos);

    GridSpec bad = test_grid();
    bad.r_max = 5.0; // R + 2 = 5.3 does not fit
    CHECK_THROWS_AS(validate_absorber_on_grid(spec, bad), std::invalid_argument);
}

TEST_CASE("absorber symbol hand values and sign property") {
    const GridSpec g = test_grid();
    const AbsorberSpec spec = test_spec(g);
    // rho(1) = 1, psi(0) = 1, chi(R+2) = 1: w = -sgn(-2) * 4 = +4
    CHECK(absorber_symbol(spec, spec.R + 2.0, -2.0, -2.0, 0.0) ==
          doctest::Approx(4.0).epsilon(1e-14));
    CHECK(absorber_symbol(spec, spec.R - 0.1, -2.0, -2.0, 0.0) == 0.0); // outside supp chi
    CHECK(absorber_symbol(spec, spec.R + 2.0, 0.0, 1.0, 0.0) == 0.0);   // lambda = 0 convention

    SplitMix64 rng(51);
    for (int i = 0; i < 20000; ++i) {
        const double r = rng.uniform(0.1, 6.0);
        const double lam = rng.uniform(-5, 5);
        const double xi = rng.uniform(-7, 7);
        const double eta = rng.uniform(-2, 2);
        const double w = absorber_symbol(spec, r, lam, xi, eta);
        CHECK(w * (lam > 0 ? 1.0 : lam < 0 ? -1.0 : 0.0) <= 0.0);
    }

    // elliptic value on Sigma_- with r > R+1: w = -sgn(lambda) lambda^2 exactly
    for (double r : {4.4, 5.0, 5.7}) {
        for (double lam : {-3.0, -1.0, 2.0}) {
            const double xi = lam * std::sqrt(1.0 - 1.0 / (r * r));
            const double w = absorber_symbol(spec, r, lam, xi, 0.0);
            CHECK(w == doctest::Approx(-(lam > 0 ? 1.0 : -1.0) * lam * lam).epsilon(1e-14));
        }
    }
}

TEST_CASE("apply_W: kernel support is exact") {
    const GridSpec g = test_grid();
    const AbsorberSpec spec = test_spec(g);
    SpacetimeField u = g.make_field();
    // field supported inside r < R
    for (std::size_t it = 0; it < u.n_t; ++it)
        for (std::size_t j = 0; j < u.n_r(); ++j)
            if (u.r[j] < spec.R)
                u.at(it, j) = cplx(std::sin(u.t(it) + u.r[j]), std::cos(2 * u.t(it)));
    const SpacetimeField wu = apply_W(spec, g, u);
    for (const auto& v : wu.values) CHECK(std::abs(v) == 0.0);

    // arbitrary field: output vanishes identically at r <= R
    SpacetimeField w = g.make_field();
    SplitMix64 rng(52);
    for (auto& v : w.values) v = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    const SpacetimeField ww = apply_W(spec, g, w);
    for (std::size_t it = 0; it < ww.n_t; ++it)
        for (std::size_t j = 0; j < ww.n_r(); ++j)
            if (ww.r[j] <= spec.R) CHECK(std::abs(ww.at(it, j)) == 0.0);
}

TEST_CASE("apply_W commutes with the spectral time derivative") {
    const GridSpec g = test_grid();
    const AbsorberSpec spec = test_spec(g);
    SpacetimeField u = g.make_field();
    SplitMix64 rng(53);
    for (auto& v : u.values) v = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));

    auto ddt = [&](const SpacetimeField& f) {
        SpacetimeField out = SpacetimeField::zeros(f.t_period, f.n_t, f.r);
        std::vector<cplx> col(f.n_t);
        for (std::size_t j = 0; j < f.n_r(); ++j) {
            for (std::size_t it = 0; it < f.n_t; ++it) col[it] = f.at(it, j);
            fft(col);
            for (std::size_t p = 0; p < f.n_t; ++p) {
                const double lam = 2.0 * M_PI * signed_bin(p, f.n_t) / f.t_period;
                col[p] *= cplx(0.0, lam);
            }
            ifft(col);
            for (std::size_t it = 0; it < f.n_t; ++it) out.at(it, j) = col[it];
        }
        return out;
    };

    const SpacetimeField a = apply_W(spec, g, ddt(u));
    const SpacetimeField b = ddt(apply_W(spec, g, u));
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
        scale = std::max(scale, std::abs(a.values[i]));
    }
    CHECK(worst <= 1e-12 * std::max(scale, 1.0));
}

TEST_CASE("apply_W is self-adjoint in the r dr dt inner product") {
    const GridSpec g = test_grid();
    const AbsorberSpec spec = test_spec(g);
    SplitMix64 rng(54);
    SpacetimeField u = g.make_field(), v = g.make_field();
    for (auto& x : u.values) x = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    for (auto& x : v.values) x = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    const SpacetimeField wu = apply_W(spec, g, u);
    const SpacetimeField wv = apply_W(spec, g, v);
    cplx ip1(0, 0), ip2(0, 0);
    double scale = 0.0;
    for (std::size_t it = 0; it < g.n_t; ++it)
        for (std::size_t j = 0; j < g.n_r; ++j) {
            const double w = g.r(j);
            ip1 += wu.at(it, j) * std::conj(v.at(it, j)) * w;
            ip2 += u.at(it, j) * std::conj(wv.at(it, j)) * w;
            scale = std::max(scale, std::abs(wu.at(it, j)));
        }
    CHECK(std::abs(ip1 - ip2) <= 1e-12 * std::max(1.0, std::abs(ip1)) * g.n_t);
}

TEST_CASE("apply_W acts as -sgn(lambda) lambda^2 on a plateau wave packet") {
    // packet at lambda0 < 0, xi0/lambda0 = 1, inside chi = 1: output ~ +lambda0^2 u
    GridSpec g = test_grid(512, 512);
    const AbsorberSpec spec = test_spec(g);
    const double lambda0 = -2.0 * M_PI * 204.0 / g.t_period; // on the lattice, ~ -40
    const double xi0 = lambda0;
    const double rc = spec.R + 1.7, sigma_r = 0.45;
    SpacetimeField u = g.make_field();
    for (std::size_t it = 0; it < u.n_t; ++it)
        for (std::size_t j = 0; j < u.n_r(); ++j) {
            const double dr = u.r[j] - rc;
            const double envelope = std::exp(-0.5 * dr * dr / (sigma_r * sigma_r));
            const double ph = lambda0 * u.t(it) + xi0 * u.r[j];
            u.at(it, j) = envelope * cplx(std::cos(ph), std::sin(ph));
        }
    const SpacetimeField wu = apply_W(spec, g, u);
    // compare on the envelope core
    double worst = 0.0;
    for (std::size_t it = 0; it < u.n_t; it += 16)
        for (std::size_t j = 0; j < u.n_r(); ++j) {
            if (std::abs(u.r[j] - rc) > sigma_r) continue;
            const cplx expect = lambda0 * lambda0 * u.at(it, j);
            worst = std::max(worst, std::abs(wu.at(it, j) - expect) /
                                        (lambda0 * lambda0 * std::abs(u.at(it, j))));
        }
    CHECK(worst < 5.0 / std::abs(lambda0)); // symbol-calculus error O(1/lambda0)
}

TEST_CASE("dense W block matches the FFT route") {
    const GridSpec g = test_grid(64, 256);
    const AbsorberSpec spec = test_spec(g);
    const double lambda = g.lambda(7);
    const WBlock blk = build_wblock(spec, g, lambda);
    REQUIRE_FALSE(blk.empty());

    // single-frequency field e^{i lambda t} v(r)
    SplitMix64 rng(55);
    std::vector<cplx> v(g.n_r);
    for (auto& x : v) x = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    SpacetimeField u = g.make_field();
    for (std::size_t it = 0; it < u.n_t; ++it) {
        const double ph = lambda * u.t(it);
        for (std::size_t j = 0; j < g.n_r; ++j)
            u.at(it, j) = cplx(std::cos(ph), std::sin(ph)) * v[j];
    }
    const SpacetimeField wu = apply_W(spec, g, u); // FFT route
    // dense route
    std::vector<cplx> wv(g.n_r, cplx(0, 0));
    for (int i = 0; i < blk.nwin; ++i)
        for (int j = 0; j < blk.nwin; ++j)
            wv[blk.j0 + i] += blk.dense[i * blk.nwin + j] * v[blk.j0 + j];
    for (std::size_t j = 0; j < g.n_r; ++j)
        CHECK(std::abs(wu.at(0, j) - wv[j]) < 1e-11);
}

TEST_CASE("W block is empty for |lambda| <= 5|k| and at lambda = 0") {
    GridSpec g = test_grid(64, 256, /*k=*/1);
    const AbsorberSpec spec = test_spec(g);
    CHECK(build_wblock(spec, g, 0.0).empty());
    CHECK(build_wblock(spec, g, 4.9).empty());  // psi(|k/lambda|) = 0
    CHECK(build_wblock(spec, g, -5.0).empty());
    CHECK_FALSE(build_wblock(spec, g, 10.5).empty());
}

TEST_CASE("P_lambda: Schur solve equals the dense reference") {
    const GridSpec g = test_grid(64, 192);
    const AbsorberSpec spec = test_spec(g);
    for (double lambda : {0.0, 1.2, -7.7, 19.0}) {
        const PLambda op = assemble_P_lambda(spec, g, lambda);
        SplitMix64 rng(60);
        std::vector<cplx> f(g.n_r);
        for (auto& x : f) x = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
        const auto u1 = op.solve(f);
        const auto u2 = op.solve_dense(f);
        double scale = 0.0;
        for (const auto& x : u2) scale = std::max(scale, std::abs(x));
        for (std::size_t j = 0; j < f.size(); ++j)
            CHECK(std::abs(u1[j] - u2[j]) <= 1e-9 * scale);
        // and the solution actually solves
        const auto pu = op.apply(u1);
        for (std::size_t j = 0; j < f.size(); ++j)
            CHECK(std::abs(pu[j] - f[j]) <= 1e-9 * std::max(1.0, scale));
    }
}

TEST_CASE("P_lambda annihilates the sampled regular branch in the interior") {
    // at the lattice frequency lambda, the exact J_nu(kappa r) kills Box_k + m^2
    auto interior_residual = [](std::size_t nr) {
        GridSpec g = test_grid(64, nr);
        const AbsorberSpec spec = test_spec(g);
        const double lambda = 1.0;
        const modes::ExactMode em =
            modes::exact_mode(g.bg, g.mode, lambda, modes::Branch::regular);
        const PLambda op = assemble_P_lambda(spec, g, lambda);
        std::vector<cplx> u(g.n_r);
        for (std::size_t j = 0; j < g.n_r; ++j) u[j] = em(g.r(j));
        const auto res = op.apply_box_only(u);
        double worst = 0.0;
        for (std::size_t j = 0; j < g.n_r; ++j)
            if (g.r(j) < spec.R) worst = std::max(worst, std::abs(res[j]));
        return worst;
    };
    const double e1 = interior_residual(128), e2 = interior_residual(256);
    CHECK(e2 < e1 / 6.0); // r^-2-amplified edge truncation converges at ~8x
    CHECK(e2 < 2e-4);
}

TEST_CASE("lambda = 0, k = 0, m > 0 block is positive: bump source gives a positive profile") {
    GridSpec g = test_grid(64, 256, 0, /*m=*/1.0);
    const AbsorberSpec spec = test_spec(g);
    const PLambda op = assemble_P_lambda(spec, g, 0.0);
    std::vector<cplx> f(g.n_r, cplx(0, 0));
    const Bump b(1.5, 2.5);
    for (std::size_t j = 0; j < g.n_r; ++j) f[j] = b(g.r(j));
    const auto u = op.solve(f);
    for (std::size_t j = 0; j < g.n_r; ++j) {
        CHECK(u[j].real() >= -1e-10);
        CHECK(std::abs(u[j].imag()) < 1e-12);
    }
}

TEST_CASE("incoming component decays across the absorber band at high |lambda|") {
    GridSpec g = test_grid(64, 2880);
    const AbsorberSpec spec = test_spec(g);
    const DampingProbe probe = damping_direction_probe(spec, g, -30.0);
    CHECK(probe.incoming_outer > 0.0);
    CHECK(probe.ratio <= 0.1);
}

TEST_CASE("solve_forward: zero forcing, support contract, serial equals parallel") {
    GridSpec g = test_grid(64, 256);
    const AbsorberSpec spec = test_spec(g);
    const SpacetimeField zero = g.make_field();
    auto [u0, rep0] = solve_forward(spec, g, zero);
    for (const auto& v : u0.values) CHECK(std::abs(v) == 0.0);
    CHECK(rep0.interior_residual_rel == 0.0);

    // forcing leaking past R0 is rejected
    SpacetimeField bad = g.make_field();
    bad.at(3, g.n_r - 10) = 1.0;
    CHECK_THROWS_AS(solve_forward(spec, g, bad), std::invalid_argument);

    // deterministic across threading
    SpacetimeField f = g.make_field();
    const Bump bt(7.0, 9.0), br(1.6, 2.4);
    for (std::size_t it = 0; it < f.n_t; ++it)
        for (std::size_t j = 0; j < f.n_r(); ++j) f.at(it, j) = bt(f.t(it)) * br(f.r[j]);
    auto [up, repp] = solve_forward(spec, g, f);
    auto [us, reps] = solve_forward_serial(spec, g, f);
    for (std::size_t i = 0; i < up.values.size(); ++i) CHECK(up.values[i] == us.values[i]);
    CHECK(repp.interior_residual_rel == reps.interior_residual_rel);
}

TEST_CASE("solve_forward: bump forcing solves the equation and reaches the elliptic region") {
    GridSpec g = test_grid(128, 256);
    const AbsorberSpec spec = test_spec(g);
    SpacetimeField f = g.make_field();
    const Bump bt(7.0, 9.0), br(1.6, 2.4);
    for (std::size_t it = 0; it < f.n_t; ++it)
        for (std::size_t j = 0; j < f.n_r(); ++j) f.at(it, j) = bt(f.t(it)) * br(f.r[j]);
    auto [u, rep] = solve_forward(spec, g, f);
    CHECK(rep.interior_residual_rel <= 1e-8); // certifies the per-frequency solves
    CHECK(rep.elliptic_mass_fraction > 1e-3);
    CHECK(rep.elliptic_mass_fraction < 1.0);
    CHECK(u.weighted_norm_sq() > 0.0);
}

TEST_CASE("coercivity: identity to 1e-8 and nonnegative slack for k in {0, 1, 3}") {
    const BackgroundParams bg(1.0);
    for (int k : {0, 1, 3}) {
        const ModeParams mode(k, k == 1 ? 0.4 : 0.0);
        const CoercivityReport rep = coercivity_check(bg, mode, 100, 32.0, 1000 + k);
        CHECK(rep.max_identity_rel_err <= 1e-8);
        CHECK(rep.min_slack >= -1e-9);
        CHECK(rep.trials == 100);
    }
    // zero trial: both sides vanish
    const CoercivityReport z = coercivity_check(bg, ModeParams(0, 0.0), 0, 32.0, 1);
    CHECK(z.max_identity_rel_err == 0.0);
    CHECK(z.min_slack == 0.0);
}

TEST_CASE("coercivity trial support precondition is a contract error") {
    const BackgroundParams bg(1.0);
    CoercivityTrial trial;
    trial.t_period = 32.0;
    trial.bumps.emplace_back(0.1, 0.5); // leaks past a/4 = 0.25
    trial.coeffs.emplace_back(1.0, 0.0);
    trial.omegas.push_back(0.0);
    CHECK_THROWS_AS(coercivity_trial(bg, ModeParams(0, 0.0), trial), std::invalid_argument);
}
