#include "cosmon/modes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "cosmon/cutoffs.hpp"
#include "cosmon/fft.hpp"
#include "cosmon/ode.hpp"
#include "cosmon/parallel.hpp"
#include "cosmon/quadrature.hpp"
#include "cosmon/radial_ops.hpp"
#include "cosmon/rng.hpp"
#include "cosmon/specfun.hpp"

namespace cosmon::modes {

void write_profile_csv(const ModeProfile& p, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open " + path);
    std::fprintf(f, "r,re,im\n");
    for (std::size_t j = 0; j < p.r_grid.size(); ++j)
        std::fprintf(f, "%.17g,%.17g,%.17g\n", p.r_grid[j], p.values[j].real(),
                     p.values[j].imag());
    std::fclose(f);
}

double ExactMode::operator()(double r) const {
    const double x = kappa * r;
    return oscillatory ? specfun::bessel_j(nu, x) : specfun::bessel_i(nu, x);
}

double ExactMode::derivative(double r) const {
    const double x = kappa * r;
    return kappa * (oscillatory ? specfun::bessel_jp(nu, x) : specfun::bessel_ip(nu, x));
}

ExactMode exact_mode(const BackgroundParams& bg, const ModeParams& mode, double lambda,
                     Branch branch) {
    const double q2 = lambda * lambda - mode.m * mode.m;
    if (q2 == 0.0)
        throw std::domain_error("exact_mode: lambda = +-m is turning-degenerate");
    const double nu_signed = bg.a_rot * lambda + static_cast<double>(mode.k);
    const double nu_abs = std::abs(nu_signed);
    if (branch == Branch::singular && nu_abs == std::floor(nu_abs))
        throw std::domain_error("exact_mode: singular branch needs non-integer order");
    ExactMode em;
    em.oscillatory = q2 > 0.0;
    em.kappa = std::sqrt(std::abs(q2));
    em.nu = branch == Branch::regular ? nu_abs : -nu_abs;
    return em;
}

namespace {
constexpr double kOdeRMin = 1e-6;
}

ModeProfile solve_mode_ode(const BackgroundParams& bg, const ModeParams& mode, double lambda,
                           std::pair<double, double> r_span, double r_start,
                           std::pair<cplx, cplx> initial, const std::vector<double>& r_samples,
                           double tol) {
    if (!(r_span.first > 0.0) || !(r_span.second > r_span.first))
        throw std::invalid_argument("solve_mode_ode: r_span must lie in (0, inf)");
    if (!(r_start >= r_span.first && r_start <= r_span.second))
        throw std::invalid_argument("solve_mode_ode: r_start outside r_span");
    if (r_span.first < kOdeRMin)
        throw std::domain_error("solve_mode_ode: r_span reaches below the r_min guard");
    for (double rs : r_samples)
        if (rs < r_span.first || rs > r_span.second)
            throw std::invalid_argument("solve_mode_ode: sample outside r_span");

    const double nu = bg.a_rot * lambda + static_cast<double>(mode.k);
    const double nu2 = nu * nu;
    const double q2 = lambda * lambda - mode.m * mode.m;

    // state: (Re u, Im u, Re v, Im v) with v = r u'
    DormandPrince<4>::Rhs rhs = [nu2, q2](double r, const std::array<double, 4>& y,
                                          std::array<double, 4>& dy) {
        if (!(r > 0.0)) throw std::domain_error("solve_mode_ode: r <= 0");
        const double c = (nu2 - q2 * r * r) / r;
        dy[0] = y[2] / r;
        dy[1] = y[3] / r;
        dy[2] = c * y[0];
        dy[3] = c * y[1];
    };
    DormandPrince<4> rk(rhs, tol, tol * 1e-2);

    const cplx u0 = initial.first;
    const cplx du0 = initial.second;
    const std::array<double, 4> y0{u0.real(), u0.imag(), r_start * du0.real(),
                                   r_start * du0.imag()};

    std::vector<double> below, above;
    for (double rs : r_samples) (rs < r_start ? below : above).push_back(rs);
    std::sort(below.begin(), below.end(), std::greater<double>());
    std::sort(above.begin(), above.end());

    std::vector<std::pair<double, std::array<double, 4>>> all;
    if (!below.empty()) {
        const auto st = rk.integrate(r_start, y0, below);
        for (std::size_t i = 0; i < below.size(); ++i) all.emplace_back(below[i], st[i]);
    }
    if (!above.empty()) {
        const auto st = rk.integrate(r_start, y0, above);
        for (std::size_t i = 0; i < above.size(); ++i) all.emplace_back(above[i], st[i]);
    }
    std::sort(all.begin(), all.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    ModeProfile prof;
    prof.lambda = lambda;
    prof.bg = bg;
    prof.mode = mode;
    prof.r_grid.reserve(all.size());
    prof.values.reserve(all.size());
    for (const auto& [r, y] : all) {
        prof.r_grid.push_back(r);
        prof.values.emplace_back(y[0], y[1]);
    }
    return prof;
}

UniqueContinuationReport unique_continuation_check(const BackgroundParams& bg,
                                                   const ModeParams& mode, double lambda,
                                                   std::pair<double, double> I, double tol,
                                                   int trials, uint64_t seed) {
    const double a = bg.a_rot;
    if (!(I.first < a && a < I.second))
        throw std::invalid_argument("unique_continuation_check: I must contain a_rot");

    const int n_samples = 400;
    std::vector<double> grid(n_samples);
    for (int i = 0; i < n_samples; ++i)
        grid[i] = I.first + (I.second - I.first) * (i + 0.5) / n_samples;

    UniqueContinuationReport rep;
    rep.trials = trials;

    const double r0 = 0.5 * (I.first + std::min(a, I.second)); // inside I cap (0, a)

    // (i) zero data propagates to the zero profile (uniqueness)
    {
        const ModeProfile p = solve_mode_ode(bg, mode, lambda, I, r0,
                                             {cplx(0.0, 0.0), cplx(0.0, 0.0)}, grid, tol);
        for (const cplx& v : p.values) rep.zero_data_sup = std::max(rep.zero_data_sup, std::abs(v));
    }

    // (ii) nontrivial data never loses all mass on the window (a/2, a)
    const double w_lo = std::max(I.first, 0.5 * a);
    const double w_hi = std::min(I.second, a);
    SplitMix64 rng(seed);
    rep.min_window_mass = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < trials; ++trial) {
        cplx u0(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        cplx du0(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        const double n = std::sqrt(std::norm(u0) + std::norm(du0));
        if (n < 1e-3) { u0 = cplx(1.0, 0.0); du0 = cplx(0.0, 0.0); }
        const ModeProfile p = solve_mode_ode(bg, mode, lambda, I, r0, {u0, du0}, grid, tol);
        double mass = 0.0;
        const double h = (I.second - I.first) / n_samples;
        for (std::size_t j = 0; j < p.r_grid.size(); ++j) {
            const double r = p.r_grid[j];
            if (r >= w_lo && r <= w_hi) mass += std::norm(p.values[j]) * r * h;
        }
        rep.min_window_mass = std::min(rep.min_window_mass, mass);
    }
    if (trials == 0) rep.min_window_mass = 0.0;
    return rep;
}

namespace {

H1kNormReport h1k_norm_impl(const BackgroundParams& bg, const ModeParams& mode,
                            const SpacetimeField& u, double r_cut) {
    if (!u.is_staggered_uniform() || !is_pow2(u.n_t))
        throw GridMismatch("h1k_norm: staggered uniform grid and power-of-two n_t required");
    const std::size_t nt = u.n_t, nr = u.n_r();
    const double h = u.dr();
    const double dtw = u.dt();

    const RadialD1Options opts;
    const BandedMatrix d1 = radial_d1(u.r, opts);

    // FFT in t once; all four parts are diagonal in lambda except d/dr
    std::vector<std::vector<cplx>> hat(nr, std::vector<cplx>(nt));
    for (std::size_t j = 0; j < nr; ++j) {
        std::vector<cplx> col(nt);
        for (std::size_t it = 0; it < nt; ++it) col[it] = u.at(it, j);
        fft(col);
        hat[j] = std::move(col);
    }

    H1kNormReport rep;
    // Parseval: sum_t |u|^2 dt = (dt/nt) sum_p |hat|^2
    const double par = dtw / static_cast<double>(nt);
    std::vector<cplx> block(nr), dblock(nr);
    for (std::size_t p = 0; p < nt; ++p) {
        const double lambda = 2.0 * M_PI * static_cast<double>(signed_bin(p, nt)) / u.t_period;
        for (std::size_t j = 0; j < nr; ++j) block[j] = hat[j][p];
        dblock = d1.matvec(block);
        const double tw = bg.a_rot * lambda + static_cast<double>(mode.k);
        for (std::size_t j = 0; j < nr; ++j) {
            const double r = u.r[j];
            if (r <= r_cut) continue;
            const double w = r * h * par;
            const double m2 = std::norm(block[j]);
            rep.l2 += m2 * w;
            rep.dt += lambda * lambda * m2 * w;
            rep.dr += std::norm(dblock[j]) * w;
            rep.twisted += tw * tw * m2 / (r * r) * w;
        }
    }
    return rep;
}

} // namespace

H1kNormReport h1k_norm(const BackgroundParams& bg, const ModeParams& mode,
                       const SpacetimeField& u) {
    return h1k_norm_impl(bg, mode, u, 0.0);
}

H1kNormReport h1k_norm_cut(const BackgroundParams& bg, const ModeParams& mode,
                           const SpacetimeField& u, double r_cut) {
    return h1k_norm_impl(bg, mode, u, r_cut);
}

namespace {

// composite radial quadrature: geometric nodes below r_knee resolve the
// r^(2 nu - 1) behavior, uniform staggered nodes above
struct RadialQuad {
    std::vector<double> r, w;
};

RadialQuad composite_radial_quad(double a, int n_uniform) {
    RadialQuad q;
    const double r_knee = a / 64.0;
    const double r_min = a * 1e-6;
    const int per_decade = 60;
    const int n_geo =
        static_cast<int>(std::ceil(per_decade * std::log10(r_knee / r_min))) + 1;
    std::vector<double> geo(n_geo);
    for (int i = 0; i < n_geo; ++i)
        geo[i] = r_min * std::pow(r_knee / r_min, static_cast<double>(i) / (n_geo - 1));
    // trapezoid weights on the geometric part
    for (int i = 0; i < n_geo; ++i) {
        const double left = i == 0 ? 0.0 : 0.5 * (geo[i] - geo[i - 1]);
        const double right = i + 1 == n_geo ? 0.0 : 0.5 * (geo[i + 1] - geo[i]);
        q.r.push_back(geo[i]);
        q.w.push_back(left + right);
    }
    // uniform staggered midpoint part on (r_knee, a)
    const double h = (a - r_knee) / n_uniform;
    for (int j = 0; j < n_uniform; ++j) {
        q.r.push_back(r_knee + (j + 0.5) * h);
        q.w.push_back(h);
    }
    return q;
}

} // namespace

std::pair<SpacetimeField, CounterexampleReport> counterexample(const BackgroundParams& bg, int k,
                                                               const ZetaSpec& zeta,
                                                               const CounterexampleGrids& grids) {
    const double a = bg.a_rot;
    if (!(zeta.nu_lo < zeta.nu_plateau_lo && zeta.nu_plateau_lo < zeta.nu_plateau_hi &&
          zeta.nu_plateau_hi < zeta.nu_hi))
        throw std::invalid_argument("counterexample: malformed zeta window");

    // chi(r): 1 on [0, a/2), supported in r < a
    const double chi_fall_lo = 0.5 * a, chi_fall_hi = 0.95 * a;
    auto chi = [&](double r) {
        if (r <= chi_fall_lo) return 1.0;
        if (r >= chi_fall_hi) return 0.0;
        return smooth_step((chi_fall_hi - r) / (chi_fall_hi - chi_fall_lo));
    };
    auto chi_prime = [&](double r) {
        if (r <= chi_fall_lo || r >= chi_fall_hi) return 0.0;
        return -smooth_step_deriv((chi_fall_hi - r) / (chi_fall_hi - chi_fall_lo)) /
               (chi_fall_hi - chi_fall_lo);
    };

    const Plateau bump(zeta.nu_lo, zeta.nu_plateau_lo, zeta.nu_plateau_hi, zeta.nu_hi);

    CounterexampleReport rep;
    const std::vector<double> eps_ladder = {a / 8,   a / 16,  a / 32, a / 64,
                                            a / 128, a / 256, a / 512};
    rep.eps_ladder = eps_ladder;

    double prev_l2 = 0.0;
    SpacetimeField display_field;

    for (int level = 0; level < grids.refinements; ++level) {
        const int n_lambda = grids.n_lambda << level;
        const int n_t = grids.n_t << level;
        const int n_uniform = grids.n_r << level;

        // lambda = (nu - k) / a over the support window of zeta
        const double lam_lo = (zeta.nu_lo - k) / a;
        const double lam_hi = (zeta.nu_hi - k) / a;
        const QuadRule lam = gauss_legendre(n_lambda, std::min(lam_lo, lam_hi),
                                            std::max(lam_lo, lam_hi));

        const RadialQuad rq = composite_radial_quad(a, n_uniform);
        const std::size_t nr = rq.r.size();

        // zeta(lambda) = bump(nu) / f1(nu, |lambda|); f1 must stay away from 0
        std::vector<double> zeta_w(n_lambda);
        double f1_min = std::numeric_limits<double>::infinity();
        for (int q = 0; q < n_lambda; ++q) {
            const double lambda = lam.nodes[q];
            const double nu = a * lambda + k;
            const double b = bump(nu);
            if (b == 0.0) { zeta_w[q] = 0.0; continue; }
            const double f1 = specfun::leading_f1(nu, std::abs(lambda));
            f1_min = std::min(f1_min, std::abs(f1));
            zeta_w[q] = b / f1;
        }
        if (f1_min < 1e-8) rep.f1_near_zero_warning = true;

        // radial factors B[q][j] = zeta_q * chi(r_j) * J_nu(|lambda_q| r_j) and
        // their exact radial derivatives
        std::vector<std::vector<double>> B(n_lambda), dB(n_lambda);
#pragma omp parallel for schedule(dynamic)
        for (int q = 0; q < n_lambda; ++q) {
            B[q].assign(nr, 0.0);
            dB[q].assign(nr, 0.0);
            if (zeta_w[q] == 0.0) continue;
            const double lambda = lam.nodes[q];
            const double nu = a * lambda + k;
            const double kap = std::abs(lambda);
            for (std::size_t j = 0; j < nr; ++j) {
                const double r = rq.r[j];
                const double x = kap * r;
                const double jv = specfun::bessel_j(nu, x);
                const double jp = specfun::bessel_jp(nu, x);
                const double c = chi(r), cp = chi_prime(r);
                B[q][j] = zeta_w[q] * c * jv;
                dB[q][j] = zeta_w[q] * (cp * jv + c * kap * jp);
            }
        }

        // t-quadrature: trapezoid on [-T, T]; phi is band-limited so the lattice
        // sum converges superalgebraically
        const double Tw = grids.t_window;
        const double dt = 2.0 * Tw / n_t;

        std::vector<double> l2_per_r(nr, 0.0);
        std::vector<double> dr_per_r(nr, 0.0);
#pragma omp parallel for schedule(static)
        for (long j = 0; j < static_cast<long>(nr); ++j) {
            double acc_l2 = 0.0, acc_dr = 0.0;
            for (int it = 0; it < n_t; ++it) {
                const double t = -Tw + (it + 0.5) * dt;
                cplx phi(0.0, 0.0), dphi(0.0, 0.0);
                for (int q = 0; q < n_lambda; ++q) {
                    const double ph = lam.nodes[q] * t;
                    const cplx e(std::cos(ph), std::sin(ph));
                    phi += lam.weights[q] * B[q][j] * e;
                    dphi += lam.weights[q] * dB[q][j] * e;
                }
                acc_l2 += std::norm(phi) * dt;
                acc_dr += std::norm(dphi) * dt;
            }
            l2_per_r[j] = acc_l2;
            dr_per_r[j] = acc_dr;
        }

        double l2 = 0.0;
        for (std::size_t j = 0; j < nr; ++j) l2 += l2_per_r[j] * rq.r[j] * rq.w[j];
        rep.l2_per_level.push_back(std::sqrt(l2));
        if (level > 0) rep.l2_ratio = rep.l2_per_level.back() / prev_l2;
        prev_l2 = rep.l2_per_level.back();

        if (level == grids.refinements - 1) {
            rep.dr_norm_sq_per_eps.assign(eps_ladder.size(), 0.0);
            for (std::size_t e = 0; e < eps_ladder.size(); ++e) {
                double acc = 0.0;
                for (std::size_t j = 0; j < nr; ++j)
                    if (rq.r[j] > eps_ladder[e]) acc += dr_per_r[j] * rq.r[j] * rq.w[j];
                rep.dr_norm_sq_per_eps[e] = acc;
            }
            // least-squares slope of log(|dr phi|^2) against log(eps)
            double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
            const double n = static_cast<double>(eps_ladder.size());
            for (std::size_t e = 0; e < eps_ladder.size(); ++e) {
                const double x = std::log(eps_ladder[e]);
                const double y = std::log(rep.dr_norm_sq_per_eps[e]);
                sx += x; sy += y; sxx += x * x; sxy += x * y;
            }
            rep.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);

            // modest display field on a plain staggered grid
            const std::size_t disp_nr = 512, disp_nt = 128;
            display_field = SpacetimeField::zeros(2.0 * Tw, disp_nt,
                                                  SpacetimeField::staggered_grid(a, disp_nr));
            std::vector<std::vector<double>> Bd(n_lambda, std::vector<double>(disp_nr, 0.0));
#pragma omp parallel for schedule(dynamic)
            for (int q = 0; q < n_lambda; ++q) {
                if (zeta_w[q] == 0.0) continue;
                const double lambda = lam.nodes[q];
                const double nu = a * lambda + k;
                for (std::size_t j = 0; j < disp_nr; ++j) {
                    const double r = display_field.r[j];
                    Bd[q][j] = zeta_w[q] * chi(r) * specfun::bessel_j(nu, std::abs(lambda) * r);
                }
            }
            for (std::size_t it = 0; it < disp_nt; ++it) {
                const double t = -Tw + (it + 0.5) * (2.0 * Tw / disp_nt);
                for (std::size_t j = 0; j < disp_nr; ++j) {
                    cplx phi(0.0, 0.0);
                    for (int q = 0; q < n_lambda; ++q) {
                        const double ph = lam.nodes[q] * t;
                        phi += lam.weights[q] * Bd[q][j] * cplx(std::cos(ph), std::sin(ph));
                    }
                    display_field.at(it, j) = phi;
                }
            }
        }
    }
    return {std::move(display_field), rep};
}

} // namespace cosmon::modes
