#include "cosmon/rays.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "cosmon/ode.hpp"

namespace cosmon::rays {

HamiltonVector hamilton_field(const BackgroundParams& bg, const PhasePoint& q) {
    if (!(q.r > 0.0)) throw std::domain_error("hamilton_field: r must be > 0");
    const double a2 = bg.a_rot * bg.a_rot;
    const double r2 = q.r * q.r;
    HamiltonVector v{};
    v.dt = -2.0 * q.lambda * (1.0 - a2 / r2);
    v.dr = 2.0 * q.xi;
    v.dphi = 0.0;
    v.dlambda = 0.0;
    v.dxi = 2.0 * a2 * q.lambda * q.lambda / (r2 * q.r);
    v.deta = 0.0;
    return v;
}

double RayPath::closed_form_c() const {
    if (samples.empty()) throw std::runtime_error("RayPath: empty");
    const RaySample& s0 = samples.front();
    if (s0.q.lambda == 0.0) throw std::domain_error("RayPath: lambda = 0 has no closed form");
    // w(s) = 2 lambda s + c with w = r xi / lambda, valid at any sample
    return s0.q.r * s0.q.xi / s0.q.lambda - 2.0 * s0.q.lambda * s0.s;
}

namespace {

// state (t, r, xi); lambda is a parameter of the flow, phi and eta constant
RayPath integrate_directional(const BackgroundParams& bg, const PhasePoint& q0,
                              const std::vector<double>& s_values, double tol) {
    const double r_min = kRayRMinFactor * bg.a_rot;
    const double lambda = q0.lambda;
    const double a2 = bg.a_rot * bg.a_rot;

    DormandPrince<3>::Rhs rhs = [&, lambda](double, const std::array<double, 3>& y,
                                            std::array<double, 3>& dy) {
        const double r = y[1];
        if (!(r > r_min))
            throw std::domain_error("integrate_ray: ray reached the r_min guard");
        dy[0] = -2.0 * lambda * (1.0 - a2 / (r * r));
        dy[1] = 2.0 * y[2];
        dy[2] = 2.0 * a2 * lambda * lambda / (r * r * r);
    };
    // per-step tolerance a factor below the requested path accuracy, so the
    // accumulated drift stays within tol over O(100) steps
    DormandPrince<3> rk(rhs, 0.01 * tol, 0.01 * tol);

    // split the requested s grid by sign and integrate each side from 0
    std::vector<double> neg, pos;
    for (double s : s_values) (s < 0.0 ? neg : pos).push_back(s);
    std::sort(neg.begin(), neg.end(), std::greater<double>()); // toward -inf
    std::sort(pos.begin(), pos.end());

    const std::array<double, 3> y0{q0.t, q0.r, q0.xi};
    std::vector<std::pair<double, std::array<double, 3>>> all;
    std::size_t steps = 0;
    auto count_step = [&steps](double, const std::array<double, 3>&) { ++steps; };
    auto run = [&](const std::vector<double>& side) {
        if (side.empty()) return;
        const auto states = rk.integrate(0.0, y0, side, count_step);
        for (std::size_t i = 0; i < side.size(); ++i) all.emplace_back(side[i], states[i]);
    };
    run(neg);
    run(pos);
    std::sort(all.begin(), all.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    RayPath path;
    path.params = bg;
    path.tol = tol;
    path.internal_steps = steps;
    path.samples.reserve(all.size());
    for (const auto& [s, y] : all) {
        PhasePoint q = q0;
        q.t = y[0];
        q.r = y[1];
        q.xi = y[2];
        path.samples.push_back({s, q});
    }
    return path;
}

} // namespace

RayPath integrate_ray(const BackgroundParams& bg, const PhasePoint& q0,
                      const std::vector<double>& s_values, double tol) {
    if (s_values.empty()) throw std::invalid_argument("integrate_ray: no sample points");
    if (std::abs(q0.eta) > 0.0)
        throw std::domain_error("integrate_ray: eta must be 0 on modes");
    if (!in_characteristic_set(bg, q0, std::max(tol, 1e-9) * 1e3))
        throw std::domain_error("integrate_ray: seed not on the characteristic set");
    return integrate_directional(bg, q0, s_values, tol);
}

std::vector<RayPath> forward_flowout(const BackgroundParams& bg,
                                     const std::vector<PhasePoint>& seeds, double horizon,
                                     double tol) {
    std::vector<RayPath> out;
    out.reserve(seeds.size());
    const int n_half = 200;
    for (const PhasePoint& seed : seeds) {
        std::vector<double> s_values;
        s_values.reserve(2 * n_half + 1);
        for (int i = -n_half; i <= n_half; ++i)
            s_values.push_back(horizon * static_cast<double>(i) / n_half);
        RayPath full = integrate_ray(bg, seed, s_values, tol);
        RayPath kept;
        kept.params = full.params;
        kept.tol = full.tol;
        const double t0 = seed.t;
        const double slack = 10.0 * tol * (1.0 + std::abs(t0));
        for (const RaySample& smp : full.samples)
            if (smp.q.t >= t0 - slack) kept.samples.push_back(smp);
        out.push_back(std::move(kept));
    }
    return out;
}

std::vector<RayPath> integrate_batch_serial(const BackgroundParams& bg,
                                            const std::vector<PhasePoint>& seeds,
                                            const std::vector<double>& s_values, double tol) {
    std::vector<RayPath> out(seeds.size());
    for (std::size_t i = 0; i < seeds.size(); ++i)
        out[i] = integrate_ray(bg, seeds[i], s_values, tol);
    return out;
}

std::vector<RayPath> integrate_batch(const BackgroundParams& bg,
                                     const std::vector<PhasePoint>& seeds,
                                     const std::vector<double>& s_values, double tol) {
    std::vector<RayPath> out(seeds.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < static_cast<long>(seeds.size()); ++i)
        out[i] = integrate_ray(bg, seeds[i], s_values, tol);
    return out;
}

EscapeReport escape_analysis(const BackgroundParams& bg, const EscapeBox& K, double R,
                             double tol, int n_r_samples, int n_t_samples) {
    if (!(R > bg.a_rot)) throw std::invalid_argument("escape_analysis: R must exceed a_rot");
    if (!(K.r_lo <= K.r_hi) || !(K.t_lo <= K.t_hi))
        throw std::invalid_argument("escape_analysis: malformed box");
    if (K.r_lo < bg.a_rot && K.r_hi < bg.a_rot) {
        // K entirely in the elliptic shadow: no Sigma seeds at all
        return EscapeReport{0.0, 0, 0.0};
    }

    EscapeReport rep;
    const double r_escape = R + 1.0;
    const double s_cap = 5.0 * (R + 2.0 + bg.a_rot); // hard cap, escape is guaranteed
    const int n_steps = 20000;

    for (int ir = 0; ir < n_r_samples; ++ir) {
        double r0 = K.r_lo + (K.r_hi - K.r_lo) * (n_r_samples == 1 ? 0.5 : ir / double(n_r_samples - 1));
        r0 = std::max(r0, bg.a_rot); // Sigma requires r >= a
        const double spread = std::sqrt(std::max(0.0, r0 * r0 - bg.a_rot * bg.a_rot));
        for (int it = 0; it < n_t_samples; ++it) {
            const double t0 =
                K.t_lo + (K.t_hi - K.t_lo) * (n_t_samples == 1 ? 0.5 : it / double(n_t_samples - 1));
            for (int sl = 0; sl < 2; ++sl) {
                const double lambda = sl == 0 ? 1.0 : -1.0; // unit-|lambda| slice of Sigma
                for (int sx = 0; sx < 2; ++sx) {
                    const double xi = (sx == 0 ? 1.0 : -1.0) * lambda * spread / r0;
                    if (spread == 0.0 && sx == 1) continue; // xi = 0 seed once
                    PhasePoint q{t0, r0, 0.0, lambda, xi, 0.0};
                    ++rep.seed_count;

                    // t decreases in the flow direction sgn(s) = sgn(lambda)
                    const double dir = lambda > 0.0 ? 1.0 : -1.0;
                    std::vector<double> s_values(n_steps + 1);
                    for (int i = 0; i <= n_steps; ++i)
                        s_values[i] = dir * s_cap * i / double(n_steps);
                    const RayPath path = integrate_ray(bg, q, s_values, tol);

                    // walk in traversal order (from s = 0 outward), not ascending s
                    bool escaped = false;
                    const std::size_t ns = path.samples.size();
                    for (std::size_t i = 0; i < ns; ++i) {
                        const RaySample& smp =
                            dir > 0.0 ? path.samples[i] : path.samples[ns - 1 - i];
                        if (smp.q.r <= r_escape) continue;
                        const HamiltonVector v = hamilton_field(bg, smp.q);
                        const bool incoming =
                            v.dr != 0.0 && v.dt != 0.0 && (v.dr > 0.0) != (v.dt > 0.0);
                        if (incoming && smp.q.t <= t0 + 1e-12) {
                            rep.T = std::max(rep.T, std::abs(smp.q.t));
                            rep.max_escape_radius = std::max(rep.max_escape_radius, smp.q.r);
                            escaped = true;
                            break;
                        }
                    }
                    if (!escaped)
                        throw std::runtime_error(
                            "escape_analysis: ray failed to escape within the hard cap");
                }
            }
        }
    }
    return rep;
}

void write_ray_csv(const RayPath& path, const std::string& file) {
    std::FILE* f = std::fopen(file.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open " + file);
    std::fprintf(f, "s,t,r,phi,lambda,xi,eta\n");
    for (const RaySample& smp : path.samples)
        std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", smp.s, smp.q.t, smp.q.r,
                     smp.q.phi, smp.q.lambda, smp.q.xi, smp.q.eta);
    std::fclose(f);
}

} // namespace cosmon::rays
