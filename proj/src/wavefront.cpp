#include "cosmon/wavefront.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "cosmon/fft.hpp"
#include "cosmon/svg.hpp"

namespace cosmon::wavefront {

namespace {

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

double wrap_dist(double d, double period) {
    d = std::fmod(d, period);
    if (d > 0.5 * period) d -= period;
    if (d < -0.5 * period) d += period;
    return std::abs(d);
}

struct MapLayout {
    std::size_t half_t, half_r;   // patch half-widths in grid points
    std::size_t ft, fr;           // FFT sizes
    double frame_t, frame_r;      // lattice frame constants sum w^2
    std::vector<double> t_centers, r_centers;
    std::vector<std::size_t> tc_idx, rc_idx;
};

MapLayout make_layout(const SpacetimeField& u, const WindowSpec& w,
                      std::vector<std::string>& warnings) {
    const double dt = u.dt(), dr = u.dr();
    MapLayout L{};
    if (w.sigma_t < 4.0 * dt || w.sigma_r < 4.0 * dr)
        warnings.push_back("phase_energy: window narrower than 4 grid spacings");
    L.half_t = static_cast<std::size_t>(std::ceil(4.0 * w.sigma_t / dt));
    L.half_r = static_cast<std::size_t>(std::ceil(4.0 * w.sigma_r / dr));
    L.ft = next_pow2(2 * L.half_t);
    L.fr = next_pow2(2 * L.half_r);

    for (std::size_t i = 0; i < u.n_t; i += w.stride_t) {
        L.tc_idx.push_back(i);
        L.t_centers.push_back(u.t(i));
    }
    for (std::size_t j = 0; j < u.n_r(); j += w.stride_r) {
        const double rc = u.r[j];
        if (rc < 4.0 * w.sigma_r || rc > u.r.back() - 4.0 * w.sigma_r) continue;
        L.rc_idx.push_back(j);
        L.r_centers.push_back(rc);
    }
    if (L.r_centers.empty())
        warnings.push_back("phase_energy: no radial centers fit inside the domain");

    // frame constants: sum over the center lattice of w^2 at a generic offset
    auto frame_const = [](double sigma, double spacing) {
        double s = 0.0;
        for (int i = -64; i <= 64; ++i) {
            const double x = (i + 0.37) * spacing; // generic offset; variation is tiny
            s += std::exp(-x * x / (sigma * sigma));
        }
        return s;
    };
    L.frame_t = frame_const(w.sigma_t, dt * static_cast<double>(w.stride_t));
    L.frame_r = frame_const(w.sigma_r, dr * static_cast<double>(w.stride_r));
    return L;
}

PhaseEnergyMap phase_energy_impl(const SpacetimeField& u, const WindowSpec& w, bool parallel) {
    if (!u.is_staggered_uniform() || !is_pow2(u.n_t))
        throw GridMismatch("phase_energy: staggered uniform grid required");
    PhaseEnergyMap map;
    map.window = w;
    MapLayout L = make_layout(u, w, map.warnings);
    map.t_centers = L.t_centers;
    map.r_centers = L.r_centers;

    const double dt = u.dt(), dr = u.dr();
    const std::size_t nt = u.n_t, nr = u.n_r();
    const double norm = dt * dr / (static_cast<double>(L.ft) * static_cast<double>(L.fr) *
                                   L.frame_t * L.frame_r);

    const std::size_t n_centers = L.tc_idx.size() * L.rc_idx.size();
    std::vector<std::vector<PhaseCell>> local_cells(n_centers);
    std::vector<double> local_total(n_centers, 0.0);

    auto do_center = [&](std::size_t ci) {
        const std::size_t a = ci / L.rc_idx.size();
        const std::size_t b = ci % L.rc_idx.size();
        const std::size_t it0 = L.tc_idx[a];
        const std::size_t jr0 = L.rc_idx[b];
        const double tc = L.t_centers[a], rc = L.r_centers[b];

        // windowed patch of sqrt(r) u, t periodic, r zero-extended
        std::vector<cplx> patch(L.ft * L.fr, cplx(0.0, 0.0));
        for (std::size_t di = 0; di < 2 * L.half_t; ++di) {
            const long toff = static_cast<long>(di) - static_cast<long>(L.half_t);
            const std::size_t it = (it0 + nt + toff) % nt;
            const double wt =
                std::exp(-0.5 * (toff * dt) * (toff * dt) / (w.sigma_t * w.sigma_t));
            for (std::size_t dj = 0; dj < 2 * L.half_r; ++dj) {
                const long jr = static_cast<long>(jr0) + static_cast<long>(dj) -
                                static_cast<long>(L.half_r);
                if (jr < 0 || jr >= static_cast<long>(nr)) continue;
                const double roff = (static_cast<double>(jr) - static_cast<double>(jr0)) * dr;
                const double wr = std::exp(-0.5 * roff * roff / (w.sigma_r * w.sigma_r));
                patch[di * L.fr + dj] =
                    wt * wr * std::sqrt(u.r[jr]) * u.at(it, static_cast<std::size_t>(jr));
            }
        }
        // 2-d FFT: rows then columns
        std::vector<cplx> row(L.fr), col(L.ft);
        for (std::size_t i = 0; i < L.ft; ++i) {
            for (std::size_t j2 = 0; j2 < L.fr; ++j2) row[j2] = patch[i * L.fr + j2];
            fft(row);
            for (std::size_t j2 = 0; j2 < L.fr; ++j2) patch[i * L.fr + j2] = row[j2];
        }
        for (std::size_t j2 = 0; j2 < L.fr; ++j2) {
            for (std::size_t i = 0; i < L.ft; ++i) col[i] = patch[i * L.fr + j2];
            fft(col);
            for (std::size_t i = 0; i < L.ft; ++i) patch[i * L.fr + j2] = col[i];
        }

        double tot = 0.0;
        std::vector<PhaseCell>& out = local_cells[ci];
        for (std::size_t p = 0; p < L.ft; ++p) {
            // content e^{+i lambda t} peaks at the bin with 2 pi p / (F dt) = lambda
            const double lambda =
                2.0 * M_PI * static_cast<double>(signed_bin(p, L.ft)) /
                (static_cast<double>(L.ft) * dt);
            for (std::size_t q = 0; q < L.fr; ++q) {
                const double xi = 2.0 * M_PI * static_cast<double>(signed_bin(q, L.fr)) /
                                  (static_cast<double>(L.fr) * dr);
                const double e = std::norm(patch[p * L.fr + q]) * norm;
                tot += e;
                if (e > 0.0) out.push_back({tc, rc, lambda, xi, e});
            }
        }
        local_total[ci] = tot;
    };

    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long ci = 0; ci < static_cast<long>(n_centers); ++ci)
            do_center(static_cast<std::size_t>(ci));
    } else {
        for (std::size_t ci = 0; ci < n_centers; ++ci) do_center(ci);
    }

    for (std::size_t ci = 0; ci < n_centers; ++ci) {
        map.total_energy += local_total[ci];
        for (const PhaseCell& c : local_cells[ci])
            map.max_cell_energy = std::max(map.max_cell_energy, c.energy);
    }
    const double floor = map.max_cell_energy * w.cell_floor_rel;
    for (std::size_t ci = 0; ci < n_centers; ++ci)
        for (const PhaseCell& c : local_cells[ci])
            if (c.energy >= floor) map.cells.push_back(c);
    return map;
}

} // namespace

PhaseEnergyMap phase_energy(const SpacetimeField& u, const WindowSpec& window) {
    return phase_energy_impl(u, window, true);
}

PhaseEnergyMap phase_energy_serial(const SpacetimeField& u, const WindowSpec& window) {
    return phase_energy_impl(u, window, false);
}

void write_phase_map_csv(const PhaseEnergyMap& map, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open " + path);
    std::fprintf(f, "t,r,lambda,xi,energy\n");
    for (const PhaseCell& c : map.cells)
        std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g\n", c.t, c.r, c.lambda, c.xi, c.energy);
    std::fclose(f);
}

void write_phase_map_svg(const PhaseEnergyMap& map, const std::string& path,
                         std::size_t max_panels) {
    // panel per t-center: (r, lambda) energy summed over xi
    std::vector<HeatPanel> panels;
    std::vector<double> lambdas, rs;
    for (const PhaseCell& c : map.cells) {
        lambdas.push_back(c.lambda);
        rs.push_back(c.r);
    }
    if (map.cells.empty()) {
        write_heatmap_svg(path, panels);
        return;
    }
    std::sort(lambdas.begin(), lambdas.end());
    lambdas.erase(std::unique(lambdas.begin(), lambdas.end()), lambdas.end());
    const double lam_lo = lambdas.front(), lam_hi = lambdas.back();
    const std::size_t n_lam_bins = 64, n_r_bins = map.r_centers.size();

    const std::size_t step = std::max<std::size_t>(1, map.t_centers.size() / max_panels);
    for (std::size_t a = 0; a < map.t_centers.size(); a += step) {
        HeatPanel p;
        p.rows = n_lam_bins;
        p.cols = n_r_bins;
        p.values.assign(n_lam_bins * n_r_bins, 0.0);
        p.x_lo = map.r_centers.front();
        p.x_hi = map.r_centers.back();
        p.y_lo = lam_lo;
        p.y_hi = lam_hi;
        p.x_label = "r";
        p.y_label = "lambda";
        char buf[64];
        std::snprintf(buf, sizeof buf, "t = %.4g", map.t_centers[a]);
        p.label = buf;
        for (const PhaseCell& c : map.cells) {
            if (std::abs(c.t - map.t_centers[a]) > 1e-12) continue;
            const std::size_t ib = std::min(
                n_lam_bins - 1,
                static_cast<std::size_t>((c.lambda - lam_lo) / (lam_hi - lam_lo + 1e-300) *
                                         n_lam_bins));
            std::size_t jb = 0;
            for (std::size_t j = 0; j < map.r_centers.size(); ++j)
                if (std::abs(map.r_centers[j] - c.r) < 1e-12) jb = j;
            p.values[ib * n_r_bins + jb] += c.energy;
        }
        panels.push_back(std::move(p));
    }
    write_heatmap_svg(path, panels);
}

bool Region::contains(double t, double r, double period) const {
    if (r < r_lo || r > r_hi) return false;
    if (t_lo <= t_hi) return t >= t_lo && t <= t_hi;
    // wrapped interval
    double tm = std::fmod(t, period);
    if (tm < 0) tm += period;
    return tm >= t_lo || tm <= t_hi;
}

std::vector<PhasePoint> seeds_from_map(const PhaseEnergyMap& map, const BackgroundParams& bg,
                                       const FlowoutThresholds& th, const Region& f_support,
                                       double t_period) {
    std::vector<PhasePoint> seeds;
    const double angle_tol = th.tube_angle_deg * M_PI / 180.0;
    double emax = 0.0;
    for (const PhaseCell& c : map.cells)
        if (f_support.contains(c.t, c.r, t_period)) emax = std::max(emax, c.energy);
    const double floor = emax * th.rel_threshold;
    for (const PhaseCell& c : map.cells) {
        if (!f_support.contains(c.t, c.r, t_period)) continue; // f's own cells only
        if (c.energy < floor) continue;
        if (std::abs(c.lambda) <= th.lambda_min) continue;
        if (c.r <= bg.a_rot) continue; // Sigma needs r >= a
        // snap xi onto the cone, keep cells whose direction is close to it
        const double xi_cone = std::sqrt(c.r * c.r - bg.a_rot * bg.a_rot) / c.r *
                               std::abs(c.lambda);
        for (const double xs : {xi_cone, -xi_cone}) {
            const double dot = c.lambda * c.lambda + c.xi * xs;
            const double na = std::hypot(c.lambda, c.xi), nb = std::hypot(c.lambda, xs);
            if (na == 0.0 || nb == 0.0) continue;
            if (std::acos(std::clamp(dot / (na * nb), -1.0, 1.0)) <= angle_tol)
                seeds.push_back({c.t, c.r, 0.0, c.lambda, xs, 0.0});
        }
    }
    return seeds;
}

FlowoutVerdict flowout_consistency(const PhaseEnergyMap& map, double t_period, int k,
                                   const std::vector<rays::RayPath>& flowout,
                                   const Region& f_support, const FlowoutThresholds& th) {
    FlowoutVerdict v;
    if (flowout.empty()) v.warnings.push_back("flowout_consistency: empty ray set");
    const double angle_tol = th.tube_angle_deg * M_PI / 180.0;
    const double pos_t = th.tube_pos_mult * map.window.sigma_t;
    const double pos_r = th.tube_pos_mult * map.window.sigma_r;
    const double lam_floor = std::max(5.0 * std::abs(k), th.lambda_min);

    // classification candidates and their threshold
    double emax = 0.0;
    auto classified = [&](const PhaseCell& c) {
        if (f_support.contains(c.t, c.r, t_period)) return false;
        if (th.r_max_classify > 0.0 && c.r >= th.r_max_classify) return false;
        if (std::abs(c.lambda) <= lam_floor) return false;
        return true;
    };
    for (const PhaseCell& c : map.cells)
        if (classified(c)) emax = std::max(emax, c.energy);
    const double floor = emax * th.rel_threshold;

    for (const PhaseCell& c : map.cells) {
        if (!classified(c) || c.energy < floor) continue;
        bool on = false;
        const double nc = std::hypot(c.lambda, c.xi);
        for (const rays::RayPath& path : flowout) {
            for (const rays::RaySample& s : path.samples) {
                if (wrap_dist(c.t - s.q.t, t_period) > pos_t) continue;
                if (std::abs(c.r - s.q.r) > pos_r) continue;
                const double ns = std::hypot(s.q.lambda, s.q.xi);
                if (nc == 0.0 || ns == 0.0) continue;
                const double dot = (c.lambda * s.q.lambda + c.xi * s.q.xi) / (nc * ns);
                if (std::acos(std::clamp(dot, -1.0, 1.0)) <= angle_tol) {
                    on = true;
                    break;
                }
            }
            if (on) break;
        }
        if (on) {
            v.on_energy += c.energy;
            ++v.n_on;
        } else {
            v.off_energy += c.energy;
            ++v.n_off;
        }
    }
    const double tot = v.on_energy + v.off_energy;
    if (tot > 0.0)
        v.off_fraction = v.off_energy / tot;
    else {
        v.off_fraction = 0.0;
        v.vacuous = true;
    }
    return v;
}

EllipticProbeReport elliptic_support_probe(const SpacetimeField& u, const BackgroundParams& bg,
                                           const ModeParams& mode, double delta,
                                           double lambda_slice) {
    EllipticProbeReport rep;
    const double r_ell = bg.a_rot * (1.0 - delta);
    const double dr = u.dr();
    double tot = 0.0, ell = 0.0;
    rep.t_profile.assign(u.n_t, 0.0);
    for (std::size_t it = 0; it < u.n_t; ++it) {
        double slice = 0.0;
        for (std::size_t j = 0; j < u.n_r(); ++j) {
            const double w = u.r[j] * dr;
            const double m2 = std::norm(u.at(it, j));
            tot += m2 * w;
            if (u.r[j] < r_ell) {
                ell += m2 * w;
                slice += m2 * w;
            }
        }
        rep.t_profile[it] = slice;
    }
    rep.mass_fraction = tot > 0.0 ? ell / tot : 0.0;
    // contrapositive: solutions of the mode ODE vanishing on (0, a) cap I vanish on I
    rep.uc = modes::unique_continuation_check(bg, mode, lambda_slice,
                                              {0.5 * bg.a_rot, 1.5 * bg.a_rot}, 1e-10, 20, 7);
    return rep;
}

SpacetimeField make_packet(const SpacetimeField& like, double t0, double r0, double sigma_t,
                           double sigma_r, double lambda0, double xi0) {
    SpacetimeField u = SpacetimeField::zeros(like.t_period, like.n_t, like.r);
    for (std::size_t it = 0; it < u.n_t; ++it) {
        const double dt = wrap_dist(u.t(it) - t0, u.t_period);
        const double et = std::exp(-0.5 * dt * dt / (sigma_t * sigma_t));
        for (std::size_t j = 0; j < u.n_r(); ++j) {
            const double drr = u.r[j] - r0;
            const double er = std::exp(-0.5 * drr * drr / (sigma_r * sigma_r));
            const double ph = lambda0 * u.t(it) + xi0 * u.r[j];
            u.at(it, j) = et * er * cplx(std::cos(ph), std::sin(ph));
        }
    }
    return u;
}

} // namespace cosmon::wavefront
