#include "cosmon/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cosmon/fft.hpp"
#include "cosmon/quadrature.hpp"
#include "cosmon/radial_ops.hpp"
#include "cosmon/rng.hpp"

namespace cosmon::solver {

AbsorberSpec::AbsorberSpec(const BackgroundParams& bg, double R_, double r0_source_)
    : R(R_), r0_source(r0_source_),
      chi_ramp(R_ + 1.0 / 3.0, R_ + 1.0),
      chi_tilde_ramp(R_, R_ + 1.0 / 3.0) {
    if (!(R > bg.a_rot) || !(R > r0_source))
        throw std::invalid_argument("AbsorberSpec: need R > max(a_rot, R0)");
    const double f = 1.0 - bg.a_rot * bg.a_rot / (R * R);
    if (!(f > 0.9))
        throw std::invalid_argument("AbsorberSpec: need 1 - a^2/R^2 > 9/10");
}

std::vector<double> GridSpec::r_grid() const {
    std::vector<double> g(n_r);
    for (std::size_t j = 0; j < n_r; ++j) g[j] = r(j);
    return g;
}

double GridSpec::lambda(std::size_t p) const {
    return 2.0 * M_PI * static_cast<double>(signed_bin(p, n_t)) / t_period;
}

SpacetimeField GridSpec::make_field() const {
    return SpacetimeField::zeros(t_period, n_t, r_grid());
}

std::vector<std::string> validate_absorber_on_grid(const AbsorberSpec& spec,
                                                   const GridSpec& grid) {
    std::vector<std::string> warnings;
    if (!is_pow2(grid.n_t)) throw std::invalid_argument("GridSpec: n_t must be a power of two");
    if (!(grid.r_max > spec.R + 2.0))
        throw std::invalid_argument("GridSpec: need r_max > R + 2 (absorber inside the domain)");

    int supp_pts = 0;
    for (std::size_t j = 0; j < grid.n_r; ++j) {
        const double r = grid.r(j);
        const double c = spec.chi(r), ct = spec.chi_tilde(r);
        if (r <= spec.R && (c != 0.0 || ct != 0.0))
            throw std::invalid_argument("AbsorberSpec: cutoff support leaks below R");
        if (r >= spec.R + 1.0 && c != 1.0)
            throw std::invalid_argument("AbsorberSpec: chi must equal 1 on (R+1, inf)");
        if (c > 0.0 && ct != 1.0)
            throw std::invalid_argument("AbsorberSpec: chi~ must equal 1 on supp chi");
        if (std::abs(ct * c - c) > 0.0)
            throw std::invalid_argument("AbsorberSpec: chi~ * chi != chi");
        if (ct > 0.0) ++supp_pts;
    }
    if (supp_pts < 16)
        warnings.push_back("absorber: supp chi~ under-resolved (< 16 grid points)");
    return warnings;
}

double absorber_symbol(const AbsorberSpec& spec, double r, double lambda, double xi,
                       double eta) {
    if (lambda == 0.0) return 0.0; // lambda^2 * bounded -> 0 by continuity
    const double sgn = lambda > 0.0 ? 1.0 : -1.0;
    return -sgn * lambda * lambda * spec.rho(xi / lambda) * spec.psi(std::abs(eta / lambda)) *
           spec.chi(r);
}

namespace {

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// Padded window length for the quantized absorber at one frequency.  Two
// constraints: no circular wrap (>= 2 nwin), and the rho ramps -- width
// |lambda|/12 in xi -- must be resolved by the xi lattice, otherwise the
// kernel picks up long-range Gibbs tails that leak past the absorber.
std::size_t window_padding(double lambda, double dr, std::size_t nwin) {
    const std::size_t wrap = 2 * nwin;
    std::size_t resolve = wrap;
    if (lambda != 0.0) {
        const double ramp_xi = std::abs(lambda) / 12.0;
        const double npts = 2.0 * M_PI * 12.0 / (ramp_xi * dr);
        resolve = npts < 1e9 ? static_cast<std::size_t>(npts) : (1u << 30);
    }
    const std::size_t cap = 1u << 17;
    return next_pow2(std::min(cap, std::max(wrap, resolve)));
}

// multiplier -sgn(l) l^2 rho(xi/l) psi(|k/l|) on the padded window lattice
std::vector<double> window_multiplier(const AbsorberSpec& spec, const GridSpec& grid,
                                      double lambda, std::size_t npad) {
    std::vector<double> m(npad, 0.0);
    if (lambda == 0.0) return m;
    const double psi_val =
        spec.psi(std::abs(static_cast<double>(grid.mode.k) / lambda));
    if (psi_val == 0.0) return m;
    const double sgn = lambda > 0.0 ? 1.0 : -1.0;
    const double dxi = 2.0 * M_PI / (static_cast<double>(npad) * grid.dr());
    for (std::size_t p = 0; p < npad; ++p) {
        const double xi = dxi * static_cast<double>(signed_bin(p, npad));
        m[p] = -sgn * lambda * lambda * spec.rho(xi / lambda) * psi_val;
    }
    return m;
}

} // namespace

WBlock build_wblock(const AbsorberSpec& spec, const GridSpec& grid, double lambda,
                    bool exclude_wall_row) {
    WBlock blk;
    if (lambda == 0.0) return blk;
    if (spec.psi(std::abs(static_cast<double>(grid.mode.k) / lambda)) == 0.0)
        return blk; // |lambda| <= 5 |k|: W vanishes identically

    int j0 = static_cast<int>(grid.n_r);
    for (std::size_t j = 0; j < grid.n_r; ++j)
        if (grid.r(j) > spec.R) { j0 = static_cast<int>(j); break; }
    const int nwin = static_cast<int>(grid.n_r) - j0 - (exclude_wall_row ? 1 : 0);
    if (nwin <= 0) return blk;

    const std::size_t npad = window_padding(lambda, grid.dr(), static_cast<std::size_t>(nwin));
    const std::vector<double> m = window_multiplier(spec, grid, lambda, npad);

    // convolution kernel k_d = (1/npad) sum_p m_p e^{+2 pi i p d / npad}
    std::vector<cplx> kernel(npad);
    for (std::size_t p = 0; p < npad; ++p) kernel[p] = m[p];
    ifft(kernel);

    blk.j0 = j0;
    blk.nwin = nwin;
    blk.dense.assign(static_cast<std::size_t>(nwin) * nwin, cplx(0.0, 0.0));
    for (int i = 0; i < nwin; ++i) {
        const double ri = grid.r(j0 + i);
        const double cti = spec.chi_tilde(ri);
        for (int j = 0; j < nwin; ++j) {
            const double rj = grid.r(j0 + j);
            const double ctj = spec.chi_tilde(rj);
            const int d = i - j;
            const cplx kd = kernel[(d % static_cast<int>(npad) + npad) % npad];
            // (A + rho^-1 A rho)/2: self-adjoint in the r dr inner product
            blk.dense[static_cast<std::size_t>(i) * nwin + j] =
                cti * kd * ctj * 0.5 * (1.0 + rj / ri);
        }
    }
    return blk;
}

SpacetimeField apply_W(const AbsorberSpec& spec, const GridSpec& grid,
                       const SpacetimeField& u) {
    if (!u.is_staggered_uniform() || u.n_t != grid.n_t || u.n_r() != grid.n_r ||
        std::abs(u.t_period - grid.t_period) > 1e-12 * grid.t_period)
        throw GridMismatch("apply_W: field grid does not match GridSpec");

    int j0 = static_cast<int>(grid.n_r);
    for (std::size_t j = 0; j < grid.n_r; ++j)
        if (grid.r(j) > spec.R) { j0 = static_cast<int>(j); break; }
    const int nwin = static_cast<int>(grid.n_r) - j0;
    SpacetimeField out = SpacetimeField::zeros(u.t_period, u.n_t, u.r);
    if (nwin <= 0) return out;

    std::vector<double> ct(nwin), rr(nwin);
    for (int i = 0; i < nwin; ++i) {
        rr[i] = grid.r(j0 + i);
        ct[i] = spec.chi_tilde(rr[i]);
    }

    // FFT in t
    const std::size_t nt = u.n_t, nr = u.n_r();
    std::vector<std::vector<cplx>> hat(nr, std::vector<cplx>(nt));
    for (std::size_t j = 0; j < nr; ++j) {
        std::vector<cplx> col(nt);
        for (std::size_t it = 0; it < nt; ++it) col[it] = u.at(it, j);
        fft(col);
        hat[j] = std::move(col);
    }

    std::vector<std::vector<cplx>> res(nr, std::vector<cplx>(nt, cplx(0.0, 0.0)));
    for (std::size_t p = 0; p < nt; ++p) {
        const double lambda = grid.lambda(p);
        const std::size_t npad =
            window_padding(lambda, grid.dr(), static_cast<std::size_t>(nwin));
        const std::vector<double> m = window_multiplier(spec, grid, lambda, npad);
        bool zero = true;
        for (double v : m)
            if (v != 0.0) { zero = false; break; }
        if (zero) continue;

        std::vector<cplx> buf(npad);
        auto multiplier_apply = [&](const std::vector<cplx>& win_in, std::vector<cplx>& win_out) {
            std::fill(buf.begin(), buf.end(), cplx(0.0, 0.0));
            for (int i = 0; i < nwin; ++i) buf[i] = ct[i] * win_in[i];
            fft(buf);
            for (std::size_t q = 0; q < npad; ++q) buf[q] *= m[q];
            ifft(buf);
            win_out.assign(nwin, cplx(0.0, 0.0));
            for (int i = 0; i < nwin; ++i) win_out[i] = ct[i] * buf[i];
        };

        std::vector<cplx> win(nwin), a_u, a_ru;
        for (int i = 0; i < nwin; ++i) win[i] = hat[j0 + i][p];
        multiplier_apply(win, a_u);
        for (int i = 0; i < nwin; ++i) win[i] *= rr[i];
        multiplier_apply(win, a_ru);
        for (int i = 0; i < nwin; ++i)
            res[j0 + i][p] = 0.5 * (a_u[i] + a_ru[i] / rr[i]);
    }

    for (std::size_t j = 0; j < nr; ++j) {
        ifft(res[j]);
        for (std::size_t it = 0; it < nt; ++it) out.at(it, j) = res[j][it];
    }
    return out;
}

PLambda assemble_P_lambda(const AbsorberSpec& spec, const GridSpec& grid, double lambda)
{
    const std::vector<double> r = grid.r_grid();
    const int n = static_cast<int>(grid.n_r);
    const double a = grid.bg.a_rot;
    const double a2 = a * a;
    const double k = static_cast<double>(grid.mode.k);
    const double m = grid.mode.m;

    const double nu_abs = std::abs(a * lambda + k);
    RadialD1Options opts;
    opts.inner = InnerEdge::Frobenius;
    opts.frobenius_nu = nu_abs;
    const BandedMatrix rdr2 = radial_rdr2(r, opts);

    PLambda op{lambda, BandedMatrix(n, 8, 8), 0.0,
               build_wblock(spec, grid, lambda, /*exclude_wall_row=*/true)};
    for (int i = 0; i + 1 < n; ++i) {
        const double r2 = r[i] * r[i];
        const double diag = -(1.0 - a2 / r2) * lambda * lambda + 2.0 * a * k * lambda / r2 +
                            k * k / r2 + m * m;
        const int j0 = std::max(0, i - 8), j1 = std::min(n - 1, i + 8);
        for (int j = j0; j <= j1; ++j) {
            double v = -rdr2.get(i, j) / r2;
            if (j == i) v += diag;
            if (v != 0.0) op.box.at(i, j) = v;
        }
    }
    // last row: homogeneous Dirichlet at the wall, imposed as a 5-node
    // extrapolation of u to r_max scaled to the operator magnitude
    {
        std::vector<double> nodes(r.end() - 5, r.end());
        const auto w = fd_weights(grid.r_max, nodes, 0);
        const double s = 1.0 + lambda * lambda + m * m;
        for (int c = 0; c < 5; ++c) op.box.at(n - 1, n - 5 + c) = s * w[c];
    }
    // discrete resonances of the real part are artifacts of the finite box;
    // the shift scale follows the bulk operator size, not the singular rows
    op.tikhonov = 1e-10 * (1.0 + lambda * lambda + m * m);
    for (int i = 0; i + 1 < n; ++i) op.box.at(i, i) += op.tikhonov;
    return op;
}

std::vector<cplx> PLambda::apply_box_only(const std::vector<cplx>& u) const {
    std::vector<cplx> y = box.matvec(u);
    for (int i = 0; i + 1 < box.n(); ++i) y[i] -= tikhonov * u[i]; // last row is the wall closure
    return y;
}

std::vector<cplx> PLambda::apply(const std::vector<cplx>& u) const {
    std::vector<cplx> y = box.matvec(u);
    if (!wblock.empty()) {
        const cplx mi(0.0, -1.0);
        for (int i = 0; i < wblock.nwin; ++i) {
            cplx acc(0.0, 0.0);
            for (int j = 0; j < wblock.nwin; ++j)
                acc += wblock.dense[static_cast<std::size_t>(i) * wblock.nwin + j] *
                       u[wblock.j0 + j];
            y[wblock.j0 + i] += mi * acc;
        }
    }
    return y;
}

std::vector<cplx> PLambda::to_dense() const {
    const int n = box.n();
    std::vector<cplx> d(static_cast<std::size_t>(n) * n, cplx(0.0, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = std::max(0, i - 8); j <= std::min(n - 1, i + 8); ++j)
            d[static_cast<std::size_t>(i) * n + j] = box.get(i, j);
    if (!wblock.empty()) {
        const cplx mi(0.0, -1.0);
        for (int i = 0; i < wblock.nwin; ++i)
            for (int j = 0; j < wblock.nwin; ++j)
                d[static_cast<std::size_t>(wblock.j0 + i) * n + (wblock.j0 + j)] +=
                    mi * wblock.dense[static_cast<std::size_t>(i) * wblock.nwin + j];
    }
    return d;
}

std::vector<cplx> PLambda::solve_dense(const std::vector<cplx>& f) const {
    DenseLU lu(to_dense(), box.n());
    return lu.solve(f);
}

std::vector<cplx> PLambda::solve(const std::vector<cplx>& f, double* diag_ratio) const {
    const int n = box.n();
    const BandedLU blu(box);
    std::vector<cplx> bf = f;
    blu.solve_inplace(bf); // B^-1 f
    if (wblock.empty()) {
        if (diag_ratio) *diag_ratio = 0.0;
        // one step of iterative refinement
        std::vector<cplx> res = box.matvec(bf);
        for (int i = 0; i < n; ++i) res[i] = f[i] - res[i];
        blu.solve_inplace(res);
        for (int i = 0; i < n; ++i) bf[i] += res[i];
        return bf;
    }

    const int nw = wblock.nwin, j0 = wblock.j0;
    const cplx mi(0.0, -1.0);

    // Z = B^-1 E, E the -iW window block scattered into full columns
    std::vector<std::vector<cplx>> Z(nw);
    for (int c = 0; c < nw; ++c) {
        std::vector<cplx> col(n, cplx(0.0, 0.0));
        for (int i = 0; i < nw; ++i)
            col[j0 + i] = mi * wblock.dense[static_cast<std::size_t>(i) * nw + c];
        blu.solve_inplace(col);
        Z[c] = std::move(col);
    }

    // S = I + Z restricted to window rows
    std::vector<cplx> S(static_cast<std::size_t>(nw) * nw);
    for (int i = 0; i < nw; ++i)
        for (int c = 0; c < nw; ++c)
            S[static_cast<std::size_t>(i) * nw + c] =
                (i == c ? cplx(1.0, 0.0) : cplx(0.0, 0.0)) + Z[c][j0 + i];
    DenseLU slu(std::move(S), nw);
    if (diag_ratio) *diag_ratio = slu.diag_ratio();

    std::vector<cplx> uw(nw);
    for (int i = 0; i < nw; ++i) uw[i] = bf[j0 + i];
    slu.solve_inplace(uw);

    std::vector<cplx> u = bf;
    for (int c = 0; c < nw; ++c) {
        const cplx s = uw[c];
        if (s == cplx(0.0, 0.0)) continue;
        const std::vector<cplx>& col = Z[c];
        for (int i = 0; i < n; ++i) u[i] -= col[i] * s;
    }

    // one step of iterative refinement against the full operator
    std::vector<cplx> res = apply(u);
    for (int i = 0; i < n; ++i) res[i] = f[i] - res[i];
    std::vector<cplx> du = res;
    blu.solve_inplace(du);
    std::vector<cplx> dw(nw);
    for (int i = 0; i < nw; ++i) dw[i] = du[j0 + i];
    slu.solve_inplace(dw);
    for (int c = 0; c < nw; ++c) {
        const cplx s = dw[c];
        for (int i = 0; i < n; ++i) du[i] -= Z[c][i] * s;
    }
    for (int i = 0; i < n; ++i) u[i] += du[i];
    return u;
}

namespace {

std::pair<SpacetimeField, SolveReport> solve_forward_impl(const AbsorberSpec& spec,
                                                          const GridSpec& grid,
                                                          const SpacetimeField& f,
                                                          bool parallel) {
    SolveReport report;
    report.warnings = validate_absorber_on_grid(spec, grid);
    if (!f.is_staggered_uniform() || f.n_t != grid.n_t || f.n_r() != grid.n_r)
        throw GridMismatch("solve_forward: forcing grid does not match GridSpec");

    // precondition: supp f inside { r < R0 }
    for (std::size_t j = 0; j < grid.n_r; ++j) {
        if (grid.r(j) < spec.r0_source) continue;
        for (std::size_t it = 0; it < grid.n_t; ++it)
            if (std::abs(f.at(it, j)) != 0.0)
                throw std::invalid_argument("solve_forward: forcing support leaks past R0");
    }

    const std::size_t nt = grid.n_t, nr = grid.n_r;
    // FFT forcing in t
    std::vector<std::vector<cplx>> fhat(nt, std::vector<cplx>(nr));
    {
        std::vector<cplx> col(nt);
        for (std::size_t j = 0; j < nr; ++j) {
            for (std::size_t it = 0; it < nt; ++it) col[it] = f.at(it, j);
            fft(col);
            for (std::size_t p = 0; p < nt; ++p) fhat[p][j] = col[p];
        }
    }

    std::vector<std::vector<cplx>> uhat(nt);
    std::vector<double> res_sq(nt, 0.0), f_sq(nt, 0.0), diag_ratios(nt, 0.0);
    const double dr = grid.dr();

    auto solve_one = [&](std::size_t p) {
        const double lambda = grid.lambda(p);
        const PLambda op = assemble_P_lambda(spec, grid, lambda);
        double dratio = 0.0;
        std::vector<cplx> u;
        try {
            u = op.solve(fhat[p], &dratio);
        } catch (const std::exception& e) {
            throw std::runtime_error("solve_forward: block lambda = " + std::to_string(lambda) +
                                     " failed (diag ratio " + std::to_string(dratio) +
                                     "): " + e.what());
        }
        diag_ratios[p] = dratio;
        // residual of the unshifted Box_k + m^2 block on { r < R }
        const std::vector<cplx> bu = op.apply_box_only(u);
        double rs = 0.0, fs = 0.0;
        for (std::size_t j = 0; j < nr; ++j) {
            const double r = grid.r(j);
            if (r >= spec.R) continue;
            const double w = r * dr;
            rs += std::norm(bu[j] - fhat[p][j]) * w;
            fs += std::norm(fhat[p][j]) * w;
        }
        res_sq[p] = rs;
        f_sq[p] = fs;
        uhat[p] = std::move(u);
    };

    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long p = 0; p < static_cast<long>(nt); ++p) solve_one(static_cast<std::size_t>(p));
    } else {
        for (std::size_t p = 0; p < nt; ++p) solve_one(p);
    }

    double res_total = 0.0, f_total = 0.0;
    for (std::size_t p = 0; p < nt; ++p) {
        res_total += res_sq[p];
        f_total += f_sq[p];
        report.max_diag_ratio = std::max(report.max_diag_ratio, diag_ratios[p]);
    }
    report.interior_residual_rel = f_total > 0.0 ? std::sqrt(res_total / f_total) : 0.0;

    SpacetimeField u = grid.make_field();
    {
        std::vector<cplx> col(nt);
        for (std::size_t j = 0; j < nr; ++j) {
            for (std::size_t p = 0; p < nt; ++p) col[p] = uhat[p][j];
            ifft(col);
            for (std::size_t it = 0; it < nt; ++it) u.at(it, j) = col[it];
        }
    }

    // elliptic-region mass fraction, delta = 0.1
    const double r_ell = grid.bg.a_rot * 0.9;
    double ell = 0.0, tot = 0.0;
    for (std::size_t it = 0; it < nt; ++it)
        for (std::size_t j = 0; j < nr; ++j) {
            const double w = grid.r(j) * dr;
            const double m2 = std::norm(u.at(it, j));
            tot += m2 * w;
            if (grid.r(j) < r_ell) ell += m2 * w;
        }
    report.total_norm_sq = tot * u.dt();
    report.elliptic_mass_fraction = tot > 0.0 ? ell / tot : 0.0;
    return {std::move(u), report};
}

} // namespace

std::pair<SpacetimeField, SolveReport> solve_forward(const AbsorberSpec& spec,
                                                     const GridSpec& grid,
                                                     const SpacetimeField& f) {
    return solve_forward_impl(spec, grid, f, true);
}

std::pair<SpacetimeField, SolveReport> solve_forward_serial(const AbsorberSpec& spec,
                                                            const GridSpec& grid,
                                                            const SpacetimeField& f) {
    return solve_forward_impl(spec, grid, f, false);
}

namespace {

// Gabor amplitude of the incoming branch at radius r0
double incoming_amplitude(const std::vector<cplx>& u, const GridSpec& g, double lambda,
                          double r0, double sw) {
    const double a = g.bg.a_rot;
    const double xi_in = lambda * std::sqrt(1.0 - a * a / (r0 * r0));
    cplx acc(0.0, 0.0);
    double nrm = 0.0;
    for (std::size_t j = 0; j < g.n_r; ++j) {
        const double d = g.r(j) - r0;
        if (std::abs(d) > 4.0 * sw) continue;
        const double w = std::exp(-0.5 * d * d / (sw * sw));
        acc += u[j] * w * cplx(std::cos(xi_in * g.r(j)), -std::sin(xi_in * g.r(j)));
        nrm += w;
    }
    return nrm > 0.0 ? std::abs(acc) / nrm : 0.0;
}

} // namespace

DampingProbe damping_direction_probe(const AbsorberSpec& spec, const GridSpec& grid,
                                     double lambda) {
    const PLambda op = assemble_P_lambda(spec, grid, lambda);
    const double rc = spec.R + 1.7;
    const double a = grid.bg.a_rot;
    const double xi0 = lambda * std::sqrt(1.0 - a * a / (rc * rc)); // Sigma_-: sgn xi = sgn lambda
    std::vector<cplx> f(grid.n_r, cplx(0.0, 0.0));
    for (std::size_t j = 0; j < grid.n_r; ++j) {
        const double d = grid.r(j) - rc;
        f[j] = std::exp(-0.5 * d * d / (0.35 * 0.35)) *
               cplx(std::cos(xi0 * grid.r(j)), std::sin(xi0 * grid.r(j)));
    }
    const std::vector<cplx> u = op.solve(f);
    DampingProbe probe;
    probe.incoming_outer = incoming_amplitude(u, grid, lambda, spec.R + 0.95, 0.15);
    probe.incoming_inner = incoming_amplitude(u, grid, lambda, spec.R + 0.08, 0.15);
    probe.ratio = probe.incoming_outer > 0.0 ? probe.incoming_inner / probe.incoming_outer : 0.0;
    return probe;
}

CoercivityParts coercivity_trial(const BackgroundParams& bg, const ModeParams& mode,
                                 const CoercivityTrial& trial) {
    const double a = bg.a_rot;
    const double kk = static_cast<double>(mode.k);
    for (const Bump& b : trial.bumps)
        if (!(b.lo > 0.0 && b.hi < 0.25 * a))
            throw std::invalid_argument(
                "coercivity_trial: bump support must lie inside (0, a/4)");

    CoercivityParts parts{0.0, 0.0, 0.0, 0.0, 0.0};
    for (std::size_t j = 0; j < trial.bumps.size(); ++j) {
        const Bump& bump = trial.bumps[j];
        const double omega = trial.omegas[j];
        const QuadRule gl = gauss_legendre(96, bump.lo, bump.hi);
        double i_l2 = 0.0, i_over_r2 = 0.0, i_dr = 0.0, i_Lg = 0.0;
        for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
            const double r = gl.nodes[q], w = gl.weights[q] * r;
            const double g = bump.value(r);
            const double gp = bump.deriv(r);
            const double gpp = bump.deriv2(r);
            i_l2 += g * g * w;
            i_over_r2 += g * g / (r * r) * w;
            i_dr += gp * gp * w;
            const double Lg = -(1.0 - a * a / (r * r)) * omega * omega * g +
                              2.0 * a * kk * omega / (r * r) * g + kk * kk / (r * r) * g +
                              mode.m * mode.m * g - (gpp + gp / r);
            i_Lg += Lg * g * w;
        }
        const double c2 = std::norm(trial.coeffs[j]) * trial.t_period;
        const double tw = a * omega + kk;
        parts.pairing += c2 * i_Lg;
        parts.twisted += c2 * tw * tw * i_over_r2;
        parts.dt += c2 * omega * omega * i_l2;
        parts.dr += c2 * i_dr;
        parts.l2 += c2 * i_l2;
    }
    return parts;
}

CoercivityReport coercivity_check(const BackgroundParams& bg, const ModeParams& mode,
                                  int trial_count, double t_period, uint64_t seed) {
    const double a = bg.a_rot;
    const double kk = static_cast<double>(mode.k);
    SplitMix64 rng(seed);
    CoercivityReport rep;
    rep.trials = trial_count;
    rep.min_slack = std::numeric_limits<double>::infinity();

    for (int t = 0; t < trial_count; ++t) {
        // 3 modes with distinct integer frequencies and random bumps in (0, a/4)
        CoercivityTrial trial;
        trial.t_period = t_period;
        std::vector<int> used;
        for (int j = 0; j < 3; ++j) {
            int n;
            do {
                n = static_cast<int>(rng.next_below(17)) - 8;
            } while (std::find(used.begin(), used.end(), n) != used.end());
            used.push_back(n);
            trial.omegas.push_back(2.0 * M_PI * n / t_period);
            const double lo = rng.uniform(0.01 * a, 0.12 * a);
            const double hi = rng.uniform(lo + 0.05 * a, 0.2495 * a);
            trial.bumps.emplace_back(lo, hi);
            trial.coeffs.emplace_back(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        }

        const CoercivityParts p = coercivity_trial(bg, mode, trial);
        const double rhs = p.twisted - p.dt + p.dr + mode.m * mode.m * p.l2;
        const double scale = std::max({std::abs(p.pairing), std::abs(rhs), 1e-30});
        rep.max_identity_rel_err =
            std::max(rep.max_identity_rel_err, std::abs(p.pairing - rhs) / scale);

        const double bound = 0.75 * p.twisted + p.dt + p.dr + p.l2 -
                             (1.0 + 4.0 * kk * kk / (a * a)) * p.l2;
        rep.min_slack = std::min(rep.min_slack, p.pairing - bound);
    }
    if (trial_count == 0) rep.min_slack = 0.0;
    return rep;
}

} // namespace cosmon::solver
