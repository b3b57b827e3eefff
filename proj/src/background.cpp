#include "cosmon/background.hpp"

#include <algorithm>
#include <cmath>

#include "cosmon/fft.hpp"
#include "cosmon/radial_ops.hpp"

namespace cosmon {

double principal_symbol(const BackgroundParams& bg, const PhasePoint& q) {
    if (!(q.r > 0.0)) throw std::domain_error("principal_symbol: r must be > 0");
    const double a2 = bg.a_rot * bg.a_rot;
    return (a2 / (q.r * q.r)) * q.lambda * q.lambda - q.lambda * q.lambda + q.xi * q.xi;
}

bool in_characteristic_set(const BackgroundParams& bg, const PhasePoint& q, double tol) {
    if (!(q.r > 0.0)) throw std::domain_error("in_characteristic_set: r must be > 0");
    if (!(tol > 0.0)) throw std::invalid_argument("in_characteristic_set: tol must be > 0");
    const double mag2 = q.lambda * q.lambda + q.xi * q.xi + q.eta * q.eta;
    if (mag2 == 0.0) throw std::domain_error("in_characteristic_set: zero covector");
    const double a2 = bg.a_rot * bg.a_rot;
    const double r2 = q.r * q.r;
    const double poly = (r2 - a2) * q.lambda * q.lambda - r2 * q.xi * q.xi;
    const double scale = (q.lambda * q.lambda + q.xi * q.xi) * std::max(r2, a2);
    const bool on_cone = std::abs(poly) <= tol * scale;
    const bool eta_zero = std::abs(q.eta) <= tol * std::sqrt(q.lambda * q.lambda + q.xi * q.xi);
    return on_cone && eta_zero;
}

bool in_sigma_minus(const BackgroundParams& bg, const PhasePoint& q, double tol) {
    if (!in_characteristic_set(bg, q, tol)) return false;
    if (!(q.r > bg.a_rot)) return false;
    if (q.lambda == 0.0 || q.xi == 0.0) return false;
    return (q.lambda > 0.0) == (q.xi > 0.0);
}

namespace {

// per-frequency radial action of the box operator, shared by both routes
void radial_block(const BackgroundParams& bg, const ModeParams& mode, double lambda,
                  const std::vector<double>& r, const BandedMatrix& rdr2,
                  const std::vector<cplx>& in, std::vector<cplx>& out) {
    const double a2 = bg.a_rot * bg.a_rot;
    const std::vector<cplx> d2 = rdr2.matvec(in);
    for (std::size_t j = 0; j < r.size(); ++j) {
        const double r2 = r[j] * r[j];
        const double coef = -(1.0 - a2 / r2) * lambda * lambda +
                            2.0 * bg.a_rot * mode.k * lambda / r2 +
                            static_cast<double>(mode.k) * mode.k / r2 + mode.m * mode.m;
        out[j] = coef * in[j] - d2[j] / r2;
    }
}

} // namespace

SpacetimeField apply_box_k(const BackgroundParams& bg, const ModeParams& mode,
                           const SpacetimeField& u) {
    if (!u.is_staggered_uniform() || !is_pow2(u.n_t))
        throw GridMismatch("apply_box_k: staggered uniform r grid and power-of-two n_t required");
    const std::size_t nt = u.n_t, nr = u.n_r();
    const RadialD1Options opts; // plain one-sided edges
    const BandedMatrix rdr2 = radial_rdr2(u.r, opts);

    // FFT each radial column in t
    std::vector<std::vector<cplx>> hat(nr, std::vector<cplx>(nt));
    for (std::size_t j = 0; j < nr; ++j) {
        std::vector<cplx> col(nt);
        for (std::size_t it = 0; it < nt; ++it) col[it] = u.at(it, j);
        fft(col);
        hat[j] = std::move(col);
    }

    SpacetimeField out = SpacetimeField::zeros(u.t_period, nt, u.r);
    std::vector<cplx> in_block(nr), out_block(nr);
    std::vector<std::vector<cplx>> res(nr, std::vector<cplx>(nt));
    for (std::size_t p = 0; p < nt; ++p) {
        const double lambda = 2.0 * M_PI * static_cast<double>(signed_bin(p, nt)) / u.t_period;
        for (std::size_t j = 0; j < nr; ++j) in_block[j] = hat[j][p];
        radial_block(bg, mode, lambda, u.r, rdr2, in_block, out_block);
        for (std::size_t j = 0; j < nr; ++j) res[j][p] = out_block[j];
    }
    for (std::size_t j = 0; j < nr; ++j) {
        ifft(res[j]);
        for (std::size_t it = 0; it < nt; ++it) out.at(it, j) = res[j][it];
    }
    return out;
}

SpacetimeField apply_box_k_factored(const BackgroundParams& bg, const ModeParams& mode,
                                    const SpacetimeField& u) {
    if (!u.is_staggered_uniform() || !is_pow2(u.n_t))
        throw GridMismatch("apply_box_k_factored: staggered uniform grid required");
    const std::size_t nt = u.n_t, nr = u.n_r();
    const RadialD1Options opts;
    const BandedMatrix d1 = radial_d1(u.r, opts);

    SpacetimeField out = SpacetimeField::zeros(u.t_period, nt, u.r);
    // work per-frequency: -r^-2 (i a lambda + ik)^2 u - lambda^2 u - u'' - u'/r
    std::vector<std::vector<cplx>> hat(nr, std::vector<cplx>(nt));
    for (std::size_t j = 0; j < nr; ++j) {
        std::vector<cplx> col(nt);
        for (std::size_t it = 0; it < nt; ++it) col[it] = u.at(it, j);
        fft(col);
        hat[j] = std::move(col);
    }
    std::vector<cplx> in_block(nr), d1u(nr), d2u(nr);
    std::vector<std::vector<cplx>> res(nr, std::vector<cplx>(nt));
    for (std::size_t p = 0; p < nt; ++p) {
        const double lambda = 2.0 * M_PI * static_cast<double>(signed_bin(p, nt)) / u.t_period;
        for (std::size_t j = 0; j < nr; ++j) in_block[j] = hat[j][p];
        d1u = d1.matvec(in_block);
        d2u = d1.matvec(d1u);
        const double tw = bg.a_rot * lambda + static_cast<double>(mode.k);
        for (std::size_t j = 0; j < nr; ++j) {
            const double r = u.r[j];
            res[j][p] = (tw * tw / (r * r) - lambda * lambda + mode.m * mode.m) * in_block[j] -
                        d2u[j] - d1u[j] / r;
        }
    }
    for (std::size_t j = 0; j < nr; ++j) {
        ifft(res[j]);
        for (std::size_t it = 0; it < nt; ++it) out.at(it, j) = res[j][it];
    }
    return out;
}

} // namespace cosmon
