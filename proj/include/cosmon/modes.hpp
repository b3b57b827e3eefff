#pragma once
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "cosmon/background.hpp"

namespace cosmon::modes {

using cplx = std::complex<double>;

// Radial profile u_hat(lambda, r) of one temporal frequency.
struct ModeProfile {
    double lambda = 0.0;
    std::vector<double> r_grid;
    std::vector<cplx> values;
    BackgroundParams bg{1.0};
    ModeParams mode{0, 0.0};
};

void write_profile_csv(const ModeProfile& p, const std::string& path);

enum class Branch { regular, singular };

// Closed-form solution of the transformed mode ODE
//   (r d/dr)^2 v = (nu^2 - (lambda^2 - m^2) r^2) v,   nu = a k_rot lambda + k:
// J_{+-|nu|}(kappa r) when lambda^2 > m^2 (kappa = sqrt(lambda^2 - m^2)),
// I_{+-|nu|}(sqrt(m^2 - lambda^2) r) when lambda^2 < m^2.
struct ExactMode {
    double nu = 0.0;        // signed order actually used (+|nu| regular, -|nu| singular)
    double kappa = 0.0;     // radial scale
    bool oscillatory = true; // J branch (lambda^2 > m^2) vs I branch

    double operator()(double r) const;
    double derivative(double r) const;
};

ExactMode exact_mode(const BackgroundParams& bg, const ModeParams& mode, double lambda,
                     Branch branch);

// Integrate the mode ODE as a first-order system in (u, r u') from initial
// data at r_start across r_span; the r = 0 singular point enters only
// through 1/r coefficients, so starts are kept at r >= 1e-6.
ModeProfile solve_mode_ode(const BackgroundParams& bg, const ModeParams& mode, double lambda,
                           std::pair<double, double> r_span, double r_start,
                           std::pair<cplx, cplx> initial, const std::vector<double>& r_samples,
                           double tol = 1e-12);

struct UniqueContinuationReport {
    double zero_data_sup = 0.0;  // sup |u| over I from zero initial data
    double min_window_mass = 0.0; // min over trials of the L2 mass on (a/2, a)
    int trials = 0;
};

// Two unique-continuation experiments: zero data on I cap (0, a) stays zero
// across I, and no nontrivial solution has vanishing local mass on the
// window (a/2, a).
UniqueContinuationReport unique_continuation_check(const BackgroundParams& bg,
                                                   const ModeParams& mode, double lambda,
                                                   std::pair<double, double> I, double tol,
                                                   int trials = 100, uint64_t seed = 1);

struct H1kNormReport {
    double l2 = 0.0, dt = 0.0, dr = 0.0, twisted = 0.0;
    double total() const { return l2 + dt + dr + twisted; }
};

// Squared adapted Sobolev norm |u|^2 + |dt u|^2 + |dr u|^2 + |r^-1(a dt + ik)u|^2
// with weight r dr dt; spectral in t, finite differences in r.
H1kNormReport h1k_norm(const BackgroundParams& bg, const ModeParams& mode,
                       const SpacetimeField& u);

// restrict the quadrature to r > eps (used for the divergence-rate fits)
H1kNormReport h1k_norm_cut(const BackgroundParams& bg, const ModeParams& mode,
                           const SpacetimeField& u, double r_cut);

struct ZetaSpec {
    double nu_lo = -0.75, nu_hi = -0.25;          // support window in nu = a lambda + k
    double nu_plateau_lo = -2.0 / 3.0, nu_plateau_hi = -1.0 / 3.0; // zeta * f1 = 1 here
};

struct CounterexampleGrids {
    int n_lambda = 200;   // Gauss-Legendre nodes over supp zeta
    int n_t = 256;
    double t_window = 60.0; // field assembled on [-t_window, t_window]
    int n_r = 4096;         // staggered uniform on (0, a)
    int refinements = 3;    // ladder: double nodes, halve spacing together
};

struct CounterexampleReport {
    std::vector<double> l2_per_level;       // |phi|_L2 per refinement level
    std::vector<double> eps_ladder;          // inner cutoffs
    std::vector<double> dr_norm_sq_per_eps;  // |dr phi|^2_{L2(r>eps)} at finest level
    double l2_ratio = 0.0;                   // last successive ratio
    double slope = 0.0;                      // d log |dr phi|^2 / d log eps fit
    bool f1_near_zero_warning = false;
};

// Superposition phi(t,r) = int zeta(lambda) chi(r) e^{i lambda t} J_nu(|lambda| r) dlambda
// with zeta * f1(nu) a plateau bump; reports L2 stability and the divergence
// rate of |dr phi| under the inner cutoff.
std::pair<SpacetimeField, CounterexampleReport> counterexample(const BackgroundParams& bg, int k,
                                                               const ZetaSpec& zeta,
                                                               const CounterexampleGrids& grids);

} // namespace cosmon::modes
