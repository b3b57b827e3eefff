#pragma once
#include <optional>
#include <string>
#include <vector>

#include "cosmon/background.hpp"
#include "cosmon/cutoffs.hpp"
#include "cosmon/linalg.hpp"

namespace cosmon::solver {

// Absorber geometry and cutoffs.  rho = 1 on (3/4, 5/4) with support in
// (2/3, 4/3); psi = 1 on (-1/10, 1/10) with support in (-1/5, 1/5); chi rises
// on (R + 1/3, R + 1) so it is supported in (R, inf) and equals 1 on
// (R + 1, inf); chi_tilde rises on (R, R + 1/3) so it equals 1 on supp chi and
// is supported in (R, inf).
struct AbsorberSpec {
    double R;
    double r0_source; // R0: forcing must be supported in { r < R0 }, R0 < R

    Plateau rho{2.0 / 3.0, 3.0 / 4.0, 5.0 / 4.0, 4.0 / 3.0};
    Plateau psi{-0.2, -0.1, 0.1, 0.2};
    Ramp chi_ramp;       // chi(r)  = chi_ramp(r)
    Ramp chi_tilde_ramp; // chi~(r) = chi_tilde_ramp(r)

    AbsorberSpec(const BackgroundParams& bg, double R_, double r0_source_);

    double chi(double r) const { return chi_ramp(r); }
    double chi_tilde(double r) const { return chi_tilde_ramp(r); }
};

struct GridSpec {
    double t_period;
    std::size_t n_t; // power of two
    double r_max;
    std::size_t n_r;
    double stagger = 0.5; // r_j = (j + stagger) * dr

    BackgroundParams bg{1.0};
    ModeParams mode{0, 0.0};

    double dr() const { return r_max / static_cast<double>(n_r); }
    double r(std::size_t j) const { return (static_cast<double>(j) + stagger) * dr(); }
    std::vector<double> r_grid() const;
    double lambda(std::size_t p) const; // signed frequency of t-bin p
    SpacetimeField make_field() const;
};

// Validate the absorber/grid pairing: plateau and support conditions hold
// pointwise on the grid, R_max > R + 2, 1 - a^2/R^2 > 9/10.  Returns warnings
// (e.g. chi~ support resolved by fewer than 16 points).
std::vector<std::string> validate_absorber_on_grid(const AbsorberSpec& spec,
                                                   const GridSpec& grid);

// w = -sgn(lambda) lambda^2 rho(xi/lambda) psi(|eta/lambda|) chi(r); 0 at lambda = 0.
double absorber_symbol(const AbsorberSpec& spec, double r, double lambda, double xi,
                       double eta);

// Dense window block of the quantized absorber for one frequency:
// A = chi~ M^-1 [ -sgn(l) l^2 rho(xi/l) psi(|k/l|) ] M chi~ on the zero-padded
// window covering supp chi~, then symmetrized to be self-adjoint in the
// r dr inner product: W = (A + rho^-1 A rho) / 2.
struct WBlock {
    int j0 = 0;   // first grid index of the window (r > R)
    int nwin = 0; // window length; empty block means W = 0 at this frequency
    std::vector<cplx> dense; // nwin x nwin, row-major

    bool empty() const { return nwin == 0; }
};

// exclude_wall_row drops the last grid point from the window (used by the
// per-frequency solver, whose last row is the Dirichlet wall closure).
WBlock build_wblock(const AbsorberSpec& spec, const GridSpec& grid, double lambda,
                    bool exclude_wall_row = false);

// W applied to a field (FFT route per frequency, same operator as the dense
// blocks).  Exactly zero on grid points with r <= R and for inputs supported
// in { r < R }.
SpacetimeField apply_W(const AbsorberSpec& spec, const GridSpec& grid,
                       const SpacetimeField& u);

// Everything needed to apply and invert one frequency block of
// P = Box_k + m^2 - i W.
struct PLambda {
    double lambda = 0.0;
    BandedMatrix box;    // real part incl. Tikhonov shift, kl = ku = 8
    double tikhonov = 0.0;
    WBlock wblock;

    std::vector<cplx> apply(const std::vector<cplx>& u) const;          // P u
    std::vector<cplx> apply_box_only(const std::vector<cplx>& u) const; // (Box_k + m^2) u, no shift

    // Solve P u = f by eliminating the banded part and a dense Schur
    // complement on the absorber window; dense reference path for tests.
    std::vector<cplx> solve(const std::vector<cplx>& f, double* diag_ratio = nullptr) const;
    std::vector<cplx> solve_dense(const std::vector<cplx>& f) const;

    std::vector<cplx> to_dense() const; // n x n row-major
};

PLambda assemble_P_lambda(const AbsorberSpec& spec, const GridSpec& grid, double lambda);

struct SolveReport {
    double interior_residual_rel = 0.0; // |(Box_k + m^2) u - f| / |f| on { r < R }
    double elliptic_mass_fraction = 0.0; // |u|^2 share in { r < a (1 - delta) }, delta = 0.1
    double total_norm_sq = 0.0;
    double max_diag_ratio = 0.0;
    std::vector<std::string> warnings;
};

// Forward solve: FFT f in t, solve every frequency block, inverse FFT.
// OpenMP across frequencies; the serial variant is the reference
// implementation (identical results, used by tests and the benchmark).
std::pair<SpacetimeField, SolveReport> solve_forward(const AbsorberSpec& spec,
                                                     const GridSpec& grid,
                                                     const SpacetimeField& f);
std::pair<SpacetimeField, SolveReport> solve_forward_serial(const AbsorberSpec& spec,
                                                            const GridSpec& grid,
                                                            const SpacetimeField& f);

struct DampingProbe {
    double incoming_outer = 0.0; // Gabor amplitude of the incoming branch at R + 0.95
    double incoming_inner = 0.0; // ... at R + 0.08
    double ratio = 0.0;
};

// Launch a wave packet concentrated on Sigma_- cap { r > R+1 } at one
// frequency and measure the decay of the incoming component across the
// absorber band (R, R+1): Gabor projection onto the local incoming
// wavenumber at both band edges.  At high |lambda| the ratio is small; this
// is the discrete shadow of regularity propagating forward in time.
DampingProbe damping_direction_probe(const AbsorberSpec& spec, const GridSpec& grid,
                                     double lambda);

struct CoercivityReport {
    double max_identity_rel_err = 0.0;
    double min_slack = 0.0; // inequality slack, >= 0 on every trial
    int trials = 0;
};

// One trial field phi = sum_j c_j e^{i omega_j t} g_j(r).  Distinct omega_j
// are integer multiples of 2 pi / t_period so cross terms vanish exactly.
struct CoercivityTrial {
    std::vector<Bump> bumps;
    std::vector<cplx> coeffs;
    std::vector<double> omegas;
    double t_period;
};

struct CoercivityParts {
    double pairing;  // <P phi, phi>, quadrature of (Box_k + m^2) phi against phi
    double twisted;  // |r^-1 (a dt + ik) phi|^2
    double dt, dr, l2;
};

// Throws std::invalid_argument when a bump support leaks past r = a/4.
CoercivityParts coercivity_trial(const BackgroundParams& bg, const ModeParams& mode,
                                 const CoercivityTrial& trial);

// Randomized trials phi = sum_j c_j e^{i w_j t} g_j(r) with smooth bumps
// supported in { r < a/4 }.  Checks the exact pairing identity
//   <P phi, phi> = |r^-1(a dt + ik) phi|^2 - |dt phi|^2 + |dr phi|^2 + m^2 |phi|^2
// (quadrature oracle; W contributes nothing on this support) and the lower
// bound with constant (1 + 4 k^2 / a^2).
CoercivityReport coercivity_check(const BackgroundParams& bg, const ModeParams& mode,
                                  int trial_count, double t_period, uint64_t seed);

} // namespace cosmon::solver
