#pragma once
#include <string>
#include <vector>

#include "cosmon/background.hpp"

namespace cosmon::rays {

// Tangent vector of the Hamilton flow at a phase point, ordered
// (dt, dr, dphi, dlambda, dxi, deta).
struct HamiltonVector {
    double dt, dr, dphi, dlambda, dxi, deta;
};

// H = -2 lambda (1 - a^2/r^2) dt + 2 xi dr + 2 a^2 lambda^2 / r^3 dxi.
// lambda, eta and phi are constant on modes.
HamiltonVector hamilton_field(const BackgroundParams& bg, const PhasePoint& q);

struct RaySample {
    double s;
    PhasePoint q;
};

struct RayPath {
    std::vector<RaySample> samples;
    BackgroundParams params{1.0};
    double tol = 0.0;
    std::size_t internal_steps = 0; // accepted adaptive steps behind the samples

    // closed-form constant for null rays with eta = 0: r(s)^2 = a^2 + (2 lambda s + c)^2
    double closed_form_c() const; // c = r0 xi0 / lambda at the first sample
};

// r used as a hard guard; null rays with lambda != 0 never reach it.
inline constexpr double kRayRMinFactor = 1e-3;

// Threshold used for the asymptotic monotonicity checks: at r > 2a the factor
// (1 - a^2/r^2) exceeds 3/4, so |dt/ds| > |lambda|.  The source text does not
// quantify "sufficiently large r"; this module constant records our choice.
inline constexpr double kMonotoneRadiusFactor = 2.0;

// Integrate the bicharacteristic through q0 (on Sigma within tol, eta = 0)
// in the cotangent variables (t, r, lambda, xi), sampling s_values (sorted,
// may straddle 0; integration runs from 0 in both directions as needed).
RayPath integrate_ray(const BackgroundParams& bg, const PhasePoint& q0,
                      const std::vector<double>& s_values, double tol = 1e-10);

// Forward-in-time flowout: both flow directions, keeping samples with
// t >= t(seed) (up to integrator tolerance).  One path per seed, seed order.
std::vector<RayPath> forward_flowout(const BackgroundParams& bg,
                                     const std::vector<PhasePoint>& seeds, double horizon,
                                     double tol = 1e-10);

// OpenMP batch variant of integrate_ray plus its serial reference.
std::vector<RayPath> integrate_batch(const BackgroundParams& bg,
                                     const std::vector<PhasePoint>& seeds,
                                     const std::vector<double>& s_values, double tol = 1e-10);
std::vector<RayPath> integrate_batch_serial(const BackgroundParams& bg,
                                            const std::vector<PhasePoint>& seeds,
                                            const std::vector<double>& s_values,
                                            double tol = 1e-10);

struct EscapeBox {
    double t_lo, t_hi;
    double r_lo, r_hi;
};

struct EscapeReport {
    double T = 0.0;            // every sampled backward ray escapes by |t| <= T
    std::size_t seed_count = 0;
    double max_escape_radius = 0.0;
};

// Sample K x Sigma on the unit-|lambda| slice, trace each seed in the
// direction of decreasing t until it crosses r = R + 1 at an incoming point
// (sgn dr/ds = -sgn dt/ds), and report the certified time bound T.
EscapeReport escape_analysis(const BackgroundParams& bg, const EscapeBox& K, double R,
                             double tol = 1e-10, int n_r_samples = 8, int n_t_samples = 5);

// CSV with header s,t,r,phi,lambda,xi,eta
void write_ray_csv(const RayPath& path, const std::string& file);

} // namespace cosmon::rays
