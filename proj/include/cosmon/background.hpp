#pragma once
#include <stdexcept>

#include "cosmon/field.hpp"

namespace cosmon {

// String rotation parameter.  The metric's constant is -4GJ; we store its
// absolute value and adopt the positive-sign convention globally (k -> -k
// covers the other sign; all formulas below are even in the constant except
// through nu = a_rot * lambda + k).
struct BackgroundParams {
    double a_rot;

    explicit BackgroundParams(double a) : a_rot(a) {
        if (!(a > 0.0)) throw std::invalid_argument("BackgroundParams: a_rot must be > 0");
    }
};

struct ModeParams {
    int k;
    double m;

    ModeParams(int k_, double m_) : k(k_), m(m_) {
        if (!(m >= 0.0)) throw std::invalid_argument("ModeParams: m must be >= 0");
    }
};

// Point of the cotangent bundle in cylindrical coordinates (t, r, phi) with
// dual coordinates (lambda, xi, eta).
struct PhasePoint {
    double t = 0.0, r = 0.0, phi = 0.0;
    double lambda = 0.0, xi = 0.0, eta = 0.0;
};

inline double covector_norm_sq(const PhasePoint& q) {
    return q.lambda * q.lambda + q.xi * q.xi + q.eta * q.eta;
}

// sigma_2 = (a^2/r^2) lambda^2 - lambda^2 + xi^2
double principal_symbol(const BackgroundParams& bg, const PhasePoint& q);

// Conic membership test: |(r^2 - a^2) lambda^2 - r^2 xi^2| against a
// tolerance scaled by covector magnitude, and |eta| small in the same sense.
// The polynomial form avoids division by r^2.
bool in_characteristic_set(const BackgroundParams& bg, const PhasePoint& q, double tol);

// Sigma_- = Sigma, restricted to r > a and sgn(lambda) = sgn(xi), both nonzero.
bool in_sigma_minus(const BackgroundParams& bg, const PhasePoint& q, double tol);

// Discrete action of (1 - a^2/r^2) dt^2 - r^-2 (r dr)^2 - (2 a i k / r^2) dt
// + k^2/r^2 + m^2 on a periodic-in-t staggered-uniform field.  Spectral in t,
// 4th-order finite differences in r (plain one-sided edge stencils).
SpacetimeField apply_box_k(const BackgroundParams& bg, const ModeParams& mode,
                           const SpacetimeField& u);

// Same operator through the factored route -r^-2 (a dt + ik)^2 + dt^2 - dr^2
// - r^-1 dr; agrees with apply_box_k to discretization tolerance (the two
// radial discretizations differ).
SpacetimeField apply_box_k_factored(const BackgroundParams& bg, const ModeParams& mode,
                                    const SpacetimeField& u);

} // namespace cosmon
