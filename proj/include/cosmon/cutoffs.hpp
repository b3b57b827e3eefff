#pragma once
#include <cmath>
#include <stdexcept>

namespace cosmon {

// exp(-1/y) mollifier piece, extended by 0 for y <= 0.
inline double mollifier_piece(double y) {
    return y > 0.0 ? std::exp(-1.0 / y) : 0.0;
}

// C-infinity step: 0 for y <= 0, 1 for y >= 1, strictly increasing between.
inline double smooth_step(double y) {
    if (y <= 0.0) return 0.0;
    if (y >= 1.0) return 1.0;
    const double a = mollifier_piece(y);
    const double b = mollifier_piece(1.0 - y);
    return a / (a + b);
}

inline double smooth_step_deriv(double y) {
    if (y <= 0.0 || y >= 1.0) return 0.0;
    const double a = mollifier_piece(y);
    const double b = mollifier_piece(1.0 - y);
    const double s = a + b;
    return a * b * (1.0 / (y * y) + 1.0 / ((1.0 - y) * (1.0 - y))) / (s * s);
}

// Smooth plateau: 0 outside [lo, hi], 1 on [plateau_lo, plateau_hi],
// monotone smooth ramps in between.
struct Plateau {
    double lo, plateau_lo, plateau_hi, hi;

    Plateau(double lo_, double plo, double phi_, double hi_)
        : lo(lo_), plateau_lo(plo), plateau_hi(phi_), hi(hi_) {
        if (!(lo < plateau_lo && plateau_lo <= plateau_hi && plateau_hi < hi))
            throw std::invalid_argument("Plateau: intervals out of order");
    }

    double operator()(double s) const {
        if (s <= lo || s >= hi) return 0.0;
        if (s < plateau_lo) return smooth_step((s - lo) / (plateau_lo - lo));
        if (s > plateau_hi) return smooth_step((hi - s) / (hi - plateau_hi));
        return 1.0;
    }
};

// One-sided smooth ramp: 0 for s <= lo, 1 for s >= hi.
struct Ramp {
    double lo, hi;
    Ramp(double lo_, double hi_) : lo(lo_), hi(hi_) {
        if (!(lo < hi)) throw std::invalid_argument("Ramp: lo >= hi");
    }
    double operator()(double s) const { return smooth_step((s - lo) / (hi - lo)); }
};

// Compactly supported bump on (lo, hi) with closed-form first and second
// derivatives; value 1 at the midpoint.  b(y) = exp(1 - 1/(1-y^2)) in the
// normalized coordinate y in (-1, 1).
struct Bump {
    double lo, hi;
    Bump(double lo_, double hi_) : lo(lo_), hi(hi_) {
        if (!(lo < hi)) throw std::invalid_argument("Bump: lo >= hi");
    }

    double center() const { return 0.5 * (lo + hi); }
    double halfwidth() const { return 0.5 * (hi - lo); }

    double value(double r) const {
        const double y = (r - center()) / halfwidth();
        if (std::abs(y) >= 1.0) return 0.0;
        return std::exp(1.0 - 1.0 / (1.0 - y * y));
    }

    double deriv(double r) const {
        const double h = halfwidth();
        const double y = (r - center()) / h;
        if (std::abs(y) >= 1.0) return 0.0;
        const double q = 1.0 - y * y;
        return value(r) * (-2.0 * y / (q * q)) / h;
    }

    double deriv2(double r) const {
        const double h = halfwidth();
        const double y = (r - center()) / h;
        if (std::abs(y) >= 1.0) return 0.0;
        const double q = 1.0 - y * y;
        const double g = -2.0 * y / (q * q);                  // d/dy log b
        const double gp = (-2.0 * q - 8.0 * y * y) / (q * q * q); // g'
        return value(r) * (g * g + gp) / (h * h);
    }

    double operator()(double r) const { return value(r); }
};

} // namespace cosmon
