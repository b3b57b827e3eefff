#pragma once
#include <string>

namespace cosmon::specfun {

enum class Method { series, recurrence, asymptotic };

struct BesselEval {
    double order = 0.0;
    double argument = 0.0;
    double value = 0.0;
    Method method = Method::series;
    bool in_validated_box = true; // nu in [-1, 10], x in [0, 100]
};

// Gamma function with pole errors at 0, -1, -2, ...
double gamma_fn(double x);

// 1/Gamma, zero at the poles (safe for series coefficients).
double inv_gamma(double x);

// Bessel J of real order.  Power series below x = 12 (long double
// accumulation), Hankel asymptotic expansion for x >= 12 at small |nu| and
// forward/backward recurrence in the order from there.  Validated to
// relative 1e-12 on nu in [-1, 10], x in [0, 100].
BesselEval bessel_j_eval(double nu, double x);
double bessel_j(double nu, double x);

// x^(-nu) J_nu(x); analytic in x^2, value 1/(2^nu Gamma(nu+1)) at x = 0.
double scaled_bessel_j(double nu, double x);

// Modified Bessel I of real order (series in the validated box).
BesselEval bessel_i_eval(double nu, double x);
double bessel_i(double nu, double x);

// dJ_nu/dx = (J_{nu-1} - J_{nu+1}) / 2
double bessel_jp(double nu, double x);
// dI_nu/dx = (I_{nu-1} + I_{nu+1}) / 2
double bessel_ip(double nu, double x);

// Leading small-r coefficients of J_nu(kappa r):
//   J_nu(kappa r)      = f0 * r^nu     + O(r^(nu+2))
//   d/dr J_nu(kappa r) = f1 * r^(nu-1) + O(r^(nu+1)),  f1 = nu * f0.
double leading_f0(double nu, double kappa);
double leading_f1(double nu, double kappa);

} // namespace cosmon::specfun
