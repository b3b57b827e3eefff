#include "cosmon/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cosmon::specfun {

namespace {

constexpr double kSeriesSwitch = 12.0; // x below this: power series (long double)

bool is_integer(double x) { return x == std::floor(x); }

// 1/Gamma in long double, zero at poles, reflection for the left half line.
long double inv_gamma_l(long double y) {
    if (y > 0.5L) {
        if (y > 1700.0L) return expl(-lgammal(y));
        return 1.0L / tgammal(y);
    }
    // 1/Gamma(y) = sin(pi y) Gamma(1 - y) / pi
    return sinl(static_cast<long double>(M_PI) * y) * tgammal(1.0L - y) /
           static_cast<long double>(M_PI);
}

// J series: sum_j (-1)^j / (j! Gamma(nu+j+1)) (x/2)^(2j+nu); sign=+1 gives I.
long double bessel_series_l(long double nu, long double x, int sign) {
    const long double h = 0.5L * x;
    const long double h2 = h * h;
    long double term = inv_gamma_l(nu + 1.0L); // j = 0 coefficient (no power yet)
    long double sum = term;
    // accumulate sum_j c_j with c_j = (+-1)^j h^(2j) / (j! Gamma(nu+j+1))
    long double c = term;
    for (int j = 1; j < 400; ++j) {
        // c_j / c_{j-1} = sign * h^2 / (j (nu + j)) away from Gamma poles
        const long double denom = static_cast<long double>(j) * (nu + j);
        if (denom != 0.0L && inv_gamma_l(nu + j) != 0.0L) {
            c *= sign * h2 / denom;
        } else {
            // crossed a Gamma pole (negative integer order path): restart term
            c = (sign > 0 ? 1.0L : ((j % 2) ? -1.0L : 1.0L)) * powl(h, 2.0L * j) *
                inv_gamma_l(nu + j + 1.0L);
            long double jf = 1.0L;
            for (int i = 2; i <= j; ++i) jf *= i;
            c /= jf;
        }
        sum += c;
        if (fabsl(c) < 1e-24L * fabsl(sum) && j > 4) break;
    }
    return sum * powl(h, nu);
}

// Hankel asymptotic expansion, valid for x >> nu^2; used for x >= 12, |nu| <= 2.
long double bessel_j_asym_l(long double nu, long double x) {
    const long double mu = 4.0L * nu * nu;
    const long double ix8 = 1.0L / (8.0L * x);
    long double p = 1.0L, q = 0.0L;
    long double a = 1.0L; // a_k = prod (mu - (2m-1)^2) / (k! (8x)^k)
    long double prev = fabsl(a);
    for (int k = 1; k < 40; ++k) {
        const long double odd = 2.0L * k - 1.0L;
        a *= (mu - odd * odd) * ix8 / k;
        if (fabsl(a) > prev && k > 4) break; // divergence onset
        prev = fabsl(a);
        const int r4 = k % 4;
        if (r4 == 1) q += a;
        else if (r4 == 2) p -= a;
        else if (r4 == 3) q -= a;
        else p += a;
        if (fabsl(a) < 1e-22L) break;
    }
    const long double chi = x - (0.5L * nu + 0.25L) * static_cast<long double>(M_PI);
    return sqrtl(2.0L / (static_cast<long double>(M_PI) * x)) *
           (p * cosl(chi) - q * sinl(chi));
}

double bessel_j_large_x(double nu, double x, Method& method) {
    // reduce to |order| <= 1.5 where the asymptotic expansion is clean
    if (nu >= -1.5 && nu <= 1.5) {
        method = Method::asymptotic;
        return static_cast<double>(bessel_j_asym_l(nu, x));
    }
    if (nu < 0.0) {
        // downward steps from orders inside [-1.5, 1.5] (out-of-box path)
        method = Method::recurrence;
        double hi = bessel_j_large_x(nu + 2.0, x, method);
        double mid = bessel_j_large_x(nu + 1.0, x, method);
        method = Method::recurrence;
        return 2.0 * (nu + 1.0) / x * mid - hi;
    }
    const double nu0 = nu - std::floor(nu); // in [0, 1)
    method = Method::recurrence;
    if (nu <= x - 2.0) {
        // forward recurrence is stable below the turning point order ~ x
        long double jm = bessel_j_asym_l(nu0, x);
        long double jc = bessel_j_asym_l(nu0 + 1.0L, x);
        long double mu = nu0 + 1.0L;
        while (mu < nu - 0.5) {
            const long double jn = 2.0L * mu / x * jc - jm;
            jm = jc;
            jc = jn;
            mu += 1.0L;
        }
        return static_cast<double>(jc);
    }
    // Miller backward recurrence normalized at the fractional order
    const int steps = static_cast<int>(nu - nu0) + 20 + static_cast<int>(x / 2.0);
    long double fp = 0.0L, fc = 1e-300L;
    long double target = 0.0L;
    long double mu = nu0 + steps;
    for (int i = steps; i >= 1; --i) {
        const long double fm = 2.0L * mu / x * fc - fp;
        fp = fc;
        fc = fm;
        mu -= 1.0L;
        if (std::abs(mu - nu) < 0.25) target = fc;
        if (fabsl(fc) > 1e280L) { // rescale
            fp /= 1e280L;
            fc /= 1e280L;
            target /= 1e280L;
        }
    }
    const long double ref = bessel_j_asym_l(nu0, x);
    return static_cast<double>(target * (ref / fc));
}

} // namespace

double gamma_fn(double x) {
    if (x <= 0.0 && is_integer(x))
        throw std::domain_error("gamma_fn: pole at nonpositive integer");
    return std::tgamma(x);
}

double inv_gamma(double x) {
    if (x <= 0.0 && is_integer(x)) return 0.0;
    return static_cast<double>(inv_gamma_l(static_cast<long double>(x)));
}

BesselEval bessel_j_eval(double nu, double x) {
    BesselEval ev;
    ev.order = nu;
    ev.argument = x;
    ev.in_validated_box = nu >= -1.0 && nu <= 10.0 && x >= 0.0 && x <= 100.0;
    if (x < 0.0) throw std::domain_error("bessel_j: x must be >= 0");

    if (x == 0.0) {
        if (nu == 0.0) { ev.value = 1.0; return ev; }
        if (nu > 0.0) { ev.value = 0.0; return ev; }
        if (is_integer(nu)) { ev.value = 0.0; return ev; }
        throw std::domain_error("bessel_j: x = 0 with negative non-integer order");
    }
    if (nu < 0.0 && is_integer(nu)) {
        // J_{-n} = (-1)^n J_n
        const double n = -nu;
        const BesselEval pos = bessel_j_eval(n, x);
        ev.value = (static_cast<long long>(n) % 2 ? -1.0 : 1.0) * pos.value;
        ev.method = pos.method;
        return ev;
    }
    if (x < kSeriesSwitch) {
        ev.method = Method::series;
        ev.value = static_cast<double>(bessel_series_l(nu, x, -1));
        return ev;
    }
    ev.value = bessel_j_large_x(nu, x, ev.method);
    return ev;
}

double bessel_j(double nu, double x) { return bessel_j_eval(nu, x).value; }

double scaled_bessel_j(double nu, double x) {
    if (nu < 0.0 && is_integer(nu))
        throw std::domain_error("scaled_bessel_j: Gamma pole at negative integer order");
    if (x < 0.0) throw std::domain_error("scaled_bessel_j: x must be >= 0");
    if (x < kSeriesSwitch) {
        // series for x^(-nu) J_nu(x), analytic in x^2
        const long double h2 = 0.25L * static_cast<long double>(x) * x;
        long double c = inv_gamma_l(nu + 1.0L);
        long double sum = c;
        for (int j = 1; j < 200; ++j) {
            c *= -h2 / (static_cast<long double>(j) * (nu + j));
            sum += c;
            if (fabsl(c) < 1e-24L * fabsl(sum) && j > 3) break;
        }
        return static_cast<double>(sum * powl(0.5L, static_cast<long double>(nu)));
    }
    return bessel_j(nu, x) * std::pow(x, -nu);
}

BesselEval bessel_i_eval(double nu, double x) {
    BesselEval ev;
    ev.order = nu;
    ev.argument = x;
    ev.in_validated_box = nu >= -1.0 && nu <= 10.0 && x >= 0.0 && x <= 100.0;
    if (x < 0.0) throw std::domain_error("bessel_i: x must be >= 0");
    if (x == 0.0) {
        if (nu == 0.0) { ev.value = 1.0; return ev; }
        if (nu > 0.0) { ev.value = 0.0; return ev; }
        if (is_integer(nu)) { ev.value = 0.0; return ev; }
        throw std::domain_error("bessel_i: x = 0 with negative non-integer order");
    }
    if (nu < 0.0 && is_integer(nu)) {
        const BesselEval pos = bessel_i_eval(-nu, x); // I_{-n} = I_n
        ev.value = pos.value;
        ev.method = pos.method;
        return ev;
    }
    if (x <= 300.0) {
        ev.method = Method::series; // positive terms, no cancellation
        ev.value = static_cast<double>(bessel_series_l(nu, x, +1));
        return ev;
    }
    // large-argument expansion, out of the validated box
    ev.method = Method::asymptotic;
    const long double mu = 4.0L * nu * nu;
    const long double ix8 = 1.0L / (8.0L * static_cast<long double>(x));
    long double a = 1.0L, sum = 1.0L, prev = 1.0L;
    for (int k = 1; k < 40; ++k) {
        const long double odd = 2.0L * k - 1.0L;
        a *= -(mu - odd * odd) * ix8 / k;
        if (fabsl(a) > prev && k > 3) break;
        prev = fabsl(a);
        sum += a;
        if (fabsl(a) < 1e-22L) break;
    }
    ev.value = static_cast<double>(expl(static_cast<long double>(x)) * sum /
                                   sqrtl(2.0L * static_cast<long double>(M_PI) * x));
    return ev;
}

double bessel_i(double nu, double x) { return bessel_i_eval(nu, x).value; }

double bessel_jp(double nu, double x) {
    return 0.5 * (bessel_j(nu - 1.0, x) - bessel_j(nu + 1.0, x));
}

double bessel_ip(double nu, double x) {
    return 0.5 * (bessel_i(nu - 1.0, x) + bessel_i(nu + 1.0, x));
}

double leading_f0(double nu, double kappa) {
    if (!(kappa > 0.0)) throw std::domain_error("leading_f0: kappa must be > 0");
    return std::pow(0.5 * kappa, nu) * inv_gamma(nu + 1.0);
}

double leading_f1(double nu, double kappa) { return nu * leading_f0(nu, kappa); }

} // namespace cosmon::specfun
