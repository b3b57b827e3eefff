#pragma once
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace cosmon {

struct StepFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Adaptive Dormand-Prince 5(4) embedded Runge-Kutta.  The error-per-step
// target is rtol relative to the state scale plus atol.  Steps are clipped so
// requested sample points are hit exactly; samples come back in request order.
template <std::size_t N>
class DormandPrince {
public:
    using State = std::array<double, N>;
    using Rhs = std::function<void(double s, const State& y, State& dy)>;

    DormandPrince(Rhs rhs, double rtol, double atol)
        : rhs_(std::move(rhs)), rtol_(rtol), atol_(atol) {}

    // Integrate from s0 through the (sorted, strictly monotone in the march
    // direction) sample points; y0 is the state at s0.  Returns states at the
    // samples.  An optional per-step observer sees every accepted step.
    std::vector<State> integrate(double s0, const State& y0,
                                 const std::vector<double>& samples,
                                 const std::function<void(double, const State&)>& observer = {}) const {
        std::vector<State> out;
        out.reserve(samples.size());
        if (samples.empty()) return out;

        const double dir = samples.back() >= s0 ? 1.0 : -1.0;
        State y = y0;
        double s = s0;
        double h = dir * initial_step(s0, y0);
        std::size_t next = 0;

        // emit samples that coincide with s0
        while (next < samples.size() && std::abs(samples[next] - s) <= 1e-14 * (1.0 + std::abs(s))) {
            out.push_back(y);
            ++next;
        }

        int consecutive_rejects = 0;
        while (next < samples.size()) {
            const double target = samples[next];
            if (dir * (target - s) <= 0.0)
                throw std::invalid_argument("DormandPrince: samples not monotone");
            if (dir * (s + h - target) > 0.0) h = target - s;

            State y_new, err;
            step(s, y, h, y_new, err);
            const double e = error_norm(y, y_new, err);
            if (e <= 1.0) {
                s += h;
                y = y_new;
                if (observer) observer(s, y);
                consecutive_rejects = 0;
                while (next < samples.size() &&
                       std::abs(samples[next] - s) <= 1e-12 * (1.0 + std::abs(s))) {
                    out.push_back(y);
                    ++next;
                }
            } else if (++consecutive_rejects > 60) {
                throw StepFailure("DormandPrince: tolerance unreachable (60 rejects)");
            }
            const double fac = 0.9 * std::pow(std::max(e, 1e-10), -0.2);
            h *= std::min(5.0, std::max(0.2, fac));
            if (std::abs(h) < 1e-15 * (1.0 + std::abs(s)))
                throw StepFailure("DormandPrince: step underflow");
        }
        return out;
    }

private:
    Rhs rhs_;
    double rtol_, atol_;

    double initial_step(double s0, const State& y0) const {
        State dy{};
        rhs_(s0, y0, dy);
        double ynorm = 0.0, dnorm = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            ynorm = std::max(ynorm, std::abs(y0[i]));
            dnorm = std::max(dnorm, std::abs(dy[i]));
        }
        const double scale = std::max(ynorm, 1.0);
        return dnorm > 0.0 ? 0.01 * scale / dnorm : 1e-3;
    }

    void step(double s, const State& y, double h, State& y_new, State& err) const {
        static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
        static constexpr double a21 = 1.0 / 5;
        static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                                a53 = 64448.0 / 6561, a54 = -212.0 / 729;
        static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                                a64 = 49.0 / 176, a65 = -5103.0 / 18656;
        static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                                b5 = -2187.0 / 6784, b6 = 11.0 / 84;
        static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                                e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

        State k1{}, k2{}, k3{}, k4{}, k5{}, k6{}, k7{}, t{};
        rhs_(s, y, k1);
        for (std::size_t i = 0; i < N; ++i) t[i] = y[i] + h * a21 * k1[i];
        rhs_(s + c2 * h, t, k2);
        for (std::size_t i = 0; i < N; ++i) t[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs_(s + c3 * h, t, k3);
        for (std::size_t i = 0; i < N; ++i)
            t[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs_(s + c4 * h, t, k4);
        for (std::size_t i = 0; i < N; ++i)
            t[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs_(s + c5 * h, t, k5);
        for (std::size_t i = 0; i < N; ++i)
            t[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        rhs_(s + h, t, k6);
        for (std::size_t i = 0; i < N; ++i)
            y_new[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        rhs_(s + h, y_new, k7);
        for (std::size_t i = 0; i < N; ++i)
            err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    }

    double error_norm(const State& y0, const State& y1, const State& err) const {
        double e = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = atol_ + rtol_ * std::max(std::abs(y0[i]), std::abs(y1[i]));
            e = std::max(e, std::abs(err[i]) / sc);
        }
        return e;
    }
};

} // namespace cosmon
