// Benchmark: OpenMP kernels against their serial reference implementations.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "cosmon/cutoffs.hpp"
#include "cosmon/fft.hpp"
#include "cosmon/parallel.hpp"
#include "cosmon/rays.hpp"
#include "cosmon/rng.hpp"
#include "cosmon/runner.hpp"
#include "cosmon/solver.hpp"
#include "cosmon/wavefront.hpp"

using namespace cosmon;

namespace {

double seconds(std::chrono::steady_clock::time_point a, std::chrono::steady_clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

template <typename F>
double time_it(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return seconds(t0, std::chrono::steady_clock::now());
}

} // namespace

int main(int argc, char** argv) {
    int threads = 0;
    if (argc > 1) threads = std::atoi(argv[1]);
    if (threads > 0) set_threads(threads);

    std::printf("%-26s %12s %12s %8s\n", "kernel", "serial [s]", "parallel [s]", "speedup");

    // ray batch
    {
        const BackgroundParams bg(1.0);
        SplitMix64 rng(42);
        std::vector<PhasePoint> seeds;
        for (int i = 0; i < 256; ++i) {
            const double r0 = rng.uniform(1.0, 5.0);
            const double lam = rng.next_sign() * rng.uniform(0.5, 2.0);
            const double xi = rng.next_sign() * std::abs(lam) *
                              std::sqrt(r0 * r0 - 1.0) / r0;
            seeds.push_back({0.0, r0, 0.0, lam, xi, 0.0});
        }
        std::vector<double> s_values;
        for (int i = -100; i <= 100; ++i) s_values.push_back(0.1 * i);
        double ts = 0, tp = 0;
        ts = time_it([&] { rays::integrate_batch_serial(bg, seeds, s_values); });
        tp = time_it([&] { rays::integrate_batch(bg, seeds, s_values); });
        std::printf("%-26s %12.3f %12.3f %8.2f\n", "ray batch (256 rays)", ts, tp, ts / tp);
    }

    // forward solve
    {
        runner::RunConfig cfg; // defaults
        cfg.grid.n_t = 128;
        cfg.grid.n_r = 256;
        const solver::AbsorberSpec spec(cfg.bg, cfg.absorber_R, cfg.r0_source);
        SpacetimeField f = cfg.grid.make_field();
        const Bump bt(7.0, 9.0), br(1.6, 2.4);
        for (std::size_t it = 0; it < f.n_t; ++it)
            for (std::size_t j = 0; j < f.n_r(); ++j)
                f.at(it, j) = bt(f.t(it)) * br(f.r[j]);
        double ts = 0, tp = 0;
        ts = time_it([&] { solver::solve_forward_serial(spec, cfg.grid, f); });
        tp = time_it([&] { solver::solve_forward(spec, cfg.grid, f); });
        std::printf("%-26s %12.3f %12.3f %8.2f\n", "forward solve (128x256)", ts, tp, ts / tp);
    }

    // phase-energy map
    {
        SpacetimeField u =
            SpacetimeField::zeros(32.0, 256, SpacetimeField::staggered_grid(6.0, 256));
        for (std::size_t it = 0; it < u.n_t; ++it)
            for (std::size_t j = 0; j < u.n_r(); ++j)
                u.at(it, j) = std::sin(3.0 * u.t(it)) * std::exp(-u.r[j]);
        wavefront::WindowSpec w;
        w.sigma_t = 0.8;
        w.sigma_r = 0.3;
        w.stride_t = 8;
        w.stride_r = 8;
        double ts = 0, tp = 0;
        ts = time_it([&] { wavefront::phase_energy_serial(u, w); });
        tp = time_it([&] { wavefront::phase_energy(u, w); });
        std::printf("%-26s %12.3f %12.3f %8.2f\n", "phase energy (256x256)", ts, tp, ts / tp);
    }

    // FFT against the naive DFT reference
    {
        SplitMix64 rng(7);
        std::vector<cplx> x(4096);
        for (auto& v : x) v = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
        double ts = 0, tp = 0;
        ts = time_it([&] { dft_naive(x); });
        tp = time_it([&] {
            for (int rep = 0; rep < 100; ++rep) {
                auto y = x;
                fft(y);
            }
        });
        std::printf("%-26s %12.3f %12.3f %8.2f\n", "dft vs 100x fft (n=4096)", ts, tp, ts / tp);
    }
    return 0;
}
