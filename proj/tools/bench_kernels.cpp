// Timing comparison of the serial reference kernels against the OpenMP
// versions at a few grid sizes.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "aclab/kernels.hpp"

using namespace aclab;

namespace {

double wall() {
    using clk = std::chrono::steady_clock;
    static const clk::time_point t0 = clk::now();
    return std::chrono::duration<double>(clk::now() - t0).count();
}

template <typename F>
double time_best_of(int reps, F&& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        double t0 = wall();
        fn();
        best = std::min(best, wall() - t0);
    }
    return best;
}

} // namespace

int main() {
    threads::configure_from_env();
    std::printf("threads: %d\n", threads::threads());
    std::printf("%-22s %8s %12s %12s %8s\n", "kernel", "n", "serial[s]", "omp[s]", "speedup");

    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);

    for (std::size_t side : {256, 512, 1024}) {
        const std::size_t n = side * side;
        kern::Grid g{side, side, 1.0 / double(side), 1.0 / double(side), false};
        std::vector<double> u(n), wp(n), out(n), v(n);
        for (std::size_t i = 0; i < n; ++i) {
            u[i] = unif(rng);
            wp[i] = u[i] * u[i] * u[i] - u[i];
            v[i] = unif(rng);
        }
        const double eps = 0.05;
        const int reps = 5;

        double ts = time_best_of(reps, [&] {
            kern::serial::ac_residual_interior(g, eps, u.data(), wp.data(), out.data());
        });
        double tp = time_best_of(reps, [&] {
            kern::par::ac_residual_interior(g, eps, u.data(), wp.data(), out.data());
        });
        std::printf("%-22s %8zu %12.6f %12.6f %8.2f\n", "ac_residual_interior", n, ts, tp,
                    ts / tp);

        ts = time_best_of(reps, [&] {
            kern::serial::apply_window_operator(side, side, g.hx, g.hy, eps, 0.0, wp.data(),
                                                v.data(), out.data());
        });
        tp = time_best_of(reps, [&] {
            kern::par::apply_window_operator(side, side, g.hx, g.hy, eps, 0.0, wp.data(),
                                             v.data(), out.data());
        });
        std::printf("%-22s %8zu %12.6f %12.6f %8.2f\n", "apply_window_operator", n, ts, tp,
                    ts / tp);

        ts = time_best_of(reps, [&] {
            kern::serial::euler_step_interior(g, eps, 1e-6, u.data(), wp.data(), out.data());
        });
        tp = time_best_of(reps, [&] {
            kern::par::euler_step_interior(g, eps, 1e-6, u.data(), wp.data(), out.data());
        });
        std::printf("%-22s %8zu %12.6f %12.6f %8.2f\n", "euler_step_interior", n, ts, tp,
                    ts / tp);

        volatile double sink = 0.0;
        ts = time_best_of(reps, [&] { sink = kern::serial::dot(u.data(), v.data(), n); });
        tp = time_best_of(reps, [&] { sink = kern::par::dot(u.data(), v.data(), n); });
        std::printf("%-22s %8zu %12.6f %12.6f %8.2f\n", "dot", n, ts, tp, ts / tp);

        std::vector<double> wv(n);
        for (std::size_t i = 0; i < n; ++i) wv[i] = 0.25 * (1 - u[i] * u[i]) * (1 - u[i] * u[i]);
        ts = time_best_of(reps, [&] {
            sink = kern::serial::energy_cells(g, eps, u.data(), wv.data(), 0, side - 1, 0,
                                              side - 1);
        });
        tp = time_best_of(reps, [&] {
            sink = kern::par::energy_cells(g, eps, u.data(), wv.data(), 0, side - 1, 0,
                                           side - 1);
        });
        std::printf("%-22s %8zu %12.6f %12.6f %8.2f\n", "energy_cells", n, ts, tp, ts / tp);
        (void)sink;
    }
    return 0;
}
