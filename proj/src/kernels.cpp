#include "aclab/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <omp.h>

namespace aclab::threads {

namespace {
int g_threads = 0;
}

void configure_from_env() {
    const char* env = std::getenv("ACLAB_THREADS");
    if (env) {
        int n = std::atoi(env);
        if (n > 0) { set_threads(n); return; }
    }
    g_threads = omp_get_max_threads();
}

void set_threads(int n) {
    g_threads = n > 0 ? n : 1;
    omp_set_num_threads(g_threads);
}

int threads() {
    if (g_threads == 0) configure_from_env();
    return g_threads;
}

} // namespace aclab::threads

namespace aclab::kern {

// ---------------------------------------------------------------- serial

namespace serial {

void ac_residual_interior(const Grid& g, double eps, const double* u,
                          const double* wp_of_u, double* out) {
    const std::size_t nx = g.nx, ny = g.ny;
    const double cx = eps / (g.hx * g.hx), cy = eps / (g.hy * g.hy);
    for (std::size_t j = 1; j + 1 < ny; ++j) {
        const std::size_t row = j * nx;
        std::size_t i0 = g.periodic_x ? 0 : 1;
        std::size_t i1 = g.periodic_x ? nx : nx - 1;
        for (std::size_t i = i0; i < i1; ++i) {
            std::size_t im = i == 0 ? nx - 1 : i - 1;
            std::size_t ip = i + 1 == nx ? 0 : i + 1;
            double lap = cx * (u[row + im] - 2.0 * u[row + i] + u[row + ip]) +
                         cy * (u[row - nx + i] - 2.0 * u[row + i] + u[row + nx + i]);
            out[row + i] = lap - wp_of_u[row + i] / eps;
        }
    }
}

void apply_window_operator(std::size_t wx, std::size_t wy, double hx, double hy,
                           double eps, double shift, const double* wpp,
                           const double* v, double* out) {
    const double cx = eps / (hx * hx), cy = eps / (hy * hy);
    const double diag = 2.0 * cx + 2.0 * cy;
    for (std::size_t j = 0; j < wy; ++j) {
        const std::size_t row = j * wx;
        for (std::size_t i = 0; i < wx; ++i) {
            double s = (diag + wpp[row + i] / eps + shift) * v[row + i];
            if (i > 0) s -= cx * v[row + i - 1];
            if (i + 1 < wx) s -= cx * v[row + i + 1];
            if (j > 0) s -= cy * v[row - wx + i];
            if (j + 1 < wy) s -= cy * v[row + wx + i];
            out[row + i] = s;
        }
    }
}

void euler_step_interior(const Grid& g, double eps, double dt, const double* u_old,
                         const double* wp_of_u, double* u) {
    const std::size_t nx = g.nx, ny = g.ny;
    const double cx = eps / (g.hx * g.hx), cy = eps / (g.hy * g.hy);
    for (std::size_t j = 1; j + 1 < ny; ++j) {
        const std::size_t row = j * nx;
        std::size_t i0 = g.periodic_x ? 0 : 1;
        std::size_t i1 = g.periodic_x ? nx : nx - 1;
        for (std::size_t i = i0; i < i1; ++i) {
            std::size_t im = i == 0 ? nx - 1 : i - 1;
            std::size_t ip = i + 1 == nx ? 0 : i + 1;
            double lap = cx * (u_old[row + im] - 2.0 * u_old[row + i] + u_old[row + ip]) +
                         cy * (u_old[row - nx + i] - 2.0 * u_old[row + i] + u_old[row + nx + i]);
            u[row + i] = u_old[row + i] + dt * (lap - wp_of_u[row + i] / eps);
        }
    }
}

double dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale(double alpha, double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

double energy_cells(const Grid& g, double eps, const double* u, const double* w_of_u,
                    std::size_t i0, std::size_t i1, std::size_t j0, std::size_t j1) {
    const std::size_t nx = g.nx;
    double sum = 0.0;
    for (std::size_t j = j0; j < j1; ++j) {
        const std::size_t row = j * nx;
        for (std::size_t i = i0; i < i1; ++i) {
            std::size_t ip = i + 1 == nx ? 0 : i + 1;
            double ux = 0.5 * ((u[row + ip] - u[row + i]) + (u[row + nx + ip] - u[row + nx + i])) / g.hx;
            double uy = 0.5 * ((u[row + nx + i] - u[row + i]) + (u[row + nx + ip] - u[row + ip])) / g.hy;
            double wmid = 0.25 * (w_of_u[row + i] + w_of_u[row + ip] + w_of_u[row + nx + i] +
                                  w_of_u[row + nx + ip]);
            sum += (0.5 * eps * (ux * ux + uy * uy) + wmid / eps) * g.hx * g.hy;
        }
    }
    return sum;
}

} // namespace serial

// ------------------------------------------------------------------ omp

namespace par {

void ac_residual_interior(const Grid& g, double eps, const double* u,
                          const double* wp_of_u, double* out) {
    const std::size_t nx = g.nx, ny = g.ny;
    const double cx = eps / (g.hx * g.hx), cy = eps / (g.hy * g.hy);
    const std::ptrdiff_t jend = std::ptrdiff_t(ny) - 1;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 1; j < jend; ++j) {
        const std::size_t row = std::size_t(j) * nx;
        std::size_t i0 = g.periodic_x ? 0 : 1;
        std::size_t i1 = g.periodic_x ? nx : nx - 1;
        for (std::size_t i = i0; i < i1; ++i) {
            std::size_t im = i == 0 ? nx - 1 : i - 1;
            std::size_t ip = i + 1 == nx ? 0 : i + 1;
            double lap = cx * (u[row + im] - 2.0 * u[row + i] + u[row + ip]) +
                         cy * (u[row - nx + i] - 2.0 * u[row + i] + u[row + nx + i]);
            out[row + i] = lap - wp_of_u[row + i] / eps;
        }
    }
}

void apply_window_operator(std::size_t wx, std::size_t wy, double hx, double hy,
                           double eps, double shift, const double* wpp,
                           const double* v, double* out) {
    const double cx = eps / (hx * hx), cy = eps / (hy * hy);
    const double diag = 2.0 * cx + 2.0 * cy;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < std::ptrdiff_t(wy); ++j) {
        const std::size_t row = std::size_t(j) * wx;
        for (std::size_t i = 0; i < wx; ++i) {
            double s = (diag + wpp[row + i] / eps + shift) * v[row + i];
            if (i > 0) s -= cx * v[row + i - 1];
            if (i + 1 < wx) s -= cx * v[row + i + 1];
            if (j > 0) s -= cy * v[row - wx + i];
            if (std::size_t(j) + 1 < wy) s -= cy * v[row + wx + i];
            out[row + i] = s;
        }
    }
}

void euler_step_interior(const Grid& g, double eps, double dt, const double* u_old,
                         const double* wp_of_u, double* u) {
    const std::size_t nx = g.nx, ny = g.ny;
    const double cx = eps / (g.hx * g.hx), cy = eps / (g.hy * g.hy);
    const std::ptrdiff_t jend = std::ptrdiff_t(ny) - 1;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 1; j < jend; ++j) {
        const std::size_t row = std::size_t(j) * nx;
        std::size_t i0 = g.periodic_x ? 0 : 1;
        std::size_t i1 = g.periodic_x ? nx : nx - 1;
        for (std::size_t i = i0; i < i1; ++i) {
            std::size_t im = i == 0 ? nx - 1 : i - 1;
            std::size_t ip = i + 1 == nx ? 0 : i + 1;
            double lap = cx * (u_old[row + im] - 2.0 * u_old[row + i] + u_old[row + ip]) +
                         cy * (u_old[row - nx + i] - 2.0 * u_old[row + i] + u_old[row + nx + i]);
            u[row + i] = u_old[row + i] + dt * (lap - wp_of_u[row + i] / eps);
        }
    }
}

double dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
#pragma omp parallel for reduction(+ : s) schedule(static)
    for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(n); ++i) s += a[i] * b[i];
    return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(n); ++i) y[i] += alpha * x[i];
}

void scale(double alpha, double* x, std::size_t n) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(n); ++i) x[i] *= alpha;
}

double energy_cells(const Grid& g, double eps, const double* u, const double* w_of_u,
                    std::size_t i0, std::size_t i1, std::size_t j0, std::size_t j1) {
    const std::size_t nx = g.nx;
    double sum = 0.0;
#pragma omp parallel for reduction(+ : sum) schedule(static)
    for (std::ptrdiff_t j = std::ptrdiff_t(j0); j < std::ptrdiff_t(j1); ++j) {
        const std::size_t row = std::size_t(j) * nx;
        for (std::size_t i = i0; i < i1; ++i) {
            std::size_t ip = i + 1 == nx ? 0 : i + 1;
            double ux = 0.5 * ((u[row + ip] - u[row + i]) + (u[row + nx + ip] - u[row + nx + i])) / g.hx;
            double uy = 0.5 * ((u[row + nx + i] - u[row + i]) + (u[row + nx + ip] - u[row + ip])) / g.hy;
            double wmid = 0.25 * (w_of_u[row + i] + w_of_u[row + ip] + w_of_u[row + nx + i] +
                                  w_of_u[row + nx + ip]);
            sum += (0.5 * eps * (ux * ux + uy * uy) + wmid / eps) * g.hx * g.hy;
        }
    }
    return sum;
}

} // namespace par

// ------------------------------------------------------------- dispatch

namespace {
inline bool go_parallel(std::size_t n) { return threads::threads() > 1 && n >= 4096; }
}

void ac_residual_interior(const Grid& g, double eps, const double* u,
                          const double* wp_of_u, double* out) {
    if (go_parallel(g.nx * g.ny)) par::ac_residual_interior(g, eps, u, wp_of_u, out);
    else serial::ac_residual_interior(g, eps, u, wp_of_u, out);
}

void apply_window_operator(std::size_t wx, std::size_t wy, double hx, double hy,
                           double eps, double shift, const double* wpp,
                           const double* v, double* out) {
    if (go_parallel(wx * wy)) par::apply_window_operator(wx, wy, hx, hy, eps, shift, wpp, v, out);
    else serial::apply_window_operator(wx, wy, hx, hy, eps, shift, wpp, v, out);
}

void euler_step_interior(const Grid& g, double eps, double dt, const double* u_old,
                         const double* wp_of_u, double* u) {
    if (go_parallel(g.nx * g.ny)) par::euler_step_interior(g, eps, dt, u_old, wp_of_u, u);
    else serial::euler_step_interior(g, eps, dt, u_old, wp_of_u, u);
}

double dot(const double* a, const double* b, std::size_t n) {
    return go_parallel(n) ? par::dot(a, b, n) : serial::dot(a, b, n);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    if (go_parallel(n)) par::axpy(alpha, x, y, n);
    else serial::axpy(alpha, x, y, n);
}

void scale(double alpha, double* x, std::size_t n) {
    if (go_parallel(n)) par::scale(alpha, x, n);
    else serial::scale(alpha, x, n);
}

double energy_cells(const Grid& g, double eps, const double* u, const double* w_of_u,
                    std::size_t i0, std::size_t i1, std::size_t j0, std::size_t j1) {
    return go_parallel((i1 - i0) * (j1 - j0))
               ? par::energy_cells(g, eps, u, w_of_u, i0, i1, j0, j1)
               : serial::energy_cells(g, eps, u, w_of_u, i0, i1, j0, j1);
}

} // namespace aclab::kern
