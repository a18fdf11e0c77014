#ifndef ACLAB_KERNELS_HPP
#define ACLAB_KERNELS_HPP

#include <cstddef>

// Data-parallel inner loops used by the field and spectrum modules.
// Every kernel has a serial reference implementation (kern::serial) and an
// OpenMP version (kern::par); the unqualified entry points dispatch on the
// configured thread count. Stencil kernels write disjoint outputs and are
// bitwise identical in both variants; reductions (dot, energy sums) are
// bitwise reproducible only at a fixed thread count of one and
// tolerance-identical otherwise.

namespace aclab::threads {

/// Reads ACLAB_THREADS (if set) and caps omp_get_max_threads accordingly.
void configure_from_env();
void set_threads(int n);
int threads();

} // namespace aclab::threads

namespace aclab::kern {

struct Grid {
    std::size_t nx = 0, ny = 0;
    double hx = 0.0, hy = 0.0;
    bool periodic_x = false;
};

namespace serial {

/// out = eps * Lap5(u) - wp_of_u / eps at interior nodes; boundary rows are
/// left untouched. wp_of_u holds W'(u_ij) pre-evaluated.
void ac_residual_interior(const Grid& g, double eps, const double* u,
                          const double* wp_of_u, double* out);

/// Dirichlet-zero window operator: out = -eps * Lap5(v) + (wpp/eps + shift) v
/// on a wx-by-wy block (v indexed row-major within the window).
void apply_window_operator(std::size_t wx, std::size_t wy, double hx, double hy,
                           double eps, double shift, const double* wpp,
                           const double* v, double* out);

/// u += dt * (eps * Lap5(u_old) - wp/eps) at interior nodes, from a snapshot.
void euler_step_interior(const Grid& g, double eps, double dt, const double* u_old,
                         const double* wp_of_u, double* u);

double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale(double alpha, double* x, std::size_t n);

/// Sum of the scaled energy density eps|grad u|^2/2 + W(u)/eps over the cell
/// midpoints of [i0,i1) x [j0,j1) (cell index ranges); w_of_u holds W(u).
double energy_cells(const Grid& g, double eps, const double* u, const double* w_of_u,
                    std::size_t i0, std::size_t i1, std::size_t j0, std::size_t j1);

} // namespace serial

namespace par {
void ac_residual_interior(const Grid& g, double eps, const double* u,
                          const double* wp_of_u, double* out);
void apply_window_operator(std::size_t wx, std::size_t wy, double hx, double hy,
                           double eps, double shift, const double* wpp,
                           const double* v, double* out);
void euler_step_interior(const Grid& g, double eps, double dt, const double* u_old,
                         const double* wp_of_u, double* u);
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale(double alpha, double* x, std::size_t n);
double energy_cells(const Grid& g, double eps, const double* u, const double* w_of_u,
                    std::size_t i0, std::size_t i1, std::size_t j0, std::size_t j1);
} // namespace par

void ac_residual_interior(const Grid& g, double eps, const double* u,
                          const double* wp_of_u, double* out);
void apply_window_operator(std::size_t wx, std::size_t wy, double hx, double hy,
                           double eps, double shift, const double* wpp,
                           const double* v, double* out);
void euler_step_interior(const Grid& g, double eps, double dt, const double* u_old,
                         const double* wp_of_u, double* u);
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale(double alpha, double* x, std::size_t n);
double energy_cells(const Grid& g, double eps, const double* u, const double* w_of_u,
                    std::size_t i0, std::size_t i1, std::size_t j0, std::size_t j1);

} // namespace aclab::kern

#endif
