#ifndef ACLAB_FIELD_HPP
#define ACLAB_FIELD_HPP

#include <functional>
#include <string>
#include <vector>

#include "aclab/kernels.hpp"
#include "aclab/potential.hpp"

namespace aclab {

/// Node-index window [i0,i1) x [j0,j1).
struct Window {
    std::size_t i0 = 0, i1 = 0, j0 = 0, j1 = 0;
    std::size_t width() const { return i1 - i0; }
    std::size_t height() const { return j1 - j0; }
};

struct Rect {
    double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
};

/// Gridded solution of eps*Lap(u) = W'(u)/eps on a box, nodes at
/// (x0 + i hx, y0 + j hy), values row-major with j (the y index) major.
/// Boundary: Dirichlet per edge, or periodic in x with Dirichlet top/bottom.
struct ScalarField2D {
    std::size_t nx = 0, ny = 0;
    double hx = 0, hy = 0;
    double x0 = 0, y0 = 0;
    double epsilon = 0;
    bool periodic_x = false;
    std::vector<double> u;
    // Dirichlet data; bottom/top sized nx, left/right sized ny (unused when
    // periodic_x).
    std::vector<double> bottom, top, left, right;

    double& at(std::size_t i, std::size_t j) { return u[j * nx + i]; }
    double at(std::size_t i, std::size_t j) const { return u[j * nx + i]; }
    double x_of(std::size_t i) const { return x0 + double(i) * hx; }
    double y_of(std::size_t j) const { return y0 + double(j) * hy; }
    kern::Grid grid() const { return {nx, ny, hx, hy, periodic_x}; }

    /// Bilinear interpolation (x-wrap when periodic).
    double interp(double x, double y) const;
    /// Snaps a rectangle (domain units) to the enclosed node window.
    Window window_of(const Rect& r) const;
    /// Inner window excluding a margin of the given width on every side.
    Window inner_window(double margin) const;

    /// Writes Dirichlet data into the boundary nodes.
    void impose_boundary();
};

/// Uniform field with the given boundary data functions sampled on edges.
ScalarField2D make_field(std::size_t nx, std::size_t ny, double hx, double hy,
                         double x0, double y0, double epsilon, bool periodic_x,
                         const std::function<double(double, double)>& init);

/// eps*Lap5(u) - W'(u)/eps at interior nodes; boundary entries carry the
/// boundary-condition defect (u - data; zero for periodic seams).
std::vector<double> ac_residual(const ScalarField2D& f, const Potential& p);

/// Max-norm of the residual vector.
double residual_norm(const ScalarField2D& f, const Potential& p);

struct SolveReport {
    int iterations = 0;
    double final_residual = 0.0;
    bool converged = false;
    std::vector<double> damping_history;
};

/// Damped Newton with linearization eps*Lap - W''(u)/eps. Inner solves use
/// Jacobi-preconditioned CG; if CG meets nonpositive curvature the system is
/// re-solved with a Gershgorin shift (modified Newton step). Steps that fail
/// to reduce the residual fall back to explicit gradient-flow sweeps.
/// Non-convergence is reported, not thrown.
SolveReport solve_newton(ScalarField2D& f, const Potential& p, double tol, int max_iter);

/// Largest explicit-Euler step accepted by gradient_flow:
/// h^2 eps / (4 eps^2 + h^2 max W'') / 2 with h = min(hx, hy).
double gradient_flow_dt_bound(const ScalarField2D& f, const Potential& p);

/// Explicit Euler steps of u_t = eps*Lap(u) - W'(u)/eps. Rejects dt above
/// the stability bound. The discrete energy is nonincreasing along steps.
void gradient_flow(ScalarField2D& f, const Potential& p, double dt, int steps);

/// Midpoint-rule integral of eps|grad u|^2/2 + W(u)/eps over the region.
double energy(const ScalarField2D& f, const Potential& p, const Rect& region);

/// Discrete energy over the whole box (edge-based gradient terms); exact
/// Lyapunov functional of gradient_flow.
double discrete_energy(const ScalarField2D& f, const Potential& p);

/// Minimum over interior nodes of the scaled Modica quantity
///   P = W(u)/eps - (eps/2) |grad u|^2,
/// with |grad u|^2 discretized per direction as (D+ u)(D- u); this product
/// form keeps P >= 0 up to O(h^4) for discrete steady states (plain central
/// squares lose two orders). P = 0 identically on 1D profiles.
double modica_deficit(const ScalarField2D& f, const Potential& p);

/// Minimum over interior nodes of P + 10 * est, where est is the pointwise
/// discretization estimate of the gradient-product error built from second
/// and third differences. Nonnegative (up to roundoff) for converged steady
/// states; the sharper raw bound holds only for 1D-structured states.
double modica_deficit_beyond_estimate(const ScalarField2D& f, const Potential& p);

/// |LHS - RHS| of the Pohozaev identity on the disc B_r(center), scaled as
/// int_{B_r} 2 W(u) = r * int_{bdry} [eps^2 |grad u|^2/2 + W(u) - eps^2 u_r^2].
/// Boundary integral by arc-length midpoint rule with bilinear sampling.
double pohozaev_residual(const ScalarField2D& f, const Potential& p, double r,
                         double cx, double cy);

/// Binary snapshot: magic "ACF1", int64 nx, ny, double hx, hy, epsilon
/// (little-endian), then row-major values.
void save_field(const ScalarField2D& f, const std::string& path);
ScalarField2D load_field(const std::string& path, double x0 = 0.0, double y0 = 0.0);

/// CSV export: x,y,u rows.
void save_field_csv(const ScalarField2D& f, const std::string& path);

} // namespace aclab

#endif
