#include "aclab/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "aclab/linalg.hpp"

namespace aclab {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double ScalarField2D::interp(double x, double y) const {
    double fx = (x - x0) / hx, fy = (y - y0) / hy;
    if (periodic_x) {
        double span = double(nx);
        fx = std::fmod(fx, span);
        if (fx < 0) fx += span;
    } else {
        fx = std::clamp(fx, 0.0, double(nx - 1));
    }
    fy = std::clamp(fy, 0.0, double(ny - 1));
    std::size_t i = std::min(std::size_t(fx), periodic_x ? nx - 1 : nx - 2);
    std::size_t j = std::min(std::size_t(fy), ny - 2);
    double wx = fx - double(i), wy = fy - double(j);
    std::size_t ip = i + 1 == nx ? 0 : i + 1;
    double v00 = at(i, j), v10 = at(ip, j), v01 = at(i, j + 1), v11 = at(ip, j + 1);
    return (1 - wx) * (1 - wy) * v00 + wx * (1 - wy) * v10 + (1 - wx) * wy * v01 +
           wx * wy * v11;
}

Window ScalarField2D::window_of(const Rect& r) const {
    Window w;
    w.i0 = std::size_t(std::max(0.0, std::ceil((r.x0 - x0) / hx - 1e-12)));
    w.i1 = std::min(nx, std::size_t(std::max(0.0, std::floor((r.x1 - x0) / hx + 1e-12))) + 1);
    w.j0 = std::size_t(std::max(0.0, std::ceil((r.y0 - y0) / hy - 1e-12)));
    w.j1 = std::min(ny, std::size_t(std::max(0.0, std::floor((r.y1 - y0) / hy + 1e-12))) + 1);
    return w;
}

Window ScalarField2D::inner_window(double margin) const {
    Rect r{x0 + margin, x0 + double(nx - 1) * hx - margin, y0 + margin,
           y0 + double(ny - 1) * hy - margin};
    return window_of(r);
}

void ScalarField2D::impose_boundary() {
    for (std::size_t i = 0; i < nx; ++i) {
        at(i, 0) = bottom[i];
        at(i, ny - 1) = top[i];
    }
    if (!periodic_x)
        for (std::size_t j = 0; j < ny; ++j) {
            at(0, j) = left[j];
            at(nx - 1, j) = right[j];
        }
}

ScalarField2D make_field(std::size_t nx, std::size_t ny, double hx, double hy,
                         double x0, double y0, double epsilon, bool periodic_x,
                         const std::function<double(double, double)>& init) {
    if (nx < 3 || ny < 3) throw std::invalid_argument("make_field: grid at least 3x3");
    if (!(hx > 0) || !(hy > 0)) throw std::invalid_argument("make_field: spacings positive");
    if (!(epsilon > 0) || epsilon > 0.5)
        throw std::invalid_argument("make_field: epsilon outside (0, 0.5]");
    ScalarField2D f;
    f.nx = nx; f.ny = ny; f.hx = hx; f.hy = hy;
    f.x0 = x0; f.y0 = y0;
    f.epsilon = epsilon;
    f.periodic_x = periodic_x;
    f.u.assign(nx * ny, 0.0);
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < nx; ++i) f.at(i, j) = init(f.x_of(i), f.y_of(j));
    f.bottom.resize(nx);
    f.top.resize(nx);
    for (std::size_t i = 0; i < nx; ++i) {
        f.bottom[i] = f.at(i, 0);
        f.top[i] = f.at(i, ny - 1);
    }
    if (!periodic_x) {
        f.left.resize(ny);
        f.right.resize(ny);
        for (std::size_t j = 0; j < ny; ++j) {
            f.left[j] = f.at(0, j);
            f.right[j] = f.at(nx - 1, j);
        }
    }
    return f;
}

namespace {

void eval_wp(const ScalarField2D& f, const Potential& p, std::vector<double>& wp) {
    wp.resize(f.u.size());
    for (std::size_t k = 0; k < f.u.size(); ++k) wp[k] = p.Wp(f.u[k]);
}

} // namespace

std::vector<double> ac_residual(const ScalarField2D& f, const Potential& p) {
    if (f.nx < 3 || f.ny < 3) throw std::invalid_argument("ac_residual: grid at least 3x3");
    std::vector<double> wp, res(f.u.size(), 0.0);
    eval_wp(f, p, wp);
    kern::ac_residual_interior(f.grid(), f.epsilon, f.u.data(), wp.data(), res.data());
    for (std::size_t i = 0; i < f.nx; ++i) {
        res[i] = f.at(i, 0) - f.bottom[i];
        res[(f.ny - 1) * f.nx + i] = f.at(i, f.ny - 1) - f.top[i];
    }
    if (!f.periodic_x)
        for (std::size_t j = 1; j + 1 < f.ny; ++j) {
            res[j * f.nx] = f.at(0, j) - f.left[j];
            res[j * f.nx + f.nx - 1] = f.at(f.nx - 1, j) - f.right[j];
        }
    return res;
}

double residual_norm(const ScalarField2D& f, const Potential& p) {
    auto r = ac_residual(f, p);
    double m = 0.0;
    for (double v : r) m = std::max(m, std::fabs(v));
    return m;
}

namespace {

// Interior-unknown indexing for the Newton linear system.
struct UnknownMap {
    std::size_t nx, ny;
    bool periodic_x;
    std::size_t cols;              // unknown columns per row
    std::size_t n;                 // total unknowns
    UnknownMap(const ScalarField2D& f)
        : nx(f.nx), ny(f.ny), periodic_x(f.periodic_x),
          cols(periodic_x ? nx : nx - 2), n(cols * (ny - 2)) {}
    std::size_t grid_index(std::size_t k) const {
        std::size_t j = k / cols + 1;
        std::size_t i = periodic_x ? k % cols : k % cols + 1;
        return j * nx + i;
    }
};

// out = -(eps Lap - W''(u)/eps) v on interior unknowns (SPD for stable u).
void apply_newton_matrix(const ScalarField2D& f, const std::vector<double>& wpp,
                         const UnknownMap& map, double shift, const double* v,
                         double* out) {
    const double cx = f.epsilon / (f.hx * f.hx), cy = f.epsilon / (f.hy * f.hy);
    const std::size_t cols = map.cols, rows = f.ny - 2;
#pragma omp parallel for schedule(static) if (map.n > 4096)
    for (std::ptrdiff_t jr = 0; jr < std::ptrdiff_t(rows); ++jr) {
        const std::size_t base = std::size_t(jr) * cols;
        for (std::size_t ic = 0; ic < cols; ++ic) {
            std::size_t k = base + ic;
            std::size_t gi = map.grid_index(k);
            double diag = 2.0 * cx + 2.0 * cy + wpp[gi] / f.epsilon + shift;
            double s = diag * v[k];
            // x neighbours
            if (map.periodic_x) {
                std::size_t il = ic == 0 ? cols - 1 : ic - 1;
                std::size_t ir = ic + 1 == cols ? 0 : ic + 1;
                s -= cx * (v[base + il] + v[base + ir]);
            } else {
                if (ic > 0) s -= cx * v[k - 1];
                if (ic + 1 < cols) s -= cx * v[k + 1];
            }
            if (jr > 0) s -= cy * v[k - cols];
            if (std::size_t(jr) + 1 < rows) s -= cy * v[k + cols];
            out[k] = s;
        }
    }
}

} // namespace

SolveReport solve_newton(ScalarField2D& f, const Potential& p, double tol, int max_iter) {
    if (!(tol > 0)) throw std::invalid_argument("solve_newton: tol > 0 required");
    SolveReport rep;
    f.impose_boundary();
    UnknownMap map(f);
    std::vector<double> wpp(f.u.size()), rhs(map.n), delta(map.n), diag(map.n);
    const double cx = f.epsilon / (f.hx * f.hx), cy = f.epsilon / (f.hy * f.hy);

    double rnorm = residual_norm(f, p);
    for (int it = 0; it < max_iter; ++it) {
        if (rnorm <= tol) {
            rep.converged = true;
            break;
        }
        ++rep.iterations;
        auto res = ac_residual(f, p);
        for (std::size_t k = 0; k < f.u.size(); ++k) wpp[k] = p.Wpp(f.u[k]);
        for (std::size_t k = 0; k < map.n; ++k) rhs[k] = res[map.grid_index(k)];

        // Gershgorin shift that makes the matrix definite if W'' dips negative.
        double wpp_min = 0.0;
        for (std::size_t k = 0; k < map.n; ++k)
            wpp_min = std::min(wpp_min, wpp[map.grid_index(k)]);
        double safe_shift = wpp_min < 0.0 ? -wpp_min / f.epsilon + 0.5 : 0.0;

        double shift = 0.0;
        auto apply = [&](const double* v, double* out) {
            apply_newton_matrix(f, wpp, map, shift, v, out);
        };
        for (std::size_t k = 0; k < map.n; ++k)
            diag[k] = 2.0 * cx + 2.0 * cy + wpp[map.grid_index(k)] / f.epsilon + shift;
        std::fill(delta.begin(), delta.end(), 0.0);
        double lin_tol = std::max(0.1 * tol, 1e-4 * rnorm);
        int cg = pcg(map.n, apply, diag.data(), rhs.data(), delta.data(), lin_tol, 20000);
        if (cg < 0) {
            // Indefinite along the Krylov path: modified Newton with the shift.
            shift = safe_shift;
            for (std::size_t k = 0; k < map.n; ++k)
                diag[k] = 2.0 * cx + 2.0 * cy + wpp[map.grid_index(k)] / f.epsilon + shift;
            std::fill(delta.begin(), delta.end(), 0.0);
            pcg(map.n, apply, diag.data(), rhs.data(), delta.data(), lin_tol, 20000);
        }

        // Backtracking on the residual max-norm; delta solves A d = r with
        // A = -J, so the Newton update is u <- u + theta d.
        double theta = 1.0;
        bool accepted = false;
        std::vector<double> u_save = f.u;
        for (int bt = 0; bt < 12; ++bt) {
            f.u = u_save;
            for (std::size_t k = 0; k < map.n; ++k)
                f.u[map.grid_index(k)] += theta * delta[k];
            double rn = residual_norm(f, p);
            if (rn < rnorm) {
                rnorm = rn;
                accepted = true;
                rep.damping_history.push_back(theta);
                break;
            }
            theta *= 0.5;
        }
        if (!accepted) {
            // Gradient-flow fallback sweeps.
            f.u = u_save;
            double dt = gradient_flow_dt_bound(f, p);
            gradient_flow(f, p, dt, 50);
            rnorm = residual_norm(f, p);
            rep.damping_history.push_back(0.0);
        }
    }
    rep.final_residual = rnorm;
    if (rnorm <= tol) rep.converged = true;
    return rep;
}

double gradient_flow_dt_bound(const ScalarField2D& f, const Potential& p) {
    double wpp_max = 0.0;
    for (double v : f.u) wpp_max = std::max(wpp_max, std::fabs(p.Wpp(v)));
    double h = std::min(f.hx, f.hy);
    return 0.5 * h * h * f.epsilon / (4.0 * f.epsilon * f.epsilon + h * h * wpp_max);
}

void gradient_flow(ScalarField2D& f, const Potential& p, double dt, int steps) {
    double bound = gradient_flow_dt_bound(f, p);
    if (dt > bound * (1.0 + 1e-12))
        throw std::invalid_argument("gradient_flow: dt above stability bound");
    f.impose_boundary();
    std::vector<double> wp(f.u.size()), u_old(f.u.size());
    for (int s = 0; s < steps; ++s) {
        u_old = f.u;
        eval_wp(f, p, wp);
        kern::euler_step_interior(f.grid(), f.epsilon, dt, u_old.data(), wp.data(),
                                  f.u.data());
    }
}

double energy(const ScalarField2D& f, const Potential& p, const Rect& region) {
    Window w = f.window_of(region);
    if (w.width() < 2 || w.height() < 2)
        throw std::invalid_argument("energy: region too small");
    std::vector<double> wv(f.u.size());
    for (std::size_t k = 0; k < f.u.size(); ++k) wv[k] = p.W(f.u[k]);
    return kern::energy_cells(f.grid(), f.epsilon, f.u.data(), wv.data(), w.i0,
                              w.i1 - 1, w.j0, w.j1 - 1);
}

double discrete_energy(const ScalarField2D& f, const Potential& p) {
    // Node-based W plus edge-based gradient terms; the exact Lyapunov
    // functional of the explicit flow (boundary edges included).
    double sum = 0.0;
    const double ax = f.epsilon / (f.hx * f.hx) * 0.5, ay = f.epsilon / (f.hy * f.hy) * 0.5;
    for (std::size_t j = 0; j < f.ny; ++j)
        for (std::size_t i = 0; i < f.nx; ++i) {
            double uij = f.at(i, j);
            sum += p.W(uij) / f.epsilon;
            if (i + 1 < f.nx) {
                double d = f.at(i + 1, j) - uij;
                sum += ax * d * d;
            } else if (f.periodic_x) {
                double d = f.at(0, j) - uij;
                sum += ax * d * d;
            }
            if (j + 1 < f.ny) {
                double d = f.at(i, j + 1) - uij;
                sum += ay * d * d;
            }
        }
    return sum * f.hx * f.hy;
}

double modica_deficit(const ScalarField2D& f, const Potential& p) {
    double mn = 1e300;
    for (std::size_t j = 1; j + 1 < f.ny; ++j)
        for (std::size_t i = (f.periodic_x ? 0 : 1); i < (f.periodic_x ? f.nx : f.nx - 1);
             ++i) {
            std::size_t im = i == 0 ? f.nx - 1 : i - 1;
            std::size_t ip = i + 1 == f.nx ? 0 : i + 1;
            double uc = f.at(i, j);
            double gx = (f.at(ip, j) - uc) * (uc - f.at(im, j)) / (f.hx * f.hx);
            double gy = (f.at(i, j + 1) - uc) * (uc - f.at(i, j - 1)) / (f.hy * f.hy);
            double P = p.W(uc) / f.epsilon - 0.5 * f.epsilon * (gx + gy);
            mn = std::min(mn, P);
        }
    return mn;
}

double modica_deficit_beyond_estimate(const ScalarField2D& f, const Potential& p) {
    double mn = 1e300;
    const bool px = f.periodic_x;
    const std::size_t ilo = px ? 0 : 2, ihi = px ? f.nx : f.nx - 2;
    auto wrap = [&](std::ptrdiff_t i) {
        if (px) return std::size_t((i % std::ptrdiff_t(f.nx) + f.nx) % std::ptrdiff_t(f.nx));
        return std::size_t(i);
    };
    for (std::size_t j = 2; j + 2 < f.ny; ++j)
        for (std::size_t i = ilo; i < ihi; ++i) {
            double uc = f.at(i, j);
            std::size_t im = wrap(std::ptrdiff_t(i) - 1), ip = wrap(std::ptrdiff_t(i) + 1);
            std::size_t im2 = wrap(std::ptrdiff_t(i) - 2), ip2 = wrap(std::ptrdiff_t(i) + 2);
            double gx = (f.at(ip, j) - uc) * (uc - f.at(im, j)) / (f.hx * f.hx);
            double gy = (f.at(i, j + 1) - uc) * (uc - f.at(i, j - 1)) / (f.hy * f.hy);
            double P = p.W(uc) / f.epsilon - 0.5 * f.epsilon * (gx + gy);
            // per-direction error terms of the product form:
            // (h^2/3) u' u''' - (h^2/4) u''^2, from second/third differences
            double ux = (f.at(ip, j) - f.at(im, j)) / (2 * f.hx);
            double uxx = (f.at(ip, j) - 2 * uc + f.at(im, j)) / (f.hx * f.hx);
            double uxxx = (f.at(ip2, j) - 2 * f.at(ip, j) + 2 * f.at(im, j) - f.at(im2, j)) /
                          (2 * f.hx * f.hx * f.hx);
            double uy = (f.at(i, j + 1) - f.at(i, j - 1)) / (2 * f.hy);
            double uyy = (f.at(i, j + 1) - 2 * uc + f.at(i, j - 1)) / (f.hy * f.hy);
            double uyyy = (f.at(i, j + 2) - 2 * f.at(i, j + 1) + 2 * f.at(i, j - 1) -
                           f.at(i, j - 2)) /
                          (2 * f.hy * f.hy * f.hy);
            double est = 0.5 * f.epsilon *
                         (f.hx * f.hx * (std::fabs(ux * uxxx) / 3.0 + uxx * uxx / 4.0) +
                          f.hy * f.hy * (std::fabs(uy * uyyy) / 3.0 + uyy * uyy / 4.0));
            mn = std::min(mn, P + 10.0 * est);
        }
    return mn;
}

namespace {

// central differences of bilinear samples with step h/2
void sample_gradient(const ScalarField2D& f, double x, double y, double& ux, double& uy) {
    double dx = 0.5 * f.hx, dy = 0.5 * f.hy;
    ux = (f.interp(x + dx, y) - f.interp(x - dx, y)) / (2 * dx);
    uy = (f.interp(x, y + dy) - f.interp(x, y - dy)) / (2 * dy);
}

} // namespace

double pohozaev_residual(const ScalarField2D& f, const Potential& p, double r,
                         double cx, double cy) {
    double xmin = f.x0, xmax = f.x0 + double(f.nx - 1) * f.hx;
    double ymin = f.y0, ymax = f.y0 + double(f.ny - 1) * f.hy;
    if (cx - r < xmin || cx + r > xmax || cy - r < ymin || cy + r > ymax)
        throw std::invalid_argument("pohozaev_residual: disc outside grid");

    const double eps2 = f.epsilon * f.epsilon;
    // area integral of 2W(u) over the disc, midpoint rule on cells
    double lhs = 0.0;
    Window w = f.window_of({cx - r, cx + r, cy - r, cy + r});
    for (std::size_t j = w.j0; j + 1 < w.j1; ++j)
        for (std::size_t i = w.i0; i + 1 < w.i1; ++i) {
            double xm = f.x_of(i) + 0.5 * f.hx, ym = f.y_of(j) + 0.5 * f.hy;
            if ((xm - cx) * (xm - cx) + (ym - cy) * (ym - cy) <= r * r)
                lhs += 2.0 * p.W(f.interp(xm, ym)) * f.hx * f.hy;
        }

    // boundary integral, arc-length midpoint rule
    std::size_t nseg = std::max<std::size_t>(64, std::size_t(2.0 * kPi * r / std::min(f.hx, f.hy)));
    double rhs = 0.0;
    for (std::size_t s = 0; s < nseg; ++s) {
        double th = 2.0 * kPi * (double(s) + 0.5) / double(nseg);
        double x = cx + r * std::cos(th), y = cy + r * std::sin(th);
        double ux, uy;
        sample_gradient(f, x, y, ux, uy);
        double ur = ux * std::cos(th) + uy * std::sin(th);
        double dens = 0.5 * eps2 * (ux * ux + uy * uy) + p.W(f.interp(x, y)) - eps2 * ur * ur;
        rhs += dens * (2.0 * kPi * r / double(nseg));
    }
    rhs *= r;
    return std::fabs(lhs - rhs);
}

void save_field(const ScalarField2D& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_field: cannot open " + path);
    const char magic[4] = {'A', 'C', 'F', '1'};
    out.write(magic, 4);
    std::int64_t nx = std::int64_t(f.nx), ny = std::int64_t(f.ny);
    out.write(reinterpret_cast<const char*>(&nx), 8);
    out.write(reinterpret_cast<const char*>(&ny), 8);
    out.write(reinterpret_cast<const char*>(&f.hx), 8);
    out.write(reinterpret_cast<const char*>(&f.hy), 8);
    out.write(reinterpret_cast<const char*>(&f.epsilon), 8);
    out.write(reinterpret_cast<const char*>(f.u.data()), std::streamsize(f.u.size() * 8));
}

ScalarField2D load_field(const std::string& path, double x0, double y0) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_field: cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (std::memcmp(magic, "ACF1", 4) != 0)
        throw std::runtime_error("load_field: bad magic");
    std::int64_t nx = 0, ny = 0;
    ScalarField2D f;
    in.read(reinterpret_cast<char*>(&nx), 8);
    in.read(reinterpret_cast<char*>(&ny), 8);
    in.read(reinterpret_cast<char*>(&f.hx), 8);
    in.read(reinterpret_cast<char*>(&f.hy), 8);
    in.read(reinterpret_cast<char*>(&f.epsilon), 8);
    f.nx = std::size_t(nx);
    f.ny = std::size_t(ny);
    f.x0 = x0;
    f.y0 = y0;
    f.u.resize(f.nx * f.ny);
    in.read(reinterpret_cast<char*>(f.u.data()), std::streamsize(f.u.size() * 8));
    if (!in) throw std::runtime_error("load_field: truncated file");
    f.bottom.assign(f.nx, 0.0);
    f.top.assign(f.nx, 0.0);
    f.left.assign(f.ny, 0.0);
    f.right.assign(f.ny, 0.0);
    for (std::size_t i = 0; i < f.nx; ++i) {
        f.bottom[i] = f.at(i, 0);
        f.top[i] = f.at(i, f.ny - 1);
    }
    for (std::size_t j = 0; j < f.ny; ++j) {
        f.left[j] = f.at(0, j);
        f.right[j] = f.at(f.nx - 1, j);
    }
    return f;
}

void save_field_csv(const ScalarField2D& f, const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw std::runtime_error("save_field_csv: cannot open " + path);
    std::fprintf(fp, "x,y,u\n");
    for (std::size_t j = 0; j < f.ny; ++j)
        for (std::size_t i = 0; i < f.nx; ++i)
            std::fprintf(fp, "%.17g,%.17g,%.17g\n", f.x_of(i), f.y_of(j), f.at(i, j));
    std::fclose(fp);
}

} // namespace aclab
