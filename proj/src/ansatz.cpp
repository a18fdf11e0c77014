#include "aclab/ansatz.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace aclab {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;

double parity_constant(int Q) { return -0.5 * ((Q % 2 == 0 ? 1.0 : -1.0) + 1.0); }

double layer_sign(int alpha_1based) { return alpha_1based % 2 == 1 ? 1.0 : -1.0; }

// minimal vertical gap between consecutive interfaces over the grid columns
double min_gap_of(const std::vector<InterfaceCurve>& itf, const GridSpec& gs) {
    double mg = 1e300;
    for (std::size_t a = 0; a + 1 < itf.size(); ++a) {
        for (std::size_t i = 0; i < gs.nx; ++i) {
            double x = gs.x0 + double(i) * gs.hx;
            double lo = std::max(itf[a].gx.front(), itf[a + 1].gx.front());
            double hi = std::min(itf[a].gx.back(), itf[a + 1].gx.back());
            if (x < lo || x > hi) continue;
            mg = std::min(mg, itf[a + 1].graph_at(x) - itf[a].graph_at(x));
        }
    }
    return mg;
}

} // namespace

LayerAnsatz build_ansatz(const std::vector<InterfaceCurve>& interfaces,
                         const std::vector<std::vector<double>>& shifts,
                         const CutoffProfile& cp, const GridSpec& gs) {
    const int Q = int(interfaces.size());
    if (Q < 1) throw std::invalid_argument("build_ansatz: no interfaces");
    if (shifts.size() != interfaces.size())
        throw std::invalid_argument("build_ansatz: shifts/interfaces size mismatch");
    for (const auto& c : interfaces)
        if (!c.graph_valid) throw std::invalid_argument("build_ansatz: graph form required");

    LayerAnsatz a;
    a.interfaces = interfaces;
    a.shifts = shifts;
    a.epsilon = cp.epsilon;
    a.cp = cp;
    a.min_gap = Q > 1 ? min_gap_of(interfaces, gs) : 1e300;
    if (Q > 1 && !(a.min_gap > 0))
        throw std::invalid_argument("build_ansatz: interfaces unordered or touching");
    double max_h = 0.0;
    for (const auto& hs : shifts)
        for (double v : hs) max_h = std::max(max_h, std::fabs(v));
    if (Q > 1 && max_h > 0.1 * a.min_gap)
        throw std::invalid_argument("build_ansatz: shifts exceed 0.1 * min gap");

    const double C = parity_constant(Q);
    a.g_star = make_field(gs.nx, gs.ny, gs.hx, gs.hy, gs.x0, gs.y0, cp.epsilon,
                          gs.periodic_x, [](double, double) { return 0.0; });
    a.dist.assign(Q, std::vector<double>(gs.nx * gs.ny, 0.0));

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < std::ptrdiff_t(gs.ny); ++j) {
        for (std::size_t i = 0; i < gs.nx; ++i) {
            Point p{gs.x0 + double(i) * gs.hx, gs.y0 + double(j) * gs.hy};
            double sum = C;
            for (int q = 0; q < Q; ++q) {
                double d = signed_distance(interfaces[q], p).z;
                a.dist[q][std::size_t(j) * gs.nx + i] = d;
                double t = layer_sign(q + 1) * (d - shifts[q][i]) / cp.epsilon;
                sum += cp.gbar_at(t);
            }
            a.g_star.at(i, std::size_t(j)) = sum;
        }
    }
    // boundary data = the composite itself
    for (std::size_t i = 0; i < gs.nx; ++i) {
        a.g_star.bottom[i] = a.g_star.at(i, 0);
        a.g_star.top[i] = a.g_star.at(i, gs.ny - 1);
    }
    if (!gs.periodic_x)
        for (std::size_t j = 0; j < gs.ny; ++j) {
            a.g_star.left[j] = a.g_star.at(0, j);
            a.g_star.right[j] = a.g_star.at(gs.nx - 1, j);
        }
    return a;
}

namespace {

// orthogonality residuals F_a(h) for one column, given cached distances
void column_F(const ScalarField2D& f, const CutoffProfile& cp,
              const std::vector<std::vector<double>>& dist, std::size_t col,
              const std::vector<double>& h, std::vector<double>& F) {
    const int Q = int(dist.size());
    const double C = parity_constant(Q);
    F.assign(Q, 0.0);
    for (std::size_t j = 0; j < f.ny; ++j) {
        std::size_t k = j * f.nx + col;
        double gstar = C;
        for (int q = 0; q < Q; ++q)
            gstar += cp.gbar_at(layer_sign(q + 1) * (dist[q][k] - h[q]) / cp.epsilon);
        double diff = f.u[k] - gstar;
        for (int q = 0; q < Q; ++q) {
            double w = cp.gbar_p_at(layer_sign(q + 1) * (dist[q][k] - h[q]) / cp.epsilon);
            F[q] += diff * w * f.hy;
        }
    }
}

void solve_small(std::vector<double>& M, std::vector<double>& b, int n) {
    // Gaussian elimination with partial pivoting (n <= 4)
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (std::fabs(M[r * n + c]) > std::fabs(M[piv * n + c])) piv = r;
        if (piv != c) {
            for (int k = 0; k < n; ++k) std::swap(M[c * n + k], M[piv * n + k]);
            std::swap(b[c], b[piv]);
        }
        double d = M[c * n + c];
        if (std::fabs(d) < 1e-300) d = 1e-300;
        for (int r = c + 1; r < n; ++r) {
            double m = M[r * n + c] / d;
            for (int k = c; k < n; ++k) M[r * n + k] -= m * M[c * n + k];
            b[r] -= m * b[c];
        }
    }
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int k = r + 1; k < n; ++k) s -= M[r * n + k] * b[k];
        b[r] = s / M[r * n + r];
    }
}

} // namespace

FitResult fit_shifts(const ScalarField2D& f, const std::vector<InterfaceCurve>& interfaces,
                     const CutoffProfile& cp, const GridSpec& gs) {
    const int Q = int(interfaces.size());
    // distance cache (same sampling build_ansatz uses)
    std::vector<std::vector<double>> dist(Q, std::vector<double>(gs.nx * gs.ny));
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < std::ptrdiff_t(gs.ny); ++j)
        for (std::size_t i = 0; i < gs.nx; ++i) {
            Point p{gs.x0 + double(i) * gs.hx, gs.y0 + double(j) * gs.hy};
            for (int q = 0; q < Q; ++q)
                dist[q][std::size_t(j) * gs.nx + i] = signed_distance(interfaces[q], p).z;
        }

    FitResult out;
    out.shifts.assign(Q, std::vector<double>(gs.nx, 0.0));
    std::vector<int> flags(gs.nx, 0);

#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t col = 0; col < std::ptrdiff_t(gs.nx); ++col) {
        std::vector<double> h(Q, 0.0), F(Q), F2(Q), step(Q), Jac(Q * Q), htry(Q);
        bool ok = false;
        column_F(f, cp, dist, std::size_t(col), h, F);
        for (int it = 0; it < 50; ++it) {
            double fn = 0.0;
            for (double v : F) fn = std::max(fn, std::fabs(v));
            // finite-difference Jacobian
            const double dh = 1e-7;
            for (int q = 0; q < Q; ++q) {
                htry = h;
                htry[q] += dh;
                column_F(f, cp, dist, std::size_t(col), htry, F2);
                for (int r = 0; r < Q; ++r) Jac[r * Q + q] = (F2[r] - F[r]) / dh;
            }
            step = F;
            for (double& v : step) v = -v;
            std::vector<double> M = Jac;
            solve_small(M, step, Q);
            // damped update
            double theta = 1.0;
            bool moved = false;
            for (int bt = 0; bt < 8; ++bt) {
                htry = h;
                for (int q = 0; q < Q; ++q) htry[q] += theta * step[q];
                column_F(f, cp, dist, std::size_t(col), htry, F2);
                double fn2 = 0.0;
                for (double v : F2) fn2 = std::max(fn2, std::fabs(v));
                if (fn2 < fn || fn == 0.0) {
                    h = htry;
                    F = F2;
                    moved = true;
                    break;
                }
                theta *= 0.5;
            }
            double upd = 0.0;
            for (int q = 0; q < Q; ++q) upd = std::max(upd, std::fabs(theta * step[q]));
            if (!moved || upd < 1e-10) {
                ok = true;
                break;
            }
        }
        if (!ok) flags[col] = 1;
        for (int q = 0; q < Q; ++q) out.shifts[q][col] = h[q];
    }
    for (std::size_t i = 0; i < gs.nx; ++i)
        if (flags[i]) out.flagged_columns.push_back(int(i));
    return out;
}

ErrorFieldReport error_field(const ScalarField2D& f, const LayerAnsatz& a, double b) {
    if (f.nx != a.g_star.nx || f.ny != a.g_star.ny)
        throw std::invalid_argument("error_field: grid mismatch");
    ErrorFieldReport rep;
    rep.phi.resize(f.u.size());
    for (std::size_t k = 0; k < f.u.size(); ++k) {
        rep.phi[k] = f.u[k] - a.g_star.u[k];
        rep.sup = std::max(rep.sup, std::fabs(rep.phi[k]));
        if (std::fabs(f.u[k]) <= 1.0 - b)
            rep.sup_core = std::max(rep.sup_core, std::fabs(rep.phi[k]));
    }
    const int Q = int(a.interfaces.size());
    std::vector<double> h(Q), F(Q);
    for (std::size_t col = 0; col < f.nx; ++col) {
        for (int q = 0; q < Q; ++q) h[q] = a.shifts[q][col];
        column_F(f, a.cp, a.dist, col, h, F);
        for (double v : F) rep.max_orth_defect = std::max(rep.max_orth_defect, std::fabs(v));
    }
    return rep;
}

TodaResidualReport toda_residual(const LayerAnsatz& a, const Profile& prof) {
    const int Q = int(a.interfaces.size());
    const double eps = a.epsilon;
    TodaResidualReport rep;

    // common x-range of all graphs, shrunk one sample for curvature stencils
    double xlo = -1e300, xhi = 1e300;
    for (const auto& c : a.interfaces) {
        xlo = std::max(xlo, c.gx.front());
        xhi = std::min(xhi, c.gx.back());
    }
    const std::size_t nx = a.g_star.nx;
    for (std::size_t i = 0; i < nx; ++i) {
        double x = a.g_star.x_of(i);
        if (x > xlo + 2 * a.g_star.hx && x < xhi - 2 * a.g_star.hx) rep.x1.push_back(x);
    }
    const std::size_t n = rep.x1.size();
    rep.lhs.assign(Q, std::vector<double>(n, 0.0));
    rep.rhs.assign(Q, std::vector<double>(n, 0.0));
    rep.residual.assign(Q, std::vector<double>(n, 0.0));

    const double A1sq = prof.A_plus * prof.A_plus;   // A_{+1}^2
    const double Amsq = prof.A_minus * prof.A_minus; // A_{-1}^2
    const double coef = 4.0 / prof.sigma0;

    for (int q = 0; q < Q; ++q) {
        const InterfaceCurve& c = a.interfaces[q];
        // second difference of the shift samples on the grid columns
        for (std::size_t m = 0; m < n; ++m) {
            double x = rep.x1[m];
            double kappa = c.graph_curvature(x);
            // locate column index for h second-difference
            double fi = (x - a.g_star.x0) / a.g_star.hx;
            std::size_t ic = std::size_t(std::llround(fi));
            ic = std::min(std::max<std::size_t>(ic, 1), nx - 2);
            double hpp = (a.shifts[q][ic + 1] - 2.0 * a.shifts[q][ic] + a.shifts[q][ic - 1]) /
                         (a.g_star.hx * a.g_star.hx);
            rep.lhs[q][m] = eps * (kappa + hpp);

            Point base{x, c.graph_at(x)};
            double rhs = 0.0;
            if (q > 0) {
                double dlo = signed_distance(a.interfaces[q - 1], base).z; // > 0
                double Alo = (q + 1) % 2 == 0 ? A1sq : Amsq;               // A_{(-1)^alpha}^2
                rhs += coef * Alo * std::exp(-kSqrt2 * dlo / eps);
            }
            if (q + 1 < Q) {
                double dhi = signed_distance(a.interfaces[q + 1], base).z; // < 0
                double Ahi = (q + 1) % 2 == 0 ? Amsq : A1sq;               // A_{(-1)^{alpha-1}}^2
                rhs -= coef * Ahi * std::exp(kSqrt2 * dhi / eps);
            }
            rep.rhs[q][m] = rhs;
            rep.residual[q][m] = rep.lhs[q][m] - rhs;
            rep.sup_rhs = std::max(rep.sup_rhs, std::fabs(rhs));
            rep.sup_residual = std::max(rep.sup_residual, std::fabs(rep.residual[q][m]));
        }
    }
    return rep;
}

RescaledLayers blow_up_rescale(const std::vector<InterfaceCurve>& interfaces,
                               double epsilon, int alpha0) {
    if (!(epsilon > 0) || epsilon > 0.2)
        throw std::invalid_argument("blow_up_rescale: epsilon outside (0, 0.2]");
    RescaledLayers r;
    r.epsilon = epsilon;
    r.alpha0 = alpha0;
    double xlo = -1e300, xhi = 1e300;
    for (const auto& c : interfaces) {
        if (!c.graph_valid) throw std::invalid_argument("blow_up_rescale: graph form required");
        xlo = std::max(xlo, c.gx.front());
        xhi = std::min(xhi, c.gx.back());
    }
    if (!(xhi > xlo)) throw std::invalid_argument("blow_up_rescale: range insufficient");
    double se = std::sqrt(epsilon), L = std::fabs(std::log(epsilon));
    std::size_t n = 0;
    for (const auto& c : interfaces) n = std::max(n, c.gx.size());
    r.y.resize(n);
    r.f.assign(interfaces.size(), std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        double x = xlo + (xhi - xlo) * double(i) / double(n - 1);
        r.y[i] = x / se;
        for (std::size_t q = 0; q < interfaces.size(); ++q) {
            double alpha = double(int(q) + 1 - alpha0);
            r.f[q][i] = interfaces[q].graph_at(x) / epsilon - 0.5 * kSqrt2 * alpha * L;
        }
    }
    return r;
}

std::vector<InterfaceCurve> unrescale(const RescaledLayers& r) {
    std::vector<InterfaceCurve> out(r.f.size());
    double se = std::sqrt(r.epsilon), L = std::fabs(std::log(r.epsilon));
    for (std::size_t q = 0; q < r.f.size(); ++q) {
        InterfaceCurve c;
        c.pts.resize(r.y.size());
        for (std::size_t i = 0; i < r.y.size(); ++i) {
            double alpha = double(int(q) + 1 - r.alpha0);
            c.pts[i].x = se * r.y[i];
            c.pts[i].y = r.epsilon * (r.f[q][i] + 0.5 * kSqrt2 * alpha * L);
        }
        c.finalize();
        out[q] = std::move(c);
    }
    return out;
}

SeparationScan separation_scan(
    const std::vector<std::pair<double, const ScalarField2D*>>& states,
    const std::function<bool(const ScalarField2D&)>& is_stable) {
    SeparationScan scan;
    for (const auto& [eps, fptr] : states) {
        const ScalarField2D& f = *fptr;
        SeparationEntry e;
        e.epsilon = eps;
        auto ls = extract_levelset(f, 0.0);
        // inner window: 10 eps margins, capped so small boxes keep a core
        double width = double(f.nx - 1) * f.hx;
        double margin = std::min(10.0 * eps, 0.2 * width);
        Window w = f.inner_window(margin);
        if (w.i1 <= w.i0 + 1 || w.j1 <= w.j0 + 1) {
            e.included = false;
            e.note = "inner window empty";
            scan.entries.push_back(e);
            continue;
        }
        double xlo = f.x_of(w.i0), xhi = f.x_of(w.i1 - 1);
        std::vector<const InterfaceCurve*> graphs;
        for (const auto& c : ls.curves)
            if (c.graph_valid) graphs.push_back(&c);
        if (graphs.size() != 2) {
            e.included = false;
            e.note = "expected two graph curves, found " + std::to_string(graphs.size());
            scan.entries.push_back(e);
            continue;
        }
        if (!is_stable(f)) {
            e.included = false;
            e.note = "state not stable on the inner window";
            scan.entries.push_back(e);
            continue;
        }
        double mg = 1e300;
        for (double x = xlo; x <= xhi; x += f.hx) {
            double lo = std::max(graphs[0]->gx.front(), graphs[1]->gx.front());
            double hi = std::min(graphs[0]->gx.back(), graphs[1]->gx.back());
            if (x < lo || x > hi) continue;
            mg = std::min(mg, std::fabs(graphs[1]->graph_at(x) - graphs[0]->graph_at(x)));
        }
        e.min_gap = mg;
        e.gap_over_epslog = mg / (eps * std::fabs(std::log(eps)));
        scan.entries.push_back(e);
    }
    // least squares min_gap = a eps|log eps| + b eps over included entries
    double s11 = 0, s12 = 0, s22 = 0, r1 = 0, r2 = 0;
    int n = 0;
    for (const auto& e : scan.entries) {
        if (!e.included) continue;
        double X1 = e.epsilon * std::fabs(std::log(e.epsilon)), X2 = e.epsilon;
        s11 += X1 * X1;
        s12 += X1 * X2;
        s22 += X2 * X2;
        r1 += X1 * e.min_gap;
        r2 += X2 * e.min_gap;
        ++n;
    }
    if (n >= 2) {
        double det = s11 * s22 - s12 * s12;
        scan.a = (r1 * s22 - r2 * s12) / det;
        scan.b = (s11 * r2 - s12 * r1) / det;
    }
    return scan;
}

void save_toda_residual_csv(const TodaResidualReport& r, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("save_toda_residual_csv: cannot open " + path);
    std::fprintf(f, "x1,alpha,lhs,rhs,residual\n");
    for (std::size_t q = 0; q < r.lhs.size(); ++q)
        for (std::size_t m = 0; m < r.x1.size(); ++m)
            std::fprintf(f, "%.17g,%zu,%.17g,%.17g,%.17g\n", r.x1[m], q + 1, r.lhs[q][m],
                         r.rhs[q][m], r.residual[q][m]);
    std::fclose(f);
}

} // namespace aclab
