#include "aclab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace aclab {

void InterfaceCurve::finalize() {
    arclen.assign(pts.size(), 0.0);
    mean_y = 0.0;
    for (size_t i = 0; i < pts.size(); ++i) {
        if (i > 0)
            arclen[i] = arclen[i - 1] + std::hypot(pts[i].x - pts[i - 1].x,
                                                   pts[i].y - pts[i - 1].y);
        mean_y += pts[i].y;
    }
    if (!pts.empty()) mean_y /= double(pts.size());

    // graph form: x must be strictly monotone along the polyline
    graph_valid = pts.size() >= 2;
    bool incr = true, decr = true;
    for (size_t i = 1; i < pts.size(); ++i) {
        if (pts[i].x <= pts[i - 1].x) incr = false;
        if (pts[i].x >= pts[i - 1].x) decr = false;
    }
    graph_valid = graph_valid && (incr || decr);
    gx.clear();
    gf.clear();
    if (graph_valid) {
        gx.reserve(pts.size());
        gf.reserve(pts.size());
        if (incr)
            for (const auto& p : pts) { gx.push_back(p.x); gf.push_back(p.y); }
        else
            for (size_t i = pts.size(); i-- > 0;) { gx.push_back(pts[i].x); gf.push_back(pts[i].y); }
    }
}

double InterfaceCurve::graph_at(double x1) const {
    if (!graph_valid) throw std::logic_error("InterfaceCurve: not in graph form");
    auto it = std::upper_bound(gx.begin(), gx.end(), x1);
    size_t i = it == gx.begin() ? 0 : size_t(it - gx.begin()) - 1;
    if (i >= gx.size() - 1) i = gx.size() - 2;
    double w = (x1 - gx[i]) / (gx[i + 1] - gx[i]);
    w = std::clamp(w, 0.0, 1.0);
    return (1 - w) * gf[i] + w * gf[i + 1];
}

namespace {

// index of the graph node nearest to x1
size_t graph_node(const std::vector<double>& gx, double x1) {
    auto it = std::lower_bound(gx.begin(), gx.end(), x1);
    if (it == gx.begin()) return 0;
    if (it == gx.end()) return gx.size() - 1;
    size_t i = size_t(it - gx.begin());
    return (x1 - gx[i - 1] < gx[i] - x1) ? i - 1 : i;
}

} // namespace

namespace {

// stencil neighbours at least a mean spacing away; level-set polylines can
// carry nearly duplicate x samples that would blow up divided differences
void stencil_neighbours(const std::vector<double>& gx, size_t i, size_t& lo, size_t& hi) {
    double dmin = 0.6 * (gx.back() - gx.front()) / double(gx.size() - 1);
    lo = i;
    while (lo > 0 && gx[i] - gx[lo] < dmin) --lo;
    hi = i;
    while (hi + 1 < gx.size() && gx[hi] - gx[i] < dmin) ++hi;
}

} // namespace

double InterfaceCurve::graph_slope(double x1) const {
    if (!graph_valid) throw std::logic_error("InterfaceCurve: not in graph form");
    size_t i = graph_node(gx, x1), a, b;
    stencil_neighbours(gx, i, a, b);
    if (a == b) return 0.0;
    return (gf[b] - gf[a]) / (gx[b] - gx[a]);
}

double InterfaceCurve::graph_curvature(double x1) const {
    if (!graph_valid) throw std::logic_error("InterfaceCurve: not in graph form");
    // least-squares parabola over a small window: single noisy samples
    // (level-set polylines) would wreck a 3-point second difference
    size_t i = graph_node(gx, x1);
    double mean_dx = (gx.back() - gx.front()) / double(gx.size() - 1);
    double w = 3.5 * mean_dx;
    size_t a = i, b = i;
    while (a > 0 && gx[i] - gx[a - 1] <= w) --a;
    while (b + 1 < gx.size() && gx[b + 1] - gx[i] <= w) ++b;
    if (b - a < 4) { // thin data: fall back to a spaced divided difference
        stencil_neighbours(gx, i, a, b);
        if (a == i && i > 0) a = i - 1;
        if (b == i && i + 1 < gx.size()) b = i + 1;
        if (a == i || b == i) return 0.0;
        double hl = gx[i] - gx[a], hr = gx[b] - gx[i];
        double fpp = 2.0 * (hl * gf[b] - (hl + hr) * gf[i] + hr * gf[a]) /
                     (hl * hr * (hl + hr));
        double fp = (gf[b] - gf[a]) / (hl + hr);
        return fpp / std::pow(1.0 + fp * fp, 1.5);
    }
    // fit f ~ c0 + c1 (x - x1) + c2 (x - x1)^2 over [a, b]
    double s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0, r0 = 0, r1 = 0, r2 = 0;
    for (size_t k = a; k <= b; ++k) {
        double d = gx[k] - x1, d2 = d * d;
        s0 += 1; s1 += d; s2 += d2; s3 += d2 * d; s4 += d2 * d2;
        r0 += gf[k]; r1 += gf[k] * d; r2 += gf[k] * d2;
    }
    // solve the 3x3 normal equations
    double M[9] = {s0, s1, s2, s1, s2, s3, s2, s3, s4};
    double rhs[3] = {r0, r1, r2};
    for (int c = 0; c < 3; ++c) {
        int piv = c;
        for (int rr = c + 1; rr < 3; ++rr)
            if (std::fabs(M[rr * 3 + c]) > std::fabs(M[piv * 3 + c])) piv = rr;
        for (int k = 0; k < 3; ++k) std::swap(M[c * 3 + k], M[piv * 3 + k]);
        std::swap(rhs[c], rhs[piv]);
        for (int rr = c + 1; rr < 3; ++rr) {
            double m = M[rr * 3 + c] / M[c * 3 + c];
            for (int k = c; k < 3; ++k) M[rr * 3 + k] -= m * M[c * 3 + k];
            rhs[rr] -= m * rhs[c];
        }
    }
    double c2 = rhs[2] / M[8];
    double c1 = (rhs[1] - M[5] * c2) / M[4];
    double fpp = 2.0 * c2, fp = c1;
    return fpp / std::pow(1.0 + fp * fp, 1.5);
}

namespace {

struct Seg {
    Point a, b;
};

// edge key: horizontal edge (i,j)-(i+1,j) id 2*(j*nx+i), vertical edge
// (i,j)-(i,j+1) id 2*(j*nx+i)+1
long long edge_id(std::size_t nx, std::size_t i, std::size_t j, bool vertical) {
    return 2LL * ((long long)j * (long long)nx + (long long)i) + (vertical ? 1 : 0);
}

Point edge_cross(const ScalarField2D& f, std::size_t i, std::size_t j, bool vertical,
                 double t) {
    double v0 = f.at(i, j);
    double v1 = vertical ? f.at(i, j + 1) : f.at(i + 1 == f.nx ? 0 : i + 1, j);
    double w = (t - v0) / (v1 - v0);
    w = std::clamp(w, 0.0, 1.0);
    if (vertical) return {f.x_of(i), f.y_of(j) + w * f.hy};
    return {f.x_of(i) + w * f.hx, f.y_of(j)};
}

} // namespace

LevelsetResult extract_levelset(const ScalarField2D& f, double t) {
    if (!(t > -1.0) || !(t < 1.0))
        throw std::invalid_argument("extract_levelset: t outside (-1,1)");
    LevelsetResult out;
    // connectivity: for each crossing edge, the set of crossing edges linked
    // to it by cell segments
    std::map<long long, std::vector<long long>> links;
    auto add_link = [&](long long a, long long b) {
        links[a].push_back(b);
        links[b].push_back(a);
    };
    const std::size_t icells = f.periodic_x ? f.nx : f.nx - 1;
    for (std::size_t j = 0; j + 1 < f.ny; ++j)
        for (std::size_t i = 0; i < icells; ++i) {
            std::size_t ip = i + 1 == f.nx ? 0 : i + 1;
            double v00 = f.at(i, j), v10 = f.at(ip, j);
            double v01 = f.at(i, j + 1), v11 = f.at(ip, j + 1);
            int c = (v00 > t) | ((v10 > t) << 1) | ((v11 > t) << 2) | ((v01 > t) << 3);
            if (c == 0 || c == 15) continue;
            long long eb = edge_id(f.nx, i, j, false);      // bottom
            long long er = edge_id(f.nx, ip, j, true);      // right
            long long et = edge_id(f.nx, i, j + 1, false);  // top
            long long el = edge_id(f.nx, i, j, true);       // left
            switch (c) {
                case 1: case 14: add_link(eb, el); break;
                case 2: case 13: add_link(eb, er); break;
                case 3: case 12: add_link(el, er); break;
                case 4: case 11: add_link(er, et); break;
                case 6: case 9: add_link(eb, et); break;
                case 7: case 8: add_link(el, et); break;
                case 5: case 10: {
                    ++out.ambiguous_cells;
                    double avg = 0.25 * (v00 + v10 + v01 + v11);
                    bool diag_connect = (avg > t) == ((c == 5) ? (v00 > t) : (v10 > t));
                    // c==5: corners 00,11 above. c==10: corners 10,01 above.
                    if (c == 5) {
                        if (diag_connect) { add_link(eb, er); add_link(el, et); }
                        else { add_link(eb, el); add_link(er, et); }
                    } else {
                        if (diag_connect) { add_link(eb, el); add_link(er, et); }
                        else { add_link(eb, er); add_link(el, et); }
                    }
                    break;
                }
            }
        }

    // walk the link graph into polylines
    auto edge_point = [&](long long id) {
        bool vertical = id & 1;
        long long cell = id >> 1;
        std::size_t i = std::size_t(cell % (long long)f.nx);
        std::size_t j = std::size_t(cell / (long long)f.nx);
        return edge_cross(f, i, j, vertical, t);
    };
    // Node degree is at most 2, so the link graph is a union of simple
    // paths and cycles: walk with plain visited flags.
    std::map<long long, bool> visited;
    for (auto& kv : links) visited[kv.first] = false;

    auto walk = [&](long long start) {
        std::vector<long long> chain;
        chain.push_back(start);
        visited[start] = true;
        long long prev = -1, cur = start;
        while (true) {
            long long nxt = -1;
            for (long long cand : links[cur]) {
                if (cand == prev) continue;
                if (!visited[cand]) { nxt = cand; break; }
                if (cand == start && chain.size() > 2) { nxt = cand; break; }
            }
            if (nxt == -1) break;
            prev = cur;
            cur = nxt;
            chain.push_back(cur);
            if (cur == start) break; // closed loop
            visited[cur] = true;
        }
        return chain;
    };

    std::vector<std::vector<long long>> chains;
    for (auto& kv : links)
        if (kv.second.size() == 1 && !visited[kv.first]) chains.push_back(walk(kv.first));
    for (auto& kv : links)
        if (!visited[kv.first]) chains.push_back(walk(kv.first));

    for (auto& ch : chains) {
        if (ch.size() < 2) continue;
        InterfaceCurve c;
        c.pts.reserve(ch.size());
        for (long long id : ch) {
            Point p = edge_point(id);
            if (!c.pts.empty() && std::fabs(p.x - c.pts.back().x) < 1e-14 &&
                std::fabs(p.y - c.pts.back().y) < 1e-14)
                continue;
            c.pts.push_back(p);
        }
        if (c.pts.size() < 2) continue;
        c.finalize();
        // orientation: u larger on the +normal side; probe at the midpoint
        size_t m = c.pts.size() / 2;
        size_t m2 = m + 1 < c.pts.size() ? m + 1 : m - 1;
        double tx = c.pts[m2].x - c.pts[m].x, ty = c.pts[m2].y - c.pts[m].y;
        double nn = std::hypot(tx, ty);
        if (nn > 0) {
            double nxv = -ty / nn, nyv = tx / nn;
            double d = 0.25 * std::min(f.hx, f.hy);
            double up = f.interp(c.pts[m].x + nxv * d, c.pts[m].y + nyv * d);
            double dn = f.interp(c.pts[m].x - nxv * d, c.pts[m].y - nyv * d);
            c.oriented_up = up >= dn;
            if (c.graph_valid) {
                // for graph curves re-probe vertically: +side is above
                double xq = c.gx[c.gx.size() / 2];
                double yq = c.graph_at(xq);
                double above = f.interp(xq, yq + d), below = f.interp(xq, yq - d);
                c.oriented_up = above >= below;
            }
        }
        out.curves.push_back(std::move(c));
    }
    std::sort(out.curves.begin(), out.curves.end(),
              [](const InterfaceCurve& a, const InterfaceCurve& b) {
                  return a.mean_y < b.mean_y;
              });
    out.min_grad_on_level = 1e300;
    for (const auto& c : out.curves)
        for (size_t i = 0; i < c.pts.size(); i += 4) {
            double dx = 0.5 * f.hx, dy = 0.5 * f.hy;
            double gx = (f.interp(c.pts[i].x + dx, c.pts[i].y) -
                         f.interp(c.pts[i].x - dx, c.pts[i].y)) /
                        (2 * dx);
            double gy = (f.interp(c.pts[i].x, c.pts[i].y + dy) -
                         f.interp(c.pts[i].x, c.pts[i].y - dy)) /
                        (2 * dy);
            out.min_grad_on_level = std::min(out.min_grad_on_level, std::hypot(gx, gy));
        }
    if (out.curves.empty()) out.min_grad_on_level = 0.0;
    return out;
}

InterfaceCurve curve_from_graph(const std::vector<double>& x, const std::vector<double>& f) {
    if (x.size() != f.size() || x.size() < 2)
        throw std::invalid_argument("curve_from_graph: bad samples");
    InterfaceCurve c;
    c.pts.resize(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(f[i]))
            throw std::invalid_argument("curve_from_graph: non-finite sample");
        c.pts[i] = {x[i], f[i]};
    }
    c.finalize();
    if (!c.graph_valid) throw std::invalid_argument("curve_from_graph: x not monotone");
    return c;
}

CurvatureSample curvature_B(const ScalarField2D& f, Point pt, double b,
                            double grad_floor) {
    double uc = f.interp(pt.x, pt.y);
    if (std::fabs(uc) > 1.0 - b)
        throw std::invalid_argument("curvature_B: |u(pt)| > 1 - b");
    const double dx = 0.5 * f.hx, dy = 0.5 * f.hy;
    auto U = [&](double X, double Y) { return f.interp(X, Y); };
    double ux = (U(pt.x + dx, pt.y) - U(pt.x - dx, pt.y)) / (2 * dx);
    double uy = (U(pt.x, pt.y + dy) - U(pt.x, pt.y - dy)) / (2 * dy);
    double uxx = (U(pt.x + 2 * dx, pt.y) - 2 * uc + U(pt.x - 2 * dx, pt.y)) / (4 * dx * dx);
    double uyy = (U(pt.x, pt.y + 2 * dy) - 2 * uc + U(pt.x, pt.y - 2 * dy)) / (4 * dy * dy);
    double uxy = (U(pt.x + dx, pt.y + dy) - U(pt.x + dx, pt.y - dy) -
                  U(pt.x - dx, pt.y + dy) + U(pt.x - dx, pt.y - dy)) /
                 (4 * dx * dy);

    CurvatureSample s;
    s.grad_norm = std::hypot(ux, uy);
    if (s.grad_norm < grad_floor) {
        s.degenerate = true;
        return s;
    }
    // components of the Hessian in the (normal, tangent) frame
    double nxv = ux / s.grad_norm, nyv = uy / s.grad_norm;
    double txv = -nyv, tyv = nxv;
    double a_nn = nxv * (uxx * nxv + uxy * nyv) + nyv * (uxy * nxv + uyy * nyv);
    double a_nt = txv * (uxx * nxv + uxy * nyv) + tyv * (uxy * nxv + uyy * nyv);
    double a_tt = txv * (uxx * txv + uxy * tyv) + tyv * (uxy * txv + uyy * tyv);
    s.H = a_tt / s.grad_norm;
    s.tangential = a_nt / s.grad_norm;
    s.B = std::sqrt(std::max(0.0, a_tt * a_tt + a_nt * a_nt)) / s.grad_norm;
    (void)a_nn;
    return s;
}

std::pair<double, double> curvature_H_and_tangential(const ScalarField2D& f, Point pt,
                                                     double b, double grad_floor) {
    CurvatureSample s = curvature_B(f, pt, b, grad_floor);
    return {s.H, s.tangential};
}

DistanceResult signed_distance(const InterfaceCurve& c, Point pt) {
    if (c.pts.size() < 2) throw std::invalid_argument("signed_distance: degenerate curve");
    double best = 1e300;
    size_t bi = 0;
    double bw = 0.0;
    Point bf{};

    size_t lo = 0, hi = c.pts.size() - 1;
    if (c.graph_valid && c.pts.size() > 32) {
        // graphs: the foot's x is near pt.x; bracket by binary search and
        // scan a window sized by the worst-case distance
        double dspan = 0.0;
        // crude upper bound on |z| using the nearest graph node
        size_t i0 = graph_node(c.gx, pt.x);
        dspan = std::hypot(pt.x - c.gx[i0], pt.y - c.gf[i0]);
        double pad = dspan * 1.5 + 2.0 * (c.gx.back() - c.gx.front()) / double(c.gx.size());
        double xlo = pt.x - pad, xhi = pt.x + pad;
        // map back to polyline vertex indices (polyline may be reversed)
        bool reversed = c.pts.front().x > c.pts.back().x;
        auto xval = [&](size_t k) { return c.pts[k].x; };
        size_t a = 0, b = c.pts.size() - 1;
        if (!reversed) {
            while (a < b && xval(a + 1) < xlo) ++a;
            while (b > a && xval(b - 1) > xhi) --b;
        } else {
            while (a < b && xval(a + 1) > xhi) ++a;
            while (b > a && xval(b - 1) < xlo) --b;
        }
        lo = a;
        hi = b;
        if (hi <= lo) { lo = 0; hi = c.pts.size() - 1; }
    }

    for (size_t i = lo; i < hi; ++i) {
        const Point &A = c.pts[i], &B = c.pts[i + 1];
        double vx = B.x - A.x, vy = B.y - A.y;
        double L2 = vx * vx + vy * vy;
        double w = L2 > 0 ? ((pt.x - A.x) * vx + (pt.y - A.y) * vy) / L2 : 0.0;
        w = std::clamp(w, 0.0, 1.0);
        Point q{A.x + w * vx, A.y + w * vy};
        double d2 = (pt.x - q.x) * (pt.x - q.x) + (pt.y - q.y) * (pt.y - q.y);
        if (d2 < best) {
            best = d2;
            bi = i;
            bw = w;
            bf = q;
        }
    }
    DistanceResult r;
    r.foot = bf;
    double d = std::sqrt(best);
    // sign from the local tangent orientation (positive on the left of the
    // oriented tangent == "above" for graph curves oriented by increasing x)
    const Point &A = c.pts[bi], &B = c.pts[bi + 1];
    double cross = (B.x - A.x) * (pt.y - A.y) - (B.y - A.y) * (pt.x - A.x);
    bool reversed = c.graph_valid && c.pts.front().x > c.pts.back().x;
    double sgn = cross >= 0 ? 1.0 : -1.0;
    if (reversed) sgn = -sgn;
    r.z = sgn * d;
    r.y_foot = c.graph_valid ? bf.x : c.arclen[bi] + bw * (c.arclen[bi + 1] - c.arclen[bi]);
    return r;
}

double fermi_metric(const InterfaceCurve& c, double y, double z) {
    if (!c.graph_valid) throw std::invalid_argument("fermi_metric: graph form required");
    double kmax = 0.0;
    for (size_t i = 1; i + 1 < c.gx.size(); ++i)
        kmax = std::max(kmax, std::fabs(c.graph_curvature(c.gx[i])));
    if (kmax > 0 && std::fabs(z) >= 0.9 / kmax)
        throw std::invalid_argument("fermi_metric: z beyond focal distance");
    double A = c.graph_curvature(y);
    double lambda0 = 1.0; // scalar reduction of the z=0 metric factor
    double m = 1.0 - z * A;
    return lambda0 * m * m;
}

namespace {

double arclength_at(const InterfaceCurve& c, Point q) {
    // arclength of the nearest polyline point to q
    double best = 1e300, s = 0.0;
    for (size_t i = 0; i + 1 < c.pts.size(); ++i) {
        const Point &A = c.pts[i], &B = c.pts[i + 1];
        double vx = B.x - A.x, vy = B.y - A.y;
        double L2 = vx * vx + vy * vy;
        double w = L2 > 0 ? ((q.x - A.x) * vx + (q.y - A.y) * vy) / L2 : 0.0;
        w = std::clamp(w, 0.0, 1.0);
        double qx = A.x + w * vx, qy = A.y + w * vy;
        double d2 = (q.x - qx) * (q.x - qx) + (q.y - qy) * (q.y - qy);
        if (d2 < best) {
            best = d2;
            s = c.arclen[i] + w * (c.arclen[i + 1] - c.arclen[i]);
        }
    }
    return s;
}

} // namespace

DistanceComparisonReport distance_comparison_check(const InterfaceCurve& ca,
                                                   const InterfaceCurve& cb, Point pt,
                                                   double epsilon, double K) {
    DistanceComparisonReport rep;
    double L = std::fabs(std::log(epsilon));
    auto da_X = signed_distance(ca, pt);
    auto db_X = signed_distance(cb, pt);
    rep.precondition_ok =
        std::fabs(da_X.z) <= K * L && std::fabs(db_X.z) <= K * L;

    auto db_of_PaX = signed_distance(cb, da_X.foot);
    auto da_of_PbX = signed_distance(ca, db_X.foot);

    // r1: arclength distance on Gamma_b between Pi_b(Pi_a(X)) and Pi_b(X)
    double s1 = arclength_at(cb, db_of_PaX.foot);
    double s2 = arclength_at(cb, db_X.foot);
    rep.residual[0] = std::fabs(s1 - s2);
    // r2
    rep.residual[1] = std::fabs(db_of_PaX.z + da_of_PbX.z);
    // r3
    rep.residual[2] = std::fabs(da_X.z - db_X.z + db_of_PaX.z);
    // r4
    rep.residual[3] = std::fabs(da_X.z - db_X.z - da_of_PbX.z);
    // r5: grad d = (X - foot)/d, with the curve normal at d = 0
    auto grad_d = [](const DistanceResult& d, Point X) {
        double gx = X.x - d.foot.x, gy = X.y - d.foot.y;
        double n = std::hypot(gx, gy);
        if (n < 1e-14) return Point{0.0, 1.0};
        double s = d.z >= 0 ? 1.0 : -1.0;
        return Point{s * gx / n, s * gy / n};
    };
    Point ga = grad_d(da_X, pt), gb = grad_d(db_X, pt);
    rep.residual[4] = 1.0 - (ga.x * gb.x + ga.y * gb.y);

    double norm = std::sqrt(epsilon) * std::pow(L, 1.5);
    for (int i = 0; i < 5; ++i) rep.normalized[i] = rep.residual[i] / norm;
    return rep;
}

void save_curves_csv(const std::vector<InterfaceCurve>& curves, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("save_curves_csv: cannot open " + path);
    std::fprintf(f, "x,y\n");
    for (size_t c = 0; c < curves.size(); ++c) {
        if (c) std::fprintf(f, "\n");
        for (const auto& p : curves[c].pts) std::fprintf(f, "%.17g,%.17g\n", p.x, p.y);
    }
    std::fclose(f);
}

} // namespace aclab
