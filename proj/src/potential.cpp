#include "aclab/potential.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace aclab {

Potential make_quartic() {
    Potential p;
    p.W = [](double u) { double q = 1.0 - u * u; return 0.25 * q * q; };
    p.Wp = [](double u) { return u * u * u - u; };
    p.Wpp = [](double u) { return 3.0 * u * u - 1.0; };
    p.kind = Potential::Kind::quartic;
    return p;
}

std::vector<InvariantViolation> validate(const Potential& p, double grid_step) {
    if (!(grid_step > 0.0) || grid_step > 0.5)
        throw std::invalid_argument("validate: grid_step outside (0, 0.5]");

    std::vector<InvariantViolation> rep;
    double well_value = std::max(std::fabs(p.W(-1.0)), std::fabs(p.W(1.0)));
    double well_slope = std::max(std::fabs(p.Wp(-1.0)), std::fabs(p.Wp(1.0)));
    double well_curv = std::max(std::fabs(p.Wpp(-1.0) - 2.0), std::fabs(p.Wpp(1.0) - 2.0));

    // Interior positivity and the single critical point at 0.
    double min_interior = 1e300;
    int sign_changes = 0;
    double prev_wp = 0.0;
    bool have_prev = false;
    for (double u = -1.0 + grid_step; u < 1.0 - 0.5 * grid_step; u += grid_step) {
        min_interior = std::min(min_interior, p.W(u));
        double wp = p.Wp(u);
        if (have_prev && prev_wp * wp < 0.0) ++sign_changes;
        if (wp != 0.0) { prev_wp = wp; have_prev = true; }
    }
    double positivity = min_interior > 0.0 ? 0.0 : std::fabs(min_interior) + 1e-300;
    double critical = std::fabs(p.Wp(0.0)) + (sign_changes > 1 ? double(sign_changes - 1) : 0.0);

    rep.push_back({"well value", well_value});
    rep.push_back({"well slope", well_slope});
    rep.push_back({"well curvature", well_curv});
    rep.push_back({"interior positivity", positivity});
    rep.push_back({"critical point", critical});
    return rep;
}

bool is_valid(const Potential& p, double grid_step, double tol) {
    for (const auto& v : validate(p, grid_step))
        if (v.max_violation > tol) return false;
    return true;
}

namespace {

// Monotone cubic-Hermite table: values plus supplied derivatives per knot.
struct HermiteTable {
    std::vector<double> x, y, dy;
    double eval(double q) const {
        if (x.size() < 2) return y.empty() ? 0.0 : y[0];
        auto it = std::upper_bound(x.begin(), x.end(), q);
        size_t i = it == x.begin() ? 0 : size_t(it - x.begin()) - 1;
        if (i >= x.size() - 1) i = x.size() - 2;
        double h = x[i + 1] - x[i];
        double t = (q - x[i]) / h;
        double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * y[i] + (t3 - 2 * t2 + t) * h * dy[i] +
               (-2 * t3 + 3 * t2) * y[i + 1] + (t3 - t2) * h * dy[i + 1];
    }
};

} // namespace

Potential load_potential(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_potential: cannot open " + path);
    std::string header;
    std::getline(in, header);
    auto eq = header.find('=');
    if (eq == std::string::npos || header.substr(0, eq) != "kind")
        throw std::runtime_error("load_potential: missing kind= header");
    std::string kind = header.substr(eq + 1);

    Potential p;
    if (kind == "poly") {
        std::vector<double> c;
        double v;
        while (in >> v) c.push_back(v);
        if (c.empty()) throw std::runtime_error("load_potential: empty poly spec");
        auto horner = [](const std::vector<double>& a, double u) {
            double s = 0.0;
            for (size_t k = a.size(); k-- > 0;) s = s * u + a[k];
            return s;
        };
        std::vector<double> c1(c.size() > 1 ? c.size() - 1 : 1, 0.0);
        for (size_t k = 1; k < c.size(); ++k) c1[k - 1] = double(k) * c[k];
        std::vector<double> c2(c1.size() > 1 ? c1.size() - 1 : 1, 0.0);
        for (size_t k = 1; k < c1.size(); ++k) c2[k - 1] = double(k) * c1[k];
        p.W = [c, horner](double u) { return horner(c, u); };
        p.Wp = [c1, horner](double u) { return horner(c1, u); };
        p.Wpp = [c2, horner](double u) { return horner(c2, u); };
    } else if (kind == "table") {
        auto w = std::make_shared<HermiteTable>();
        auto wp = std::make_shared<HermiteTable>();
        std::vector<double> u_col, w_col, wp_col, wpp_col;
        double u, W, Wp, Wpp;
        while (in >> u >> W >> Wp >> Wpp) {
            u_col.push_back(u);
            w_col.push_back(W);
            wp_col.push_back(Wp);
            wpp_col.push_back(Wpp);
        }
        if (u_col.size() < 2) throw std::runtime_error("load_potential: table too short");
        w->x = u_col; w->y = w_col; w->dy = wp_col;
        wp->x = u_col; wp->y = wp_col; wp->dy = wpp_col;
        // W'' interpolated with finite-difference knot slopes of the Wpp column.
        auto wpp_t = std::make_shared<HermiteTable>();
        wpp_t->x = u_col; wpp_t->y = wpp_col;
        wpp_t->dy.resize(u_col.size());
        for (size_t i = 0; i < u_col.size(); ++i) {
            size_t a = i == 0 ? 0 : i - 1;
            size_t b = i + 1 < u_col.size() ? i + 1 : i;
            wpp_t->dy[i] = (wpp_col[b] - wpp_col[a]) / (u_col[b] - u_col[a]);
        }
        p.W = [w](double q) { return w->eval(q); };
        p.Wp = [wp](double q) { return wp->eval(q); };
        p.Wpp = [wpp_t](double q) { return wpp_t->eval(q); };
    } else {
        throw std::runtime_error("load_potential: unknown kind '" + kind + "'");
    }
    return p;
}

} // namespace aclab
