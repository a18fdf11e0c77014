#include "aclab/toda.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace aclab {

namespace {
constexpr double kSqrt2 = 1.4142135623730950488;

// pair forces applied antisymmetrically so momentum telescopes exactly
void accel(int Q, double A1, double A2, const std::vector<double>& f,
           std::vector<double>& a) {
    a.assign(Q, 0.0);
    for (int k = 0; k + 1 < Q; ++k) {
        double e = std::exp(-kSqrt2 * (f[k + 1] - f[k]));
        a[k] -= A2 * e;     // lower layer pushed down
        a[k + 1] += A1 * e; // upper layer pushed up
    }
}

} // namespace

double TodaState::hamiltonian(std::size_t i) const {
    double E = 0.0;
    for (int a = 0; a < Q; ++a) E += 0.5 * fp[a][i] * fp[a][i];
    double A = 0.5 * (A1 + A2);
    for (int a = 0; a + 1 < Q; ++a)
        E += A / kSqrt2 * std::exp(-kSqrt2 * (f[a + 1][i] - f[a][i]));
    return E;
}

double TodaState::momentum(std::size_t i) const {
    double P = 0.0;
    for (int a = 0; a < Q; ++a) P += fp[a][i];
    return P;
}

double TodaState::hamiltonian_drift() const {
    if (y.empty()) return 0.0;
    double e0 = hamiltonian(0), lo = e0, hi = e0;
    for (std::size_t i = 1; i < y.size(); ++i) {
        double e = hamiltonian(i);
        lo = std::min(lo, e);
        hi = std::max(hi, e);
    }
    return hi - lo;
}

std::vector<std::vector<double>> toda_rhs(const TodaState& s) {
    std::vector<std::vector<double>> out(s.Q, std::vector<double>(s.y.size(), 0.0));
    std::vector<double> fcol(s.Q), acol;
    for (std::size_t i = 0; i < s.y.size(); ++i) {
        for (int a = 0; a < s.Q; ++a) fcol[a] = s.f[a][i];
        accel(s.Q, s.A1, s.A2, fcol, acol);
        for (int a = 0; a < s.Q; ++a) out[a][i] = acol[a];
    }
    return out;
}

TodaState integrate(const TodaState& s, double y_span, double step) {
    if (s.Q < 1 || s.y.empty()) throw std::invalid_argument("integrate: empty state");
    if (!(step > 0.0)) throw std::invalid_argument("integrate: step > 0 required");
    const int Q = s.Q;
    std::size_t last = s.y.size() - 1;
    std::vector<double> f(Q), fp(Q), a(Q), a_new(Q);
    for (int k = 0; k < Q; ++k) {
        f[k] = s.f[k][last];
        fp[k] = s.fp[k][last];
    }
    std::size_t nsteps = std::size_t(std::llround(y_span / step));

    TodaState out;
    out.Q = Q;
    out.A1 = s.A1;
    out.A2 = s.A2;
    out.y.reserve(nsteps + 1);
    out.f.assign(Q, {});
    out.fp.assign(Q, {});
    double y0 = s.y[last];
    auto push = [&](double yv) {
        out.y.push_back(yv);
        for (int k = 0; k < Q; ++k) {
            out.f[k].push_back(f[k]);
            out.fp[k].push_back(fp[k]);
        }
    };
    push(y0);
    accel(Q, s.A1, s.A2, f, a);
    for (std::size_t n = 1; n <= nsteps; ++n) {
        // velocity Verlet
        for (int k = 0; k < Q; ++k) f[k] += step * fp[k] + 0.5 * step * step * a[k];
        accel(Q, s.A1, s.A2, f, a_new);
        for (int k = 0; k < Q; ++k) fp[k] += 0.5 * step * (a[k] + a_new[k]);
        a.swap(a_new);
        bool collide = false;
        for (int k = 0; k + 1 < Q; ++k)
            if (f[k + 1] - f[k] < 1e-3) collide = true;
        if (collide) { // halt before recording the violating sample
            out.truncated = true;
            break;
        }
        push(y0 + double(n) * step);
    }
    return out;
}

double symmetric_gap_closed_form(double y, double gap_at_origin, double A1, double A2) {
    double b = gap_at_origin;
    double a2 = (A1 + A2) * std::exp(-kSqrt2 * b) / kSqrt2;
    double a = std::sqrt(a2);
    // log cosh without overflow
    double ay = std::fabs(a * y);
    double logcosh = ay + std::log1p(std::exp(-2.0 * ay)) - std::log(2.0);
    return kSqrt2 * logcosh + b;
}

TodaState solve_symmetric_bvp(int Q, double gap_at_origin, double y_span, double step,
                              double A1, double A2) {
    if (Q != 2 && Q != 3) throw std::invalid_argument("solve_symmetric_bvp: Q in {2,3}");
    if (!(gap_at_origin > 0)) throw std::invalid_argument("solve_symmetric_bvp: gap > 0");

    // Even solutions are the y=0 initial value problem with f' = 0; build the
    // right half and mirror it.
    TodaState seed;
    seed.Q = Q;
    seed.A1 = A1;
    seed.A2 = A2;
    seed.y = {0.0};
    seed.f.assign(Q, {0.0});
    seed.fp.assign(Q, {0.0});
    if (Q == 2) {
        seed.f[0][0] = -0.5 * gap_at_origin;
        seed.f[1][0] = 0.5 * gap_at_origin;
    } else {
        seed.f[0][0] = -gap_at_origin;
        seed.f[1][0] = 0.0;
        seed.f[2][0] = gap_at_origin;
    }
    TodaState right = integrate(seed, 0.5 * y_span, step);
    if (right.truncated) throw std::runtime_error("solve_symmetric_bvp: layer collision");

    TodaState out;
    out.Q = Q;
    out.A1 = A1;
    out.A2 = A2;
    std::size_t n = right.y.size();
    out.y.resize(2 * n - 1);
    out.f.assign(Q, std::vector<double>(2 * n - 1));
    out.fp.assign(Q, std::vector<double>(2 * n - 1));
    for (std::size_t i = 0; i < n; ++i) {
        out.y[n - 1 + i] = right.y[i];
        out.y[n - 1 - i] = -right.y[i];
        for (int k = 0; k < Q; ++k) {
            out.f[k][n - 1 + i] = right.f[k][i];
            out.f[k][n - 1 - i] = right.f[k][i];
            out.fp[k][n - 1 + i] = right.fp[k][i];
            out.fp[k][n - 1 - i] = -right.fp[k][i];
        }
    }
    return out;
}

ProjectedInterfaces project_to_interfaces(const TodaState& s, double epsilon, int alpha0) {
    if (!(epsilon > 0) || epsilon > 0.2)
        throw std::invalid_argument("project_to_interfaces: epsilon outside (0, 0.2]");
    ProjectedInterfaces out;
    out.epsilon = epsilon;
    double L = std::fabs(std::log(epsilon));
    double se = std::sqrt(epsilon);
    out.x.resize(s.y.size());
    out.f.assign(s.Q, std::vector<double>(s.y.size()));
    for (std::size_t i = 0; i < s.y.size(); ++i) {
        out.x[i] = se * s.y[i];
        for (int a = 0; a < s.Q; ++a) {
            double alpha_idx = double(a + 1 - alpha0);
            out.f[a][i] = epsilon * (s.f[a][i] + 0.5 * kSqrt2 * alpha_idx * L);
        }
    }
    return out;
}

void save_toda_csv(const TodaState& s, const std::string& path) {
    std::FILE* fl = std::fopen(path.c_str(), "w");
    if (!fl) throw std::runtime_error("save_toda_csv: cannot open " + path);
    std::fprintf(fl, "y");
    for (int a = 0; a < s.Q; ++a) std::fprintf(fl, ",f_%d", a + 1);
    std::fprintf(fl, "\n");
    for (std::size_t i = 0; i < s.y.size(); ++i) {
        std::fprintf(fl, "%.17g", s.y[i]);
        for (int a = 0; a < s.Q; ++a) std::fprintf(fl, ",%.17g", s.f[a][i]);
        std::fprintf(fl, "\n");
    }
    std::fclose(fl);
}

} // namespace aclab
