#include "aclab/profile1d.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "aclab/linalg.hpp"
#include <json.hpp>

namespace aclab {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;

// 8-point Gauss-Legendre nodes/weights on [-1,1].
const double kGx[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                       -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                       0.7966664774136267,  0.9602898564975363};
const double kGw[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                       0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                       0.2223810344533745, 0.1012285362903763};

// One side of the heteroclinic, parametrized by s = -log(1 -+ g) so that
// g = side*(1 - exp(-s)); ds-integrand of the first integral is smooth and
// bounded all the way into the well.
struct SideMap {
    const Potential* p;
    double side; // +1 or -1

    double integrand(double s) const {
        double q = std::exp(-s);
        // so close to the well that 1-q rounds to 1: use the quadratic
        // behaviour W(1 -+ q) ~ W''(well) q^2 / 2 instead
        if (q < 1e-12) return 1.0 / std::sqrt(p->Wpp(side));
        double g = side * (1.0 - q);
        double w2 = 2.0 * p->W(g);
        if (!(w2 > 0.0))
            throw std::runtime_error("solve_profile: W vanishes in the interior");
        return q / std::sqrt(w2);
    }

    // cumulative |t|(s) on panel edges
    std::vector<double> s_edges, t_edges;

    void build(double s_max, double panel) {
        s_edges.clear();
        t_edges.clear();
        double t = 0.0;
        s_edges.push_back(0.0);
        t_edges.push_back(0.0);
        for (double s0 = 0.0; s0 < s_max; s0 += panel) {
            double s1 = std::min(s0 + panel, s_max);
            double half = 0.5 * (s1 - s0), mid = 0.5 * (s0 + s1);
            double acc = 0.0;
            for (int q = 0; q < 8; ++q) acc += kGw[q] * integrand(mid + half * kGx[q]);
            t += acc * half;
            s_edges.push_back(s1);
            t_edges.push_back(t);
        }
    }

    double t_of_s(double s) const {
        auto it = std::upper_bound(s_edges.begin(), s_edges.end(), s);
        size_t i = it == s_edges.begin() ? 0 : size_t(it - s_edges.begin()) - 1;
        if (i >= s_edges.size() - 1) i = s_edges.size() - 2;
        double s0 = s_edges[i];
        double half = 0.5 * (s - s0), mid = 0.5 * (s + s0);
        double acc = 0.0;
        for (int q = 0; q < 8; ++q) acc += kGw[q] * integrand(mid + half * kGx[q]);
        return t_edges[i] + acc * half;
    }

    // Invert t(s) = target by bracketed Newton.
    double s_of_t(double target) const {
        auto it = std::lower_bound(t_edges.begin(), t_edges.end(), target);
        size_t i = it == t_edges.begin() ? 1 : size_t(it - t_edges.begin());
        if (i >= t_edges.size()) i = t_edges.size() - 1;
        double lo = s_edges[i - 1], hi = s_edges[i];
        double s = 0.5 * (lo + hi);
        for (int iter = 0; iter < 60; ++iter) {
            double f = t_of_s(s) - target;
            if (f > 0.0) hi = s;
            else lo = s;
            double ds = -f / integrand(s);
            double snew = s + ds;
            if (!(snew > lo) || !(snew < hi)) snew = 0.5 * (lo + hi);
            if (std::fabs(snew - s) < 1e-15 * (1.0 + std::fabs(s))) { s = snew; break; }
            s = snew;
        }
        return s;
    }
};

double lsq_tail_fit(const Profile& prof, int side, double* slope_out) {
    // fit log|side - g| = intercept - sqrt(2) t on t in [T/2, 3T/4]
    double lo = prof.T_max / 2.0, hi = 0.75 * prof.T_max;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (size_t i = 0; i < prof.size(); ++i) {
        double tt = side > 0 ? prof.t[i] : -prof.t[i];
        if (tt < lo || tt > hi) continue;
        double q = side > 0 ? 1.0 - prof.g[i] : prof.g[i] + 1.0;
        if (!(q > 0.0)) continue;
        double x = tt, y = std::log(q);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++n;
    }
    if (n < 8) throw std::runtime_error("tail_constants: window too thin");
    double denom = n * sxx - sx * sx;
    double slope = (n * sxy - sx * sy) / denom;
    double intercept = (sy * sxx - sx * sxy) / denom;
    if (slope_out) *slope_out = slope;
    return std::exp(intercept);
}

} // namespace

double Profile::g_at(double s) const {
    if (s > T_max) return 1.0 - A_plus * std::exp(-kSqrt2 * s);
    if (s < -T_max) return -1.0 + A_minus * std::exp(-kSqrt2 * std::fabs(s));
    double x = (s + T_max) / h_t;
    size_t i = std::min(size() - 2, size_t(std::max(0.0, std::floor(x))));
    double w = x - double(i);
    return (1.0 - w) * g[i] + w * g[i + 1];
}

double Profile::gp_at(double s) const {
    if (s > T_max) return kSqrt2 * A_plus * std::exp(-kSqrt2 * s);
    if (s < -T_max) return kSqrt2 * A_minus * std::exp(-kSqrt2 * std::fabs(s));
    double x = (s + T_max) / h_t;
    size_t i = std::min(size() - 2, size_t(std::max(0.0, std::floor(x))));
    double w = x - double(i);
    return (1.0 - w) * gp[i] + w * gp[i + 1];
}

Profile solve_profile(const Potential& p, double T_max, double h_t) {
    if (T_max < 10.0) throw std::invalid_argument("solve_profile: T_max >= 10 required");
    if (h_t > 0.01) throw std::invalid_argument("solve_profile: h_t <= 0.01 required");

    Profile prof;
    prof.T_max = T_max;
    prof.h_t = h_t;
    prof.pot = p;

    SideMap plus{&p, +1.0, {}, {}}, minus{&p, -1.0, {}, {}};
    double s_max = kSqrt2 * T_max + 8.0;
    plus.build(s_max, 0.05);
    minus.build(s_max, 0.05);

    size_t n = size_t(std::llround(2.0 * T_max / h_t)) + 1;
    prof.t.resize(n);
    prof.g.resize(n);
    prof.gp.resize(n);
    prof.gpp.resize(n);
    for (size_t i = 0; i < n; ++i) {
        double t = -T_max + double(i) * h_t;
        prof.t[i] = t;
        double g;
        if (t >= 0.0) {
            double s = plus.s_of_t(t);
            g = 1.0 - std::exp(-s);
        } else {
            double s = minus.s_of_t(-t);
            g = -(1.0 - std::exp(-s));
        }
        prof.g[i] = g;
        prof.gp[i] = std::sqrt(2.0 * p.W(g));
        prof.gpp[i] = p.Wp(g);
    }

    prof.sigma0 = energy_sigma0(prof);
    auto tails = tail_constants(prof);
    prof.A_plus = tails.first;
    prof.A_minus = tails.second;
    prof.mu = spectral_gap(prof);
    return prof;
}

double energy_sigma0(const Profile& prof) {
    // Exponentially decaying integrand: the trapezoid rule is spectrally
    // accurate (Euler-Maclaurin boundary terms vanish).
    double sum = 0.0;
    for (size_t i = 0; i < prof.size(); ++i) {
        double v = 0.5 * prof.gp[i] * prof.gp[i] + prof.pot.W(prof.g[i]);
        sum += (i == 0 || i + 1 == prof.size()) ? 0.5 * v : v;
    }
    return sum * prof.h_t;
}

std::pair<double, double> tail_constants(const Profile& prof) {
    double slope_p = 0.0, slope_m = 0.0;
    double A_plus = lsq_tail_fit(prof, +1, &slope_p);
    double A_minus = lsq_tail_fit(prof, -1, &slope_m);
    if (std::fabs(slope_p + kSqrt2) > 0.01 * kSqrt2 ||
        std::fabs(slope_m + kSqrt2) > 0.01 * kSqrt2)
        throw std::runtime_error("tail_constants: fitted decay rate deviates from sqrt(2)");
    return {A_plus, A_minus};
}

Spectrum1D profile_spectrum(const Profile& prof) {
    const size_t n = prof.size() - 2; // interior nodes, Dirichlet ends
    const double h = prof.h_t;
    std::vector<double> wpp(n);
    for (size_t i = 0; i < n; ++i) wpp[i] = prof.pot.Wpp(prof.g[i + 1]);

    auto apply = [&](const double* v, double* out) {
        const double c = 1.0 / (h * h);
        for (size_t i = 0; i < n; ++i) {
            double s = (2.0 * c + wpp[i]) * v[i];
            if (i > 0) s -= c * v[i - 1];
            if (i + 1 < n) s -= c * v[i + 1];
            out[i] = s;
        }
    };
    auto assemble = [&](double shift, BandedLDLT& m) {
        m = BandedLDLT(n, 1);
        const double c = 1.0 / (h * h);
        for (size_t i = 0; i < n; ++i) {
            m.at(i, 0) = 2.0 * c + wpp[i] - shift;
            if (i + 1 < n) m.at(i, 1) = -c;
        }
    };

    double wpp_min = *std::min_element(wpp.begin(), wpp.end());
    EigResult r = lowest_eigenpairs_banded(n, apply, assemble, wpp_min - 1.0, 2, 1e-10);
    if (!r.converged) throw std::runtime_error("profile_spectrum: eigensolve failed");

    Spectrum1D s;
    s.lambda0 = r.values[0];
    s.lambda1 = r.values[1];
    s.v0 = r.vectors[0];
    s.v1 = r.vectors[1];
    return s;
}

double spectral_gap(const Profile& prof) {
    Spectrum1D s = profile_spectrum(prof);
    if (std::fabs(s.lambda0) > 1e-4)
        throw std::runtime_error("spectral_gap: lowest eigenvalue not zero (grid too coarse)");
    // eigenvector must be parallel to g'
    double dot = 0.0, n_v = 0.0, n_g = 0.0;
    for (size_t i = 0; i < s.v0.size(); ++i) {
        dot += s.v0[i] * prof.gp[i + 1];
        n_v += s.v0[i] * s.v0[i];
        n_g += prof.gp[i + 1] * prof.gp[i + 1];
    }
    double cosang = std::fabs(dot) / std::sqrt(n_v * n_g);
    if (cosang < 1.0 - 1e-6)
        throw std::runtime_error("spectral_gap: zero mode not parallel to g'");
    return s.lambda1;
}

namespace {

// quintic smoothstep bump: 1 on [-1,1], 0 outside (-2,2), C^2,
// |zeta'| + |zeta''| <= 16
double zeta_bump(double x, double* d1 = nullptr, double* d2 = nullptr) {
    double a = std::fabs(x), sgn = x >= 0 ? 1.0 : -1.0;
    if (a <= 1.0) {
        if (d1) *d1 = 0.0;
        if (d2) *d2 = 0.0;
        return 1.0;
    }
    if (a >= 2.0) {
        if (d1) *d1 = 0.0;
        if (d2) *d2 = 0.0;
        return 0.0;
    }
    double r = a - 1.0;
    double r2 = r * r, r3 = r2 * r;
    double S = ((6.0 * r - 15.0) * r + 10.0) * r3;
    double Sp = ((30.0 * r - 60.0) * r + 30.0) * r2;
    double Spp = ((120.0 * r - 180.0) * r + 60.0) * r;
    if (d1) *d1 = -sgn * Sp;
    if (d2) *d2 = -Spp;
    return 1.0 - S;
}

} // namespace

CutoffProfile cutoff_profile(const Profile& prof, double epsilon) {
    if (!(epsilon > 0.0) || epsilon > 0.2)
        throw std::invalid_argument("cutoff_profile: epsilon outside (0, 0.2]");
    double L = std::fabs(std::log(epsilon));
    if (6.0 * L > prof.T_max)
        throw std::invalid_argument("cutoff_profile: 6|log eps| exceeds T_max");

    CutoffProfile cp;
    cp.epsilon = epsilon;
    cp.r_inner = 3.0 * L;
    cp.r_outer = 6.0 * L;
    cp.T_max = prof.T_max;
    cp.h_t = prof.h_t;
    cp.pot = prof.pot;
    size_t n = prof.size();
    cp.t = prof.t;
    cp.gbar.resize(n);
    cp.gbar_p.resize(n);
    cp.gbar_pp.resize(n);
    cp.xi.resize(n);
    const double scale = 1.0 / cp.r_inner;
    for (size_t i = 0; i < n; ++i) {
        double t = prof.t[i];
        double z1, z2;
        double z = zeta_bump(t * scale, &z1, &z2);
        z1 *= scale;
        z2 *= scale * scale;
        double sg = t >= 0.0 ? 1.0 : -1.0;
        double diff = prof.g[i] - sg;
        cp.gbar[i] = prof.g[i] * z + (1.0 - z) * sg;
        cp.gbar_p[i] = z1 * diff + z * prof.gp[i];
        cp.gbar_pp[i] = z2 * diff + 2.0 * z1 * prof.gp[i] + z * prof.gpp[i];
        cp.xi[i] = cp.gbar_pp[i] - prof.pot.Wp(cp.gbar[i]);
    }
    return cp;
}

double CutoffProfile::gbar_at(double s) const {
    if (s >= T_max) return 1.0;
    if (s <= -T_max) return -1.0;
    double x = (s + T_max) / h_t;
    size_t i = std::min(t.size() - 2, size_t(std::max(0.0, std::floor(x))));
    double w = x - double(i);
    return (1.0 - w) * gbar[i] + w * gbar[i + 1];
}

double CutoffProfile::gbar_p_at(double s) const {
    if (std::fabs(s) >= T_max) return 0.0;
    double x = (s + T_max) / h_t;
    size_t i = std::min(t.size() - 2, size_t(std::max(0.0, std::floor(x))));
    double w = x - double(i);
    return (1.0 - w) * gbar_p[i] + w * gbar_p[i + 1];
}

double CutoffProfile::energy() const {
    double sum = 0.0;
    for (size_t i = 0; i < gbar_p.size(); ++i) {
        double v = gbar_p[i] * gbar_p[i];
        sum += (i == 0 || i + 1 == gbar_p.size()) ? 0.5 * v : v;
    }
    return sum * h_t;
}

void save_profile_csv(const Profile& prof, const std::string& csv_path,
                      const std::string& json_path) {
    std::FILE* f = std::fopen(csv_path.c_str(), "w");
    if (!f) throw std::runtime_error("save_profile_csv: cannot open " + csv_path);
    std::fprintf(f, "t,g,gp,gpp\n");
    for (size_t i = 0; i < prof.size(); ++i)
        std::fprintf(f, "%.17g,%.17g,%.17g,%.17g\n", prof.t[i], prof.g[i], prof.gp[i],
                     prof.gpp[i]);
    std::fclose(f);

    nlohmann::json j;
    j["sigma0"] = prof.sigma0;
    j["A_plus"] = prof.A_plus;
    j["A_minus"] = prof.A_minus;
    j["mu"] = prof.mu;
    j["T_max"] = prof.T_max;
    j["h_t"] = prof.h_t;
    std::ofstream out(json_path);
    out << j.dump(2) << "\n";
}

} // namespace aclab
