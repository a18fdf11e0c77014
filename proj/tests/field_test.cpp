#include <doctest.h>

#include <cmath>
#include <random>

#include "aclab/field.hpp"
#include "aclab/profile1d.hpp"

using namespace aclab;

namespace {
constexpr double kSqrt2 = 1.4142135623730950488;

const Profile& prof20() {
    static Profile p = solve_profile(make_quartic(), 20.0, 0.01);
    return p;
}
} // namespace

TEST_CASE("residual vanishes on constants at the wells") {
    Potential p = make_quartic();
    for (double c : {1.0, -1.0, 0.0}) {
        ScalarField2D f = make_field(16, 16, 0.1, 0.1, 0, 0, 0.1, false,
                                     [c](double, double) { return c; });
        auto r = ac_residual(f, p);
        for (double v : r) CHECK(std::fabs(v) <= 1e-14); // W'(c) = 0 for all three
    }
}

TEST_CASE("residual of the sampled profile is second order") {
    Potential p = make_quartic();
    const Profile& prof = prof20();
    double eps = 0.1;
    auto make = [&](double hy) {
        std::size_t ny = std::size_t(1.0 / hy) + 1;
        return make_field(12, ny, 0.05, hy, 0, 0, eps, true, [&](double, double y) {
            return prof.g_at((y - 0.5) / eps);
        });
    };
    auto resmax = [&](const ScalarField2D& f) {
        double m = 0;
        auto r = ac_residual(f, p);
        for (std::size_t j = 1; j + 1 < f.ny; ++j)
            for (std::size_t i = 0; i < f.nx; ++i)
                m = std::max(m, std::fabs(r[j * f.nx + i]));
        return m;
    };
    double r1 = resmax(make(eps / 10.0));
    double r2 = resmax(make(eps / 20.0));
    CHECK(r2 <= 0.3 * r1); // second order
}

TEST_CASE("newton converges from the near-exact profile guess") {
    Potential p = make_quartic();
    double eps = 0.05;
    std::size_t ny = 201;
    ScalarField2D f = make_field(32, ny, 0.01, 0.005, 0, 0, eps, true, [&](double, double y) {
        return std::tanh((y - 0.5) / (kSqrt2 * eps));
    });
    SolveReport rep = solve_newton(f, p, 1e-10, 25);
    CHECK(rep.converged);
    CHECK(rep.iterations <= 8);
    CHECK(rep.final_residual <= 1e-10);
    // re-evaluating the residual reproduces the report value
    CHECK(std::fabs(residual_norm(f, p) - rep.final_residual) <= 1e-14);
    CHECK(!f.u.empty());
    for (double v : f.u) CHECK(std::fabs(v) <= 1.0 + 1e-6);
}

TEST_CASE("newton finds the midline interface from zero init") {
    Potential p = make_quartic();
    double eps = 0.1;
    ScalarField2D f = make_field(24, 101, 0.02, 0.01, 0, 0, eps, true, [&](double, double y) {
        if (y <= 0.0) return -1.0;
        if (y >= 1.0) return 1.0;
        return 0.0;
    });
    SolveReport rep = solve_newton(f, p, 1e-10, 60);
    CHECK(rep.converged);
    // interface within one cell of the strip midline
    for (std::size_t i = 0; i < f.nx; ++i) {
        double prev = f.at(i, 0);
        double crossing = -1;
        for (std::size_t j = 1; j < f.ny; ++j) {
            double cur = f.at(i, j);
            if (prev < 0 && cur >= 0) crossing = f.y_of(j);
            prev = cur;
        }
        CHECK(std::fabs(crossing - 0.5) <= 2.0 * f.hy);
    }
}

TEST_CASE("gradient flow dissipates the discrete energy") {
    Potential p = make_quartic();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unif(-0.1, 0.1);
    ScalarField2D f = make_field(32, 51, 0.02, 0.02, 0, 0, 0.2, true, [&](double, double y) {
        if (y <= 0.0) return -1.0;
        if (y >= 1.0) return 1.0;
        return 0.0;
    });
    for (std::size_t j = 1; j + 1 < f.ny; ++j)
        for (std::size_t i = 0; i < f.nx; ++i) f.at(i, j) = unif(rng);
    double dt = gradient_flow_dt_bound(f, p);
    CHECK_THROWS(gradient_flow(f, p, dt * 1.5, 1));
    double e_prev = discrete_energy(f, p);
    for (int s = 0; s < 40; ++s) {
        gradient_flow(f, p, dt, 1);
        double e = discrete_energy(f, p);
        CHECK(e <= e_prev + 1e-12);
        e_prev = e;
    }
}

TEST_CASE("gradient flow keeps equilibria fixed") {
    Potential p = make_quartic();
    ScalarField2D f = make_field(16, 21, 0.05, 0.05, 0, 0, 0.2, false,
                                 [](double, double) { return 1.0; });
    ScalarField2D g = f;
    gradient_flow(f, p, gradient_flow_dt_bound(f, p), 25);
    for (std::size_t k = 0; k < f.u.size(); ++k) CHECK(f.u[k] == g.u[k]);
}

TEST_CASE("gradient flow stays near the profile equilibrium") {
    Potential p = make_quartic();
    double eps = 0.1;
    double hy = eps / 64.0;
    std::size_t ny = std::size_t(std::llround(1.0 / hy)) + 1;
    ScalarField2D f = make_field(8, ny, 0.05, hy, 0, 0, eps, true, [&](double, double y) {
        return std::tanh((y - 0.5) / (kSqrt2 * eps));
    });
    ScalarField2D f0 = f;
    gradient_flow(f, p, gradient_flow_dt_bound(f, p), 100);
    double drift = 0.0;
    for (std::size_t k = 0; k < f.u.size(); ++k)
        drift = std::max(drift, std::fabs(f.u[k] - f0.u[k]));
    CHECK(drift <= 1e-6);
}

TEST_CASE("energy of interfaces matches sigma0 per unit length") {
    Potential p = make_quartic();
    const Profile& prof = prof20();
    double eps = 0.05;
    // single interface across a periodic strip of width 0.5
    ScalarField2D f = make_field(48, 321, 0.5 / 48, 1.0 / 320, 0, 0, eps, true,
                                 [&](double, double y) { return prof.g_at((y - 0.5) / eps); });
    double E = energy(f, p, {0.0, 0.5, 0.0, 1.0});
    CHECK(std::fabs(E - prof.sigma0 * 0.5) <= 0.05 * prof.sigma0 * 0.5);

    // two far-apart interfaces: additivity
    ScalarField2D g2 = make_field(48, 321, 0.5 / 48, 1.0 / 320, 0, 0, eps, true,
                                  [&](double, double y) {
                                      return prof.g_at((y - 0.25) / eps) -
                                             prof.g_at((y - 0.75) / eps) - 1.0;
                                  });
    double E2 = energy(g2, p, {0.0, 0.5, 0.0, 1.0});
    CHECK(std::fabs(E2 - 2.0 * prof.sigma0 * 0.5) <= 0.05 * 2.0 * prof.sigma0 * 0.5);

    // u == 1: zero energy
    ScalarField2D one = make_field(16, 16, 0.05, 0.05, 0, 0, eps, false,
                                   [](double, double) { return 1.0; });
    CHECK(energy(one, p, {0.0, 0.5, 0.0, 0.5}) <= 1e-14);
}

TEST_CASE("modica quantity") {
    Potential p = make_quartic();
    double eps = 0.05;
    // exact profile (closed form, smooth) on a fine evaluation grid
    double hy = eps / 128.0;
    std::size_t ny = std::size_t(std::llround(0.5 / hy)) + 1;
    ScalarField2D f = make_field(8, ny, 0.05, hy, 0, 0, eps, true, [&](double, double y) {
        return std::tanh((y - 0.25) / (kSqrt2 * eps));
    });
    CHECK(std::fabs(modica_deficit(f, p)) <= 1e-6);

    // constant field: P = W(0)/eps
    ScalarField2D zero = make_field(16, 16, 0.05, 0.05, 0, 0, eps, false,
                                    [](double, double) { return 0.0; });
    CHECK(modica_deficit(zero, p) == doctest::Approx(0.25 / eps).epsilon(1e-12));
}

TEST_CASE("pohozaev residual") {
    Potential p = make_quartic();
    const Profile& prof = prof20();
    // u == 1: both sides vanish
    ScalarField2D one = make_field(41, 41, 0.05, 0.05, -1.0, -1.0, 0.1, false,
                                   [](double, double) { return 1.0; });
    CHECK(pohozaev_residual(one, p, 0.8, 0.0, 0.0) <= 1e-14);
    CHECK_THROWS(pohozaev_residual(one, p, 5.0, 0.0, 0.0));

    // profile far from the disc: exponentially small residual
    double eps = 0.05;
    ScalarField2D f = make_field(81, 81, 0.025, 0.025, -1.0, -1.0, eps, false,
                                 [&](double, double y) { return prof.g_at((y + 0.8) / eps); });
    CHECK(pohozaev_residual(f, p, 0.5, 0.0, 0.3) <= 1e-8);

    // radial cap: residual decreases under refinement
    auto cap = [&](std::size_t n) {
        double R = 0.5;
        ScalarField2D g = make_field(n, n, 2.0 / double(n - 1), 2.0 / double(n - 1), -1.0,
                                     -1.0, eps, false, [&](double x, double y) {
                                         return prof.g_at((std::hypot(x, y) - R) / eps);
                                     });
        return pohozaev_residual(g, p, 0.8, 0.0, 0.0);
    };
    double c1 = cap(161), c2 = cap(321);
    CHECK(c2 < c1);
}

TEST_CASE("field snapshot round trip") {
    ScalarField2D f = make_field(17, 13, 0.03, 0.07, 0.2, -0.4, 0.12, false,
                                 [](double x, double y) { return std::sin(x + 2 * y); });
    save_field(f, "/tmp/aclab_field.acf");
    ScalarField2D g = load_field("/tmp/aclab_field.acf", f.x0, f.y0);
    CHECK(g.nx == f.nx);
    CHECK(g.ny == f.ny);
    CHECK(g.hx == f.hx);
    CHECK(g.hy == f.hy);
    CHECK(g.epsilon == f.epsilon);
    for (std::size_t k = 0; k < f.u.size(); ++k) CHECK(g.u[k] == f.u[k]);
    save_field_csv(f, "/tmp/aclab_field.csv");
    CHECK_THROWS(load_field("/tmp/aclab_field.csv")); // bad magic
}

TEST_CASE("modica positivity beyond the discretization estimate") {
    Potential p = make_quartic();
    double eps = 0.05;
    ScalarField2D f = make_field(48, 201, 0.5 / 48, eps / 10.0, 0, 0, eps, true,
                                 [&](double, double y) {
                                     return std::tanh((y - 0.5) / (kSqrt2 * eps));
                                 });
    solve_newton(f, p, 1e-10, 25);
    CHECK(modica_deficit_beyond_estimate(f, p) >= -1e-10);
}
