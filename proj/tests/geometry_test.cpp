#include <doctest.h>

#include <cmath>
#include <random>

#include "aclab/geometry.hpp"
#include "aclab/profile1d.hpp"

using namespace aclab;

namespace {
constexpr double kSqrt2 = 1.4142135623730950488;

const Profile& prof20() {
    static Profile p = solve_profile(make_quartic(), 20.0, 0.01);
    return p;
}
} // namespace

TEST_CASE("level set of a flat profile field is one horizontal line") {
    double eps = 0.05;
    ScalarField2D f = make_field(41, 101, 0.01, 0.01, 0, 0, eps, false,
                                 [&](double, double y) {
                                     return std::tanh((y - 0.503) / (kSqrt2 * eps));
                                 });
    auto ls = extract_levelset(f, 0.0);
    REQUIRE(ls.curves.size() == 1);
    const auto& c = ls.curves[0];
    CHECK(c.graph_valid);
    for (const auto& p : c.pts) CHECK(std::fabs(p.y - 0.503) <= f.hy);
    CHECK(ls.ambiguous_cells == 0);

    // constant field off the level: empty
    ScalarField2D g = make_field(11, 11, 0.1, 0.1, 0, 0, 0.1, false,
                                 [](double, double) { return 0.5; });
    CHECK(extract_levelset(g, 0.0).curves.empty());
    CHECK_THROWS(extract_levelset(g, 1.5));
}

TEST_CASE("level curves of stacked interfaces are sorted and disjoint") {
    double eps = 0.04;
    ScalarField2D f = make_field(61, 161, 0.01, 0.01, 0, 0, eps, false,
                                 [&](double, double y) {
                                     return std::tanh((y - 0.4015) / (kSqrt2 * eps)) -
                                            std::tanh((y - 1.2015) / (kSqrt2 * eps)) - 1.0;
                                 });
    auto ls = extract_levelset(f, 0.0);
    REQUIRE(ls.curves.size() == 2);
    CHECK(ls.curves[0].mean_y < ls.curves[1].mean_y);
    // no pairwise intersection at desk scale
    for (const auto& a : ls.curves[0].pts)
        for (const auto& b : ls.curves[1].pts)
            CHECK(std::hypot(a.x - b.x, a.y - b.y) > 0.1);
}

TEST_CASE("curvature of a flat interface vanishes") {
    double eps = 0.05;
    ScalarField2D f = make_field(101, 101, 0.01, 0.01, 0, 0, eps, false,
                                 [&](double x, double y) {
                                     // tilted flat interface
                                     return std::tanh((0.6 * x + 0.8 * y - 0.55) /
                                                      (kSqrt2 * eps));
                                 });
    CurvatureSample s = curvature_B(f, {0.45, 0.35}, 0.3);
    REQUIRE(!s.degenerate);
    CHECK(std::fabs(s.B) <= 0.05); // C * h with 1/eps derivative scales
    CHECK_THROWS(curvature_B(f, {0.95, 0.95}, 0.3)); // |u| > 1 - b there
}

TEST_CASE("curvature of a circular front is 1/R") {
    double eps = 0.05, R = 0.35;
    const Profile& prof = prof20();
    ScalarField2D f = make_field(301, 301, 1.0 / 300, 1.0 / 300, -0.5, -0.5, eps, false,
                                 [&](double x, double y) {
                                     return prof.g_at((std::hypot(x, y) - R) / eps);
                                 });
    // on-axis points: tangential part vanishes by symmetry
    for (Point pt : {Point{R, 0.0}, Point{-R, 0.0}, Point{0.0, R}}) {
        CurvatureSample s = curvature_B(f, pt, 0.5);
        REQUIRE(!s.degenerate);
        CHECK(std::fabs(s.H - 1.0 / R) <= 0.05 / R);
        CHECK(std::fabs(s.B - 1.0 / R) <= 0.05 / R);
        CHECK(std::fabs(s.tangential) <= 1e-4);
    }
    // degenerate point: gradient below floor at the centre
    CurvatureSample c = curvature_B(f, {0.0, 0.0}, 0.0001, 1e-3);
    CHECK(c.degenerate);
}

TEST_CASE("B identity holds algebraically on smooth fields") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unif(0.7, 1.8);
    for (int it = 0; it < 4; ++it) {
        double a = unif(rng), b = unif(rng), c = unif(rng);
        ScalarField2D f = make_field(121, 121, 1.0 / 120, 1.0 / 120, 0, 0, 0.2, false,
                                     [&](double x, double y) {
                                         return 0.8 * std::sin(a * 2 * x + c) *
                                                std::cos(b * 2 * y);
                                     });
        for (double x = 0.2; x < 0.85; x += 0.13)
            for (double y = 0.2; y < 0.85; y += 0.17) {
                if (std::fabs(f.interp(x, y)) > 0.9) continue;
                CurvatureSample s = curvature_B(f, {x, y}, 0.05, 1e-2);
                if (s.degenerate) continue;
                double lhs = s.B * s.B;
                double rhs = s.H * s.H + s.tangential * s.tangential;
                if (lhs > 1e-10) CHECK(std::fabs(lhs - rhs) / lhs <= 1e-6);
            }
    }
}

TEST_CASE("signed distance basics") {
    // flat curve y = 0
    std::vector<double> xs, fs;
    for (double x = -1.0; x <= 1.0 + 1e-12; x += 0.05) {
        xs.push_back(x);
        fs.push_back(0.0);
    }
    InterfaceCurve c = curve_from_graph(xs, fs);
    auto d = signed_distance(c, {0.3, 0.2});
    CHECK(d.z == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(d.y_foot == doctest::Approx(0.3).epsilon(1e-12));
    auto dn = signed_distance(c, {0.3, -0.45});
    CHECK(dn.z == doctest::Approx(-0.45).epsilon(1e-12));
    // point on the curve
    auto d0 = signed_distance(c, {0.125, 0.0});
    CHECK(std::fabs(d0.z) <= 1e-12);
}

TEST_CASE("signed distance to a circular arc") {
    double R = 2.0;
    std::vector<double> xs, fs;
    for (double x = -1.5; x <= 1.5 + 1e-12; x += 0.01) {
        xs.push_back(x);
        fs.push_back(R - std::sqrt(R * R - x * x)); // bottom arc of circle centred (0,R)
    }
    InterfaceCurve c = curve_from_graph(xs, fs);
    // point below the arc at distance 0.5 from it
    auto res = signed_distance(c, {0.0, -0.5});
    CHECK(std::fabs(std::fabs(res.z) - 0.5) <= 2e-5); // chord error
    CHECK(res.z < 0);                                 // below the graph
    // point above the arc: positive
    auto res2 = signed_distance(c, {0.2, 0.5});
    CHECK(res2.z > 0);
}

TEST_CASE("signed distance is 1-Lipschitz") {
    std::vector<double> xs, fs;
    for (double x = -2.0; x <= 2.0 + 1e-12; x += 0.02) {
        xs.push_back(x);
        fs.push_back(0.3 * std::sin(1.7 * x));
    }
    InterfaceCurve c = curve_from_graph(xs, fs);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ux(-1.0, 1.0), uy(-0.8, 0.8);
    for (int k = 0; k < 200; ++k) {
        Point a{ux(rng), uy(rng)}, b{ux(rng), uy(rng)};
        double za = signed_distance(c, a).z, zb = signed_distance(c, b).z;
        CHECK(std::fabs(za - zb) <= std::hypot(a.x - b.x, a.y - b.y) + 1e-12);
    }
}

TEST_CASE("fermi metric factors") {
    // flat line: lambda independent of z
    std::vector<double> xs, fs;
    for (double x = -1.0; x <= 1.0 + 1e-12; x += 0.05) {
        xs.push_back(x);
        fs.push_back(0.0);
    }
    InterfaceCurve flat = curve_from_graph(xs, fs);
    CHECK(fermi_metric(flat, 0.0, 0.4) == doctest::Approx(fermi_metric(flat, 0.0, 0.0)));

    // circle radius R: lambda(y,z)/lambda(y,0) = (1 - z/R)^2
    double R = 2.0;
    std::vector<double> cx, cf;
    for (double x = -1.0; x <= 1.0 + 1e-12; x += 0.005) {
        cx.push_back(x);
        cf.push_back(R - std::sqrt(R * R - x * x));
    }
    InterfaceCurve circ = curve_from_graph(cx, cf);
    for (double z : {0.3, -0.4, 0.8}) {
        double ratio = fermi_metric(circ, 0.0, z) / fermi_metric(circ, 0.0, 0.0);
        double exact = (1.0 - z / R) * (1.0 - z / R);
        CHECK(std::fabs(ratio - exact) <= 0.01 * exact);
    }
    // focal-distance rejection
    CHECK_THROWS(fermi_metric(circ, 0.0, 1.9));
}

TEST_CASE("distance comparison: parallel lines are the equality case") {
    std::vector<double> xs, f1, f2;
    for (double x = -3.0; x <= 3.0 + 1e-12; x += 0.05) {
        xs.push_back(x);
        f1.push_back(-0.3);
        f2.push_back(1.1);
    }
    auto rep = distance_comparison_check(curve_from_graph(xs, f1), curve_from_graph(xs, f2),
                                         {0.4, 0.3}, 0.05, 3.0);
    CHECK(rep.precondition_ok);
    for (double r : rep.residual) CHECK(std::fabs(r) <= 1e-12);
}

TEST_CASE("distance comparison on concentric arcs stays small") {
    double eps = 0.05;
    double L = std::fabs(std::log(eps));
    double R = 1.0 / eps, sep = L;
    auto arc = [&](double rad, double yc) {
        std::vector<double> xs, fs;
        for (double x = -2 * L - 4; x <= 2 * L + 4; x += 0.05) {
            xs.push_back(x);
            fs.push_back(yc + rad - std::sqrt(rad * rad - x * x));
        }
        return curve_from_graph(xs, fs);
    };
    InterfaceCurve ca = arc(R, 0.0), cb = arc(R - sep, sep);
    auto rep = distance_comparison_check(ca, cb, {0.7, 0.5 * sep}, eps, 1.2);
    CHECK(rep.precondition_ok);
    for (double v : rep.normalized) CHECK(std::fabs(v) <= 1.0);
    // precondition violation flagged but residuals still computed
    auto far = distance_comparison_check(ca, cb, {0.0, 10.0 * L}, eps, 1.0);
    CHECK(!far.precondition_ok);
}

TEST_CASE("curve csv export") {
    std::vector<double> xs = {0.0, 0.5, 1.0}, fs = {0.0, 0.1, 0.0};
    std::vector<InterfaceCurve> cs = {curve_from_graph(xs, fs)};
    save_curves_csv(cs, "/tmp/aclab_curves.csv");
    std::FILE* f = std::fopen("/tmp/aclab_curves.csv", "r");
    REQUIRE(f != nullptr);
    char buf[64];
    CHECK(std::fgets(buf, sizeof buf, f) != nullptr);
    std::fclose(f);
}
