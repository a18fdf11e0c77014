#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "aclab/potential.hpp"

using namespace aclab;

TEST_CASE("quartic well values") {
    Potential p = make_quartic();
    CHECK(p.W(0.0) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(std::fabs(p.Wpp(1.0) - 2.0) <= 1e-12);
    CHECK(std::fabs(p.Wpp(-1.0) - 2.0) <= 1e-12);
    CHECK(std::fabs(p.Wp(0.0)) <= 1e-12);
    CHECK(std::fabs(p.W(1.0)) <= 1e-12);
    CHECK(std::fabs(p.Wp(-1.0)) <= 1e-12);
}

TEST_CASE("quartic W'' matches 3u^2 - 1 pointwise") {
    Potential p = make_quartic();
    for (double u = -1.0; u <= 1.0; u += 0.01)
        CHECK(std::fabs(p.Wpp(u) - (3.0 * u * u - 1.0)) <= 1e-12);
}

TEST_CASE("validation report") {
    Potential p = make_quartic();
    for (const auto& v : validate(p, 0.01)) CHECK(v.max_violation <= 1e-12);
    CHECK(is_valid(p, 0.01));
    // coarse sampling still passes
    CHECK(is_valid(p, 0.5));
    CHECK_THROWS(validate(p, 0.0));
    CHECK_THROWS(validate(p, 0.7));

    // constructed failure: W(1) = 0.1
    Potential bad = p;
    bad.W = [](double u) { double q = 1 - u * u; return 0.25 * q * q + 0.05 * (u + 1.0); };
    auto rep = validate(bad, 0.01);
    bool found = false;
    for (const auto& v : rep)
        if (v.name == "well value" && std::fabs(v.max_violation - 0.1) < 1e-12) found = true;
    CHECK(found);
}

TEST_CASE("interior positivity is strict for valid potentials") {
    Potential p = make_quartic();
    double mn = 1e300;
    for (double u = -0.999; u <= 0.999; u += 0.001) mn = std::min(mn, p.W(u));
    CHECK(mn > 0.0);
}

TEST_CASE("potential file round trips") {
    // poly: quartic (1 - u^2)^2 / 4 = 1/4 - u^2/2 + u^4/4
    {
        std::ofstream f("/tmp/aclab_poly.txt");
        f << "kind=poly\n0.25\n0\n-0.5\n0\n0.25\n";
    }
    Potential p = load_potential("/tmp/aclab_poly.txt");
    Potential q = make_quartic();
    for (double u = -1.0; u <= 1.0; u += 0.05) {
        CHECK(p.W(u) == doctest::Approx(q.W(u)).epsilon(1e-13));
        CHECK(p.Wp(u) == doctest::Approx(q.Wp(u)).epsilon(1e-13));
        CHECK(p.Wpp(u) == doctest::Approx(q.Wpp(u)).epsilon(1e-13));
    }

    // table with supplied derivatives
    {
        std::ofstream f("/tmp/aclab_table.txt");
        f.precision(17);
        f << "kind=table\n";
        for (double u = -1.0; u <= 1.0 + 1e-12; u += 0.01)
            f << u << " " << q.W(u) << " " << q.Wp(u) << " " << q.Wpp(u) << "\n";
    }
    Potential t = load_potential("/tmp/aclab_table.txt");
    for (double u = -0.95; u <= 0.95; u += 0.037) {
        CHECK(std::fabs(t.W(u) - q.W(u)) <= 1e-8);
        CHECK(std::fabs(t.Wp(u) - q.Wp(u)) <= 1e-7);
        CHECK(std::fabs(t.Wpp(u) - q.Wpp(u)) <= 1e-5);
    }
    CHECK_THROWS(load_potential("/tmp/definitely_missing_file.txt"));
}
