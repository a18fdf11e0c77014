#include <doctest.h>

#include <cmath>

#include "aclab/interaction.hpp"
#include "aclab/profile1d.hpp"

using namespace aclab;

namespace {
constexpr double kSqrt2 = 1.4142135623730950488;

const Profile& quartic_profile() {
    static Profile prof = solve_profile(make_quartic(), 20.0, 0.01);
    return prof;
}
} // namespace

TEST_CASE("profile matches tanh closed form") {
    const Profile& prof = quartic_profile();
    double sup = 0.0;
    for (size_t i = 0; i < prof.size(); ++i)
        sup = std::max(sup, std::fabs(prof.g[i] - std::tanh(prof.t[i] / kSqrt2)));
    CHECK(sup <= 1e-8);
    CHECK(std::fabs(prof.gp[prof.size() / 2] - 1.0 / kSqrt2) <= 1e-10); // g'(0)
}

TEST_CASE("profile basic invariants") {
    const Profile& prof = quartic_profile();
    size_t mid = prof.size() / 2;
    CHECK(std::fabs(prof.g[mid]) <= 1e-12); // g(0) = 0
    for (size_t i = 1; i < prof.size(); ++i) CHECK(prof.g[i] > prof.g[i - 1]);
    for (size_t i = 1; i + 1 < prof.size(); ++i) {
        CHECK(std::fabs(prof.g[i]) < 1.0);
        CHECK(prof.gp[i] > 0.0);
        // first-integral residual
        CHECK(std::fabs(prof.gp[i] - std::sqrt(2.0 * prof.pot.W(prof.g[i]))) <= 1e-8);
    }
    // odd symmetry for the symmetric quartic
    double worst = 0.0;
    for (size_t i = 0; i < prof.size(); ++i)
        worst = std::max(worst, std::fabs(prof.g[i] + prof.g[prof.size() - 1 - i]));
    CHECK(worst <= 1e-10);
}

TEST_CASE("profile preconditions") {
    CHECK_THROWS(solve_profile(make_quartic(), 5.0, 0.01));
    CHECK_THROWS(solve_profile(make_quartic(), 20.0, 0.05));
    // W vanishing in the interior trips the quadrature
    Potential bad = make_quartic();
    bad.W = [](double u) { double q = 1 - u * u; return 0.25 * q * q * (u * u - 0.25); };
    CHECK_THROWS(solve_profile(bad, 10.0, 0.01));
}

TEST_CASE("energy and tails") {
    const Profile& prof = quartic_profile();
    CHECK(std::fabs(prof.sigma0 - 2.0 * kSqrt2 / 3.0) <= 1e-6);
    CHECK(std::fabs(prof.A_plus - 2.0) <= 1e-3);
    CHECK(std::fabs(prof.A_minus - 2.0) <= 1e-3);

    // fit-window robustness: T_max 22 moves the window by +1 at the low end
    Profile prof22 = solve_profile(make_quartic(), 22.0, 0.01);
    CHECK(std::fabs(prof22.A_plus - prof.A_plus) <= 1e-4);
}

TEST_CASE("spectral gap and zero mode") {
    const Profile& prof = quartic_profile();
    CHECK(std::fabs(prof.mu - 1.5) <= 1e-3);
    Spectrum1D sp = profile_spectrum(prof);
    CHECK(std::fabs(sp.lambda0) <= 1e-4);
    // halving h_t moves mu below 1e-4
    Profile fine = solve_profile(make_quartic(), 20.0, 0.005);
    CHECK(std::fabs(fine.mu - prof.mu) <= 1e-4);
}

TEST_CASE("interp tails of g") {
    const Profile& prof = quartic_profile();
    // beyond the grid the analytic tail takes over, continuous at the seam
    double inside = prof.g_at(prof.T_max - 1e-9);
    double outside = prof.g_at(prof.T_max + 1e-9);
    CHECK(std::fabs(inside - outside) <= 1e-8);
    CHECK(prof.g_at(30.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cutoff profile structure") {
    const Profile& prof = quartic_profile();
    for (double eps : {0.1, 0.05, 0.025}) {
        if (6.0 * std::fabs(std::log(eps)) > prof.T_max) continue;
        CutoffProfile cp = cutoff_profile(prof, eps);
        double L3 = cp.r_inner, L6 = cp.r_outer;
        double max_xi = 0.0;
        for (size_t i = 0; i < cp.t.size(); ++i) {
            double a = std::fabs(cp.t[i]);
            if (a < L3 - 1e-12) {
                CHECK(cp.gbar[i] == prof.g[i]); // exact equality inside
                CHECK(cp.xi[i] == 0.0);
            }
            if (a > L6 + 1e-12) {
                CHECK(cp.gbar[i] == (cp.t[i] > 0 ? 1.0 : -1.0));
                CHECK(cp.xi[i] == 0.0);
            }
            max_xi = std::max(max_xi, std::fabs(cp.xi[i]));
        }
        // |xi| <= C eps^3 with C <= 50
        CHECK(max_xi <= 50.0 * eps * eps * eps);
        // energy deviation
        CHECK(std::fabs(cp.energy() - prof.sigma0) <= 1e-3);
    }
    CHECK_THROWS(cutoff_profile(prof, 0.01)); // 6|log eps| > T_max
    CHECK_THROWS(cutoff_profile(prof, 0.3));
}

TEST_CASE("profile csv sidecar") {
    const Profile& prof = quartic_profile();
    save_profile_csv(prof, "/tmp/aclab_prof.csv", "/tmp/aclab_prof.json");
    std::FILE* f = std::fopen("/tmp/aclab_prof.csv", "r");
    REQUIRE(f != nullptr);
    char buf[64];
    CHECK(std::fgets(buf, sizeof buf, f) != nullptr);
    CHECK(std::string(buf) == "t,g,gp,gpp\n");
    std::fclose(f);
}

namespace {
// perturbed double wells: W_c(u) = (1-u^2)^2 [1/4 + c u^2 (1-u^2)(1+d u)].
// Wells stay at +-1 with W''(+-1) = 2 and the interior critical point stays
// at 0; d != 0 skews the approach to the wells so A_plus != A_minus.
Potential make_perturbed(double c, double d) {
    Potential p;
    auto phi = [c, d](double u) { return 0.25 + c * u * u * (1 - u * u) * (1 + d * u); };
    // phi = 1/4 + c u^2 + c d u^3 - c u^4 - c d u^5, derivatives monomial-wise
    auto phip = [c, d](double u) {
        return 2 * c * u + 3 * c * d * u * u - 4 * c * u * u * u -
               5 * c * d * u * u * u * u;
    };
    auto phi2 = [c, d](double u) {
        return 2 * c + 6 * c * d * u - 12 * c * u * u - 20 * c * d * u * u * u;
    };
    auto psi = [](double u) { double q = 1 - u * u; return q * q; };
    auto psip = [](double u) { return -4.0 * u * (1 - u * u); };
    auto psipp = [](double u) { return -4.0 + 12.0 * u * u; };
    p.W = [psi, phi](double u) { return psi(u) * phi(u); };
    p.Wp = [psi, psip, phi, phip](double u) { return psip(u) * phi(u) + psi(u) * phip(u); };
    p.Wpp = [psi, psip, psipp, phi, phip, phi2](double u) {
        return psipp(u) * phi(u) + 2 * psip(u) * phip(u) + psi(u) * phi2(u);
    };
    return p;
}
} // namespace

TEST_CASE("profiles of perturbed symmetric wells keep every invariant") {
    for (double c : {0.12, -0.15, 0.3}) {
        Potential p = make_perturbed(c, 0.0);
        REQUIRE(is_valid(p, 0.01, 1e-10));
        Profile prof = solve_profile(p, 14.0, 0.01);
        CHECK(prof.sigma0 > 0);
        CHECK(prof.mu > 0);
        CHECK(prof.A_plus > 0);
        // odd symmetry survives
        double worst = 0.0;
        for (size_t i = 0; i < prof.size(); ++i)
            worst = std::max(worst, std::fabs(prof.g[i] + prof.g[prof.size() - 1 - i]));
        CHECK(worst <= 1e-10);
        CHECK(std::fabs(prof.A_plus - prof.A_minus) <= 1e-6 * prof.A_plus);
        // equipartition is forced by the first integral regardless of W
        double ig2 = 0.0;
        for (size_t i = 0; i < prof.size(); ++i) {
            double v = prof.gp[i] * prof.gp[i];
            ig2 += (i == 0 || i + 1 == prof.size()) ? 0.5 * v : v;
        }
        CHECK(std::fabs(ig2 * prof.h_t - prof.sigma0) <= 1e-8);
    }
}

TEST_CASE("asymmetric tails feed the interaction bookkeeping") {
    Potential p = make_perturbed(0.25, 0.6);
    REQUIRE(is_valid(p, 0.005, 1e-10));
    Profile prof = solve_profile(p, 16.0, 0.01);
    // skewed wells: distinct tail amplitudes, both fitted at rate sqrt(2)
    CHECK(std::fabs(prof.A_plus - prof.A_minus) > 0.01 * prof.A_plus);
    CHECK(prof.mu > 0);
    // leading interaction terms pick the matching amplitude on each side
    double T = 6.0;
    double lower = aclab::interaction_integral(prof, T, aclab::InteractionVariant::lower);
    double upper = aclab::interaction_integral(prof, T, aclab::InteractionVariant::upper);
    double lead_lo = -4.0 * prof.A_minus * prof.A_minus * std::exp(-kSqrt2 * T);
    double lead_up = 4.0 * prof.A_plus * prof.A_plus * std::exp(-kSqrt2 * T);
    CHECK(std::fabs(lower - lead_lo) <= 0.05 * std::fabs(lead_lo));
    CHECK(std::fabs(upper - lead_up) <= 0.05 * std::fabs(lead_up));
    CHECK(std::fabs(upper + lower) > 0.01 * std::fabs(upper)); // no accidental symmetry
}
