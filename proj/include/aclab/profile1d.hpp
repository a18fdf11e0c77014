#ifndef ACLAB_PROFILE1D_HPP
#define ACLAB_PROFILE1D_HPP

#include <string>
#include <vector>

#include "aclab/potential.hpp"

namespace aclab {

/// The 1D transition profile g'' = W'(g), g(0) = 0, g(+-inf) = +-1,
/// sampled on a uniform grid t in [-T_max, T_max], together with the
/// constants that drive the interaction expansions:
///   sigma0   energy integral of [g'^2/2 + W(g)]
///   A_plus   tail amplitude in g(t) = 1 - A_plus exp(-sqrt(2) t) + ...
///   A_minus  tail amplitude at t -> -inf
///   mu       second eigenvalue of -d^2/dt^2 + W''(g) (the spectral gap;
///            the lowest eigenvalue is 0 with eigenfunction g')
struct Profile {
    double T_max = 0.0;
    double h_t = 0.0;
    std::vector<double> t, g, gp, gpp;
    double sigma0 = 0.0;
    double A_plus = 0.0;
    double A_minus = 0.0;
    double mu = 0.0;
    Potential pot;

    size_t size() const { return t.size(); }
    /// g at arbitrary s: linear interpolation on the grid, analytic
    /// exponential tail +-1 -+ A exp(-sqrt(2)|s|) beyond T_max.
    double g_at(double s) const;
    double gp_at(double s) const;
};

/// Integrates the first integral t(g) = int dg / sqrt(2 W(g)) by composite
/// Gauss-Legendre quadrature (with an exponential substitution close to the
/// wells) and resamples onto the uniform t-grid. Requires T_max >= 10 and
/// h_t <= 0.01. Throws if W vanishes somewhere in the interior.
Profile solve_profile(const Potential& p, double T_max, double h_t);

/// Trapezoid value of int [g'^2/2 + W(g)] dt. The integrand decays
/// exponentially, so the trapezoid rule is spectrally accurate here.
double energy_sigma0(const Profile& prof);

/// Fits log(1-g) against -sqrt(2) t on t in [T_max/2, 3 T_max/4] and returns
/// exp(intercept); symmetric fit on the left tail for A_minus. Throws if the
/// fitted slope deviates from -sqrt(2) by more than 1%.
std::pair<double, double> tail_constants(const Profile& prof);

/// Assembles -d^2/dt^2 + W''(g) with Dirichlet ends, checks that the lowest
/// eigenvalue is 0 (within 1e-4, eigenvector parallel to g') and returns the
/// second eigenvalue.
double spectral_gap(const Profile& prof);

/// Profile with the two lowest 1D eigenpairs exposed (used by tests).
struct Spectrum1D {
    double lambda0 = 0.0, lambda1 = 0.0;
    std::vector<double> v0, v1;
};
Spectrum1D profile_spectrum(const Profile& prof);

/// Cutoff profile gbar = zeta(t/(3|log eps|)) g + (1 - zeta) sgn(t), where
/// zeta is a fixed quintic-smoothstep bump (1 on [-1,1], supported in
/// (-2,2), |zeta'|+|zeta''| <= 16). gbar satisfies gbar'' = W'(gbar) + xi
/// with xi supported in {3|log eps| < |t| < 6|log eps|} and |xi| = O(eps^3).
struct CutoffProfile {
    double epsilon = 0.0;
    double r_inner = 0.0; // 3|log eps|
    double r_outer = 0.0; // 6|log eps|
    double T_max = 0.0, h_t = 0.0;
    std::vector<double> t, gbar, gbar_p, gbar_pp, xi;
    Potential pot;

    double gbar_at(double s) const;
    double gbar_p_at(double s) const;
    /// int gbar'^2 dt (equals sigma0 + O(eps^3)).
    double energy() const;
};

/// Builds the cutoff profile. Requires eps in (0, 0.2] and
/// 6|log eps| <= T_max. xi is evaluated from the product rule applied to
/// zeta * g + (1-zeta) sgn (using g'' = W'(g) on the grid), which keeps its
/// support exactly inside the cutoff annulus.
CutoffProfile cutoff_profile(const Profile& prof, double epsilon);

/// CSV with columns t,g,gp,gpp plus a JSON sidecar
/// {sigma0, A_plus, A_minus, mu, T_max, h_t}.
void save_profile_csv(const Profile& prof, const std::string& csv_path,
                      const std::string& json_path);

} // namespace aclab

#endif
