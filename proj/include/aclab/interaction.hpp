#ifndef ACLAB_INTERACTION_HPP
#define ACLAB_INTERACTION_HPP

#include <string>
#include <vector>

#include "aclab/profile1d.hpp"

namespace aclab {

enum class InteractionVariant { lower, upper };

/// Trapezoid value over the profile grid of
///   lower: int [W''(g(t)) - W''(1)] [g(-t-T) + 1] g'(t) dt
///   upper: int [W''(g(t)) - W''(1)] [g(T-t) - 1] g'(t) dt
/// Shifted profile values use grid interpolation plus the analytic
/// exponential tail beyond T_max. Requires T in [2, 3 T_max / 4].
double interaction_integral(const Profile& prof, double T, InteractionVariant v);

/// Leading term of the expansion: -4 A_minus^2 exp(-sqrt(2) T) for the lower
/// variant, +4 A_plus^2 exp(-sqrt(2) T) for the upper.
double interaction_leading(const Profile& prof, double T, InteractionVariant v);

struct InteractionReport {
    double T = 0.0;
    double integral_value = 0.0;
    double leading_term = 0.0;
    double absolute_error = 0.0;
    double relative_error = 0.0;
};

/// Per-T reports for an ascending T list (each in [4, 3 T_max/4]). Checks
/// that absolute_error(T) / exp(-(4 sqrt(2)/3) T) stays bounded across the
/// list (max/min ratio <= 20) and throws otherwise.
std::vector<InteractionReport> expansion_error_scan(const Profile& prof,
                                                    const std::vector<double>& T_list,
                                                    InteractionVariant v = InteractionVariant::lower);

/// CSV with columns T,integral,leading,abs_err,rel_err.
void save_scan_csv(const std::vector<InteractionReport>& scan, const std::string& path);

} // namespace aclab

#endif
