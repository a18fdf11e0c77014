#ifndef ACLAB_TODA_HPP
#define ACLAB_TODA_HPP

#include <string>
#include <vector>

namespace aclab {

/// State/trajectory of the Toda system in base dimension one:
///   f_alpha'' = A1 exp(-sqrt(2)(f_a - f_{a-1})) - A2 exp(-sqrt(2)(f_{a+1} - f_a))
/// with free ends (the alpha = 0 and alpha = Q+1 terms absent). Samples are
/// stored per layer over a uniform y grid; fp holds f_alpha'.
///
/// For equal coefficients A1 = A2 = A the conserved Hamiltonian is
///   E = sum_a f_a'^2 / 2 + (A/sqrt(2)) sum_a exp(-sqrt(2)(f_{a+1} - f_a)).
/// (The sign of the interaction term is fixed by d/dy E = 0 along solutions;
/// the cosh closed form pins it.)
struct TodaState {
    int Q = 0;
    double A1 = 0.0, A2 = 0.0;
    std::vector<double> y;                  // uniform grid
    std::vector<std::vector<double>> f;     // [Q][ny], ascending in alpha
    std::vector<std::vector<double>> fp;    // [Q][ny]
    bool truncated = false;                 // layer collision aborted integration

    double hamiltonian(std::size_t i) const;
    double momentum(std::size_t i) const;
    /// max Hamiltonian drift over the trajectory (equal-coefficient case).
    double hamiltonian_drift() const;
};

/// Right-hand side per layer at every stored sample.
std::vector<std::vector<double>> toda_rhs(const TodaState& s);

/// Velocity-Verlet integration over [y_start, y_start + y_span] from the
/// last stored sample of s. Halts (flagging `truncated`) if any gap drops
/// below 1e-3.
TodaState integrate(const TodaState& s, double y_span, double step);

/// Even reflection-symmetric solution with the prescribed minimal gap at
/// y = 0, integrated outward over [-y_span/2, y_span/2]. Q in {2, 3}; equal
/// default coefficients must be supplied via A1 = A2.
TodaState solve_symmetric_bvp(int Q, double gap_at_origin, double y_span, double step,
                              double A1, double A2);

/// Closed form for the symmetric Q=2 gap: w(y) = sqrt(2) log cosh(a y) + b
/// with a^2 = (A1+A2) exp(-sqrt(2) b) / sqrt(2) and b = gap at the origin.
double symmetric_gap_closed_form(double y, double gap_at_origin, double A1, double A2);

/// Inverse blow-up map onto ansatz-consumable graphs:
///   f_alpha(x) = eps [ ftilde_alpha(x / sqrt(eps)) + (sqrt(2) alpha / 2)|log eps| ],
/// alpha = 1..Q shifted by alpha0 (alpha0 = 0 keeps 1-based indices).
struct ProjectedInterfaces {
    double epsilon = 0.0;
    std::vector<double> x;               // domain-unit grid
    std::vector<std::vector<double>> f;  // [Q][nx]
};
ProjectedInterfaces project_to_interfaces(const TodaState& s, double epsilon,
                                          int alpha0 = 0);

/// Trajectory CSV: y,f_1..f_Q per row.
void save_toda_csv(const TodaState& s, const std::string& path);

} // namespace aclab

#endif
