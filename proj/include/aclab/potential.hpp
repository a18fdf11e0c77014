#ifndef ACLAB_POTENTIAL_HPP
#define ACLAB_POTENTIAL_HPP

#include <functional>
#include <string>
#include <vector>

namespace aclab {

/// Double-well potential W on [-1,1] with wells pinned at u = +-1,
/// W(+-1) = 0, W'(+-1) = 0, W''(+-1) = 2 and a single interior critical
/// point at u = 0. Derivatives are supplied by the constructor, never
/// obtained by differencing W.
struct Potential {
    std::function<double(double)> W;
    std::function<double(double)> Wp;
    std::function<double(double)> Wpp;
    enum class Kind { quartic, custom } kind = Kind::custom;

    double operator()(double u) const { return W(u); }
};

/// W(u) = (1-u^2)^2 / 4.
Potential make_quartic();

struct InvariantViolation {
    std::string name;
    double max_violation;
};

/// Samples u on [-1,1] with the given step and reports the worst-case
/// violation of each Potential invariant. grid_step must lie in (0, 0.1]...
/// except that coarse sanity checks up to 0.5 are accepted (the documented
/// precondition bound); values outside (0, 0.5] are rejected.
std::vector<InvariantViolation> validate(const Potential& p, double grid_step);

/// True when every reported violation is within tol (default 1e-8).
bool is_valid(const Potential& p, double grid_step, double tol = 1e-8);

/// Loads a potential from a plain-text spec file.
/// Header line `kind=table` is followed by rows `u W Wp Wpp` (monotone u,
/// covering [-1,1]); evaluators are cubic-Hermite interpolants of each
/// column. Header `kind=poly` is followed by one coefficient per row,
/// constant term first; W' and W'' are derived analytically.
Potential load_potential(const std::string& path);

} // namespace aclab

#endif
