#ifndef ACLAB_SPECTRUM_HPP
#define ACLAB_SPECTRUM_HPP

#include <string>
#include <vector>

#include "aclab/ansatz.hpp"
#include "aclab/field.hpp"
#include "aclab/potential.hpp"

namespace aclab {

/// Symmetric operator v -> -eps Lap v + W''(u) v / eps on a Dirichlet node
/// window of a field. Unknowns are the window nodes, row-major.
class LinearizedOperator {
  public:
    LinearizedOperator(const ScalarField2D& f, const Potential& p, Window w);

    std::size_t size() const { return wpp_.size(); }
    std::size_t wx() const { return w_.width(); }
    std::size_t wy() const { return w_.height(); }
    const Window& window() const { return w_; }
    double epsilon() const { return eps_; }
    double hx() const { return hx_; }
    double hy() const { return hy_; }
    const std::vector<double>& wpp() const { return wpp_; }

    void apply(const double* v, double* out) const;
    /// Gershgorin lower bound on the spectrum.
    double spectrum_lower_bound() const;

  private:
    Window w_;
    double eps_, hx_, hy_;
    std::vector<double> wpp_; // W''(u) on window nodes
};

/// Requires the window inside the grid and at least 5x5 nodes.
LinearizedOperator assemble_linearized(const ScalarField2D& f, const Potential& p,
                                       Window w);

struct SpectralReport {
    std::vector<double> eigenvalues;            // ascending
    std::vector<std::vector<double>> eigenvectors;
    std::vector<double> residuals;
    int morse_index = 0; // eigenvalues below -tol_neg
    double tol_neg = 0.0;
    Window window;
    int iterations = 0;
    bool converged = true;
    bool index_unresolved = false; // 10th eigenvalue still negative
};

/// k lowest eigenpairs (k <= 10) by shifted inverse iteration with deflation
/// behind a banded factorization. Eigenvector residuals meet
/// ||L v - lambda v|| <= 1e-8 ||v||.
SpectralReport lowest_eigenpairs(const LinearizedOperator& L, int k);

/// Count of eigenvalues below -tol_neg among the 10 lowest
/// (tol_neg defaults to 1e-6/eps). Sets index_unresolved when the 10th
/// eigenvalue is still below the threshold.
SpectralReport morse_index(const ScalarField2D& f, const Potential& p, Window w,
                           double tol_neg = -1.0);

/// Midpoint value of the stability quadratic form
/// Q(phi) = int eps |grad phi|^2 + W''(u) phi^2 / eps over the window.
/// testfn must vanish on the window's boundary ring.
double stability_Q(const ScalarField2D& f, const Potential& p, Window w,
                   const std::vector<double>& testfn);

struct ReducedStabilityReport {
    double lhs = 0.0;            // int eta^2 [exp(-sqrt2 d_{a-1}) + exp(+sqrt2 d_{a+1})] dy
    double int_eta_prime_sq = 0.0;
    double eps43_int_eta_sq = 0.0;
    double ratio = 0.0;          // lhs / (int eta'^2 + eps^{4/3} int eta^2)
    std::vector<double> lhs_per_layer;
    bool stable = true;
};

/// Reduced stability inequality of the layer ansatz, evaluated in stretched
/// units (y = x1/eps, distances divided by eps). eta is sampled on the
/// ansatz x1 grid and must vanish at the ends.
ReducedStabilityReport reduced_stability_check(const LayerAnsatz& a, const Profile& prof,
                                               const std::vector<double>& eta,
                                               bool stable_flag);

/// JSON export of a spectral report (eigenvalues, morse index, window,
/// residuals).
void save_spectral_json(const SpectralReport& rep, const std::string& path);

} // namespace aclab

#endif
