#ifndef ACLAB_ANSATZ_HPP
#define ACLAB_ANSATZ_HPP

#include <functional>
#include <string>
#include <vector>

#include "aclab/field.hpp"
#include "aclab/geometry.hpp"
#include "aclab/profile1d.hpp"

namespace aclab {

struct GridSpec {
    std::size_t nx = 0, ny = 0;
    double hx = 0, hy = 0, x0 = 0, y0 = 0;
    bool periodic_x = false;
};

/// Multi-layer approximation g_* = sum_a gbar((-1)^{a-1}(d_a - h_a)/eps) + parity,
/// built from ordered graph interfaces Gamma_a (a = 1..Q, f_1 < ... < f_Q),
/// per-layer shifts h_a(x1) (domain units) and a cutoff profile. The additive
/// constant is -((-1)^Q + 1)/2, which pins g_* to [-1, 1] and matches the
/// alternating-sign telescoping of the layer sum (u < 0 below Gamma_1).
struct LayerAnsatz {
    std::vector<InterfaceCurve> interfaces;
    std::vector<std::vector<double>> shifts; // [Q][nx], sampled on grid columns
    double epsilon = 0.0;
    CutoffProfile cp;
    ScalarField2D g_star;
    // cached signed distance of every node to every interface, [Q][nx*ny]
    std::vector<std::vector<double>> dist;
    double min_gap = 0.0;
};

/// Builds the composite field. Rejects unordered or touching interfaces and
/// shifts exceeding a tenth of the minimal gap.
LayerAnsatz build_ansatz(const std::vector<InterfaceCurve>& interfaces,
                         const std::vector<std::vector<double>>& shifts,
                         const CutoffProfile& cp, const GridSpec& gs);

struct FitResult {
    std::vector<std::vector<double>> shifts; // [Q][nx]
    std::vector<int> flagged_columns;        // columns that hit the iteration cap
};

/// Per-column optimal shifts: solves the orthogonality system
///   F_a(h) = sum_y [u - g_*(.;h)] gbar'((-1)^{a-1}(d_a - h_a)/eps) hy = 0
/// by damped Newton (finite-difference Jacobian; the system is diagonally
/// dominant). Columns not converged after 50 iterations are flagged and keep
/// their last iterate.
FitResult fit_shifts(const ScalarField2D& f, const std::vector<InterfaceCurve>& interfaces,
                     const CutoffProfile& cp, const GridSpec& gs);

struct ErrorFieldReport {
    std::vector<double> phi;   // u - g_* on the grid
    double sup = 0.0;          // max |phi|
    double sup_core = 0.0;     // max |phi| over {|u| <= 1 - b}
    double max_orth_defect = 0.0;
};

/// phi = u - g_* plus norms and the per-column orthogonality defect.
ErrorFieldReport error_field(const ScalarField2D& f, const LayerAnsatz& a, double b = 0.1);

/// Reduced Toda residual in stretched (profile) units:
///   lhs_a = eps * (kappa_a + h_a'') ,
///   rhs_a = (4/sigma0)[A_{lo}^2 exp(-sqrt2 d_{a-1}/eps) - A_{hi}^2 exp(+sqrt2 d_{a+1}/eps)]
/// evaluated at (x1, f_a(x1)); d_0 = -inf and d_{Q+1} = +inf drop their terms.
/// A_{lo} = A_{(-1)^a}, A_{hi} = A_{(-1)^{a-1}} per the alternating convention.
struct TodaResidualReport {
    std::vector<double> x1;
    std::vector<std::vector<double>> lhs, rhs, residual; // [Q][n]
    double sup_residual = 0.0;
    double sup_rhs = 0.0;
};
TodaResidualReport toda_residual(const LayerAnsatz& a, const Profile& prof);

/// Blow-up rescaling of graph interfaces:
///   ftilde_a(y) = (1/eps) f_a(sqrt(eps) y) - (sqrt2 (a - alpha0)/2)|log eps|
/// on a uniform y grid covering the common graph range. a is the 1-based
/// layer index.
struct RescaledLayers {
    double epsilon = 0.0;
    int alpha0 = 0;
    std::vector<double> y;
    std::vector<std::vector<double>> f; // [Q][n]
};
RescaledLayers blow_up_rescale(const std::vector<InterfaceCurve>& interfaces,
                               double epsilon, int alpha0);

/// Inverse of blow_up_rescale (same index convention).
std::vector<InterfaceCurve> unrescale(const RescaledLayers& r);

struct SeparationEntry {
    double epsilon = 0.0;
    double min_gap = 0.0;
    double gap_over_epslog = 0.0;
    bool included = true;
    std::string note;
};
struct SeparationScan {
    std::vector<SeparationEntry> entries;
    double a = 0.0, b = 0.0; // fit min_gap = a eps|log eps| + b eps
};

/// Measures the min vertical gap between the two zero-level curves of each
/// state inside the inner window (10 eps margins) and fits
/// gap = a eps|log eps| + b eps. States failing the stability callback or
/// without exactly two graph curves are excluded with a note.
SeparationScan separation_scan(
    const std::vector<std::pair<double, const ScalarField2D*>>& states,
    const std::function<bool(const ScalarField2D&)>& is_stable);

/// CSV with columns x1,alpha,lhs,rhs,residual.
void save_toda_residual_csv(const TodaResidualReport& r, const std::string& path);

} // namespace aclab

#endif
