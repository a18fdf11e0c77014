#ifndef ACLAB_GEOMETRY_HPP
#define ACLAB_GEOMETRY_HPP

#include <optional>
#include <string>
#include <vector>

#include "aclab/field.hpp"

namespace aclab {

struct Point {
    double x = 0, y = 0;
};

/// Oriented polyline extracted from a level set, optionally in graph form
/// (single-valued samples f(x1) over the grid columns it spans).
struct InterfaceCurve {
    std::vector<Point> pts;
    bool oriented_up = true; // +normal side has larger u
    // graph form (valid when the polyline is single-valued over x1)
    bool graph_valid = false;
    std::vector<double> gx;   // ascending x1 samples
    std::vector<double> gf;   // f(x1)
    double mean_y = 0.0;

    /// Cached cumulative arclength at the polyline vertices.
    std::vector<double> arclen;
    void finalize(); // fills graph form, arclength, mean_y

    /// f(x1) by linear interpolation of the graph samples (graph form only).
    double graph_at(double x1) const;
    /// df/dx1 and d2f/dx1^2 by centred differences of the graph samples.
    double graph_slope(double x1) const;
    double graph_curvature(double x1) const; // f'' / (1+f'^2)^{3/2}
};

struct LevelsetResult {
    std::vector<InterfaceCurve> curves;
    int ambiguous_cells = 0;
    // a-posteriori check that |grad u| stays away from 0 along {u = t}
    double min_grad_on_level = 0.0;
};

/// Marching squares at level t with linear interpolation. Saddle cells are
/// resolved by the cell-average rule; the count of ambiguous cells is
/// reported. Curves sorted bottom-to-top by mean y.
LevelsetResult extract_levelset(const ScalarField2D& f, double t);

/// Graph curve from samples (x ascending).
InterfaceCurve curve_from_graph(const std::vector<double>& x, const std::vector<double>& f);

/// Level-set curvature functional sampled from bilinear-interpolated values
/// with central differences of step h/2:
///   |B|^2 = (|D^2 u|^2 - |grad|grad u||^2) / |grad u|^2 = H^2 + |grad_T log|grad u||^2
struct CurvatureSample {
    double B = 0.0;          // |B|
    double H = 0.0;          // level-curve curvature, div(grad u/|grad u|)
    double tangential = 0.0; // |grad_T log |grad u||
    double grad_norm = 0.0;
    bool degenerate = false; // |grad u| below the floor
};

/// Requires |u(pt)| <= 1 - b. When |grad u| is below grad_floor the sample
/// comes back flagged rather than throwing.
CurvatureSample curvature_B(const ScalarField2D& f, Point pt, double b,
                            double grad_floor = 1e-8);

/// The split (H, grad_T log|grad u|) from the same derivative samples, so
/// |B|^2 = H^2 + tangential^2 holds to roundoff.
std::pair<double, double> curvature_H_and_tangential(const ScalarField2D& f, Point pt,
                                                     double b = 0.1,
                                                     double grad_floor = 1e-8);

/// Signed distance to the curve (positive on the oriented "up" side) and
/// the foot point. y_foot is the x1 coordinate of the foot for graph-form
/// curves and the arclength parameter otherwise.
struct DistanceResult {
    double z = 0.0;
    double y_foot = 0.0;
    Point foot;
};
DistanceResult signed_distance(const InterfaceCurve& c, Point pt);

/// Scalar Fermi metric factor for n = 2: lambda(y, z) = lambda(y,0) (1 - z A(y))^2
/// with lambda(y,0) = 1 (the normalized scalar reduction of the metric
/// tensor at z = 0) and A the discrete curvature at the foot point.
/// Rejects |z| beyond 0.9 / max |A| (focal-distance guard).
double fermi_metric(const InterfaceCurve& c, double y, double z);

/// The five distance-comparison residuals between two nearby interfaces,
/// each reported raw and normalized by eps^{1/2} |log eps|^{3/2}:
///   r1: dist_{Gamma_b}(Pi_b(Pi_a(X)), Pi_b(X))       (arclength)
///   r2: |d_b(Pi_a(X)) + d_a(Pi_b(X))|
///   r3: |d_a(X) - d_b(X) + d_b(Pi_a(X))|
///   r4: |d_a(X) - d_b(X) - d_a(Pi_b(X))|
///   r5: 1 - grad d_a(X) . grad d_b(X)
struct DistanceComparisonReport {
    double residual[5] = {0, 0, 0, 0, 0};
    double normalized[5] = {0, 0, 0, 0, 0};
    bool precondition_ok = true;
};
DistanceComparisonReport distance_comparison_check(const InterfaceCurve& ca,
                                                   const InterfaceCurve& cb, Point pt,
                                                   double epsilon, double K);

/// CSV polylines: x,y rows, blank line between curves.
void save_curves_csv(const std::vector<InterfaceCurve>& curves, const std::string& path);

} // namespace aclab

#endif
