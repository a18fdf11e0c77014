#include "aclab/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "aclab/kernels.hpp"
#include "aclab/linalg.hpp"
#include <json.hpp>

namespace aclab {

namespace {
constexpr double kSqrt2 = 1.4142135623730950488;
}

LinearizedOperator::LinearizedOperator(const ScalarField2D& f, const Potential& p,
                                       Window w)
    : w_(w), eps_(f.epsilon), hx_(f.hx), hy_(f.hy) {
    if (w.i1 > f.nx || w.j1 > f.ny || w.width() < 5 || w.height() < 5)
        throw std::invalid_argument("LinearizedOperator: window too small or outside grid");
    wpp_.resize(w.width() * w.height());
    for (std::size_t j = 0; j < w.height(); ++j)
        for (std::size_t i = 0; i < w.width(); ++i)
            wpp_[j * w.width() + i] = p.Wpp(f.at(w.i0 + i, w.j0 + j));
}

void LinearizedOperator::apply(const double* v, double* out) const {
    kern::apply_window_operator(wx(), wy(), hx_, hy_, eps_, 0.0, wpp_.data(), v, out);
}

double LinearizedOperator::spectrum_lower_bound() const {
    double wmin = *std::min_element(wpp_.begin(), wpp_.end());
    return wmin / eps_ - 1e-6;
}

LinearizedOperator assemble_linearized(const ScalarField2D& f, const Potential& p,
                                       Window w) {
    return LinearizedOperator(f, p, w);
}

SpectralReport lowest_eigenpairs(const LinearizedOperator& L, int k) {
    if (k < 1 || k > 10) throw std::invalid_argument("lowest_eigenpairs: k in [1,10]");
    const std::size_t wx = L.wx(), wy = L.wy(), n = L.size();
    // band ordering along the shorter dimension keeps the bandwidth small
    const bool x_fast = wx <= wy;
    const std::size_t bw = x_fast ? wx : wy;

    auto idx = [&](std::size_t i, std::size_t j) {
        return x_fast ? j * wx + i : i * wy + j;
    };
    const double cx = L.epsilon() / (L.hx() * L.hx());
    const double cy = L.epsilon() / (L.hy() * L.hy());
    const auto& wpp = L.wpp();

    auto apply_perm = [&](const double* v, double* out) {
        // operator in band ordering
        for (std::size_t j = 0; j < wy; ++j)
            for (std::size_t i = 0; i < wx; ++i) {
                std::size_t k0 = idx(i, j);
                double s = (2.0 * cx + 2.0 * cy + wpp[j * wx + i] / L.epsilon()) * v[k0];
                if (i > 0) s -= cx * v[idx(i - 1, j)];
                if (i + 1 < wx) s -= cx * v[idx(i + 1, j)];
                if (j > 0) s -= cy * v[idx(i, j - 1)];
                if (j + 1 < wy) s -= cy * v[idx(i, j + 1)];
                out[k0] = s;
            }
    };
    auto assemble = [&](double shift, BandedLDLT& m) {
        m = BandedLDLT(n, bw);
        for (std::size_t j = 0; j < wy; ++j)
            for (std::size_t i = 0; i < wx; ++i) {
                std::size_t k0 = idx(i, j);
                m.at(k0, 0) = 2.0 * cx + 2.0 * cy + wpp[j * wx + i] / L.epsilon() - shift;
                // neighbours with larger band index
                if (x_fast) {
                    if (i + 1 < wx) m.at(k0, 1) = -cx;
                    if (j + 1 < wy) m.at(k0, bw) = -cy;
                } else {
                    if (j + 1 < wy) m.at(k0, 1) = -cy;
                    if (i + 1 < wx) m.at(k0, bw) = -cx;
                }
            }
    };

    EigResult r = lowest_eigenpairs_banded(n, apply_perm, assemble,
                                           L.spectrum_lower_bound() - 1.0, k);
    SpectralReport rep;
    rep.window = L.window();
    rep.eigenvalues = r.values;
    rep.residuals = r.residuals;
    rep.iterations = r.iterations;
    rep.converged = r.converged;
    rep.eigenvectors.assign(r.vectors.size(), {});
    for (std::size_t c = 0; c < r.vectors.size(); ++c) {
        // permute back to window row-major
        rep.eigenvectors[c].assign(n, 0.0);
        for (std::size_t j = 0; j < wy; ++j)
            for (std::size_t i = 0; i < wx; ++i)
                rep.eigenvectors[c][j * wx + i] = r.vectors[c][idx(i, j)];
    }
    return rep;
}

SpectralReport morse_index(const ScalarField2D& f, const Potential& p, Window w,
                           double tol_neg) {
    LinearizedOperator L(f, p, w);
    if (tol_neg < 0.0) tol_neg = 1e-6 / f.epsilon;
    int k = int(std::min<std::size_t>(10, L.size() - 1));
    SpectralReport rep = lowest_eigenpairs(L, k);
    rep.tol_neg = tol_neg;
    rep.morse_index = 0;
    for (double ev : rep.eigenvalues)
        if (ev < -tol_neg) ++rep.morse_index;
    if (!rep.eigenvalues.empty() && rep.eigenvalues.back() < -tol_neg)
        rep.index_unresolved = true;
    return rep;
}

double stability_Q(const ScalarField2D& f, const Potential& p, Window w,
                   const std::vector<double>& testfn) {
    const std::size_t wx = w.width(), wy = w.height();
    if (testfn.size() != wx * wy)
        throw std::invalid_argument("stability_Q: testfn size mismatch");
    for (std::size_t i = 0; i < wx; ++i)
        if (testfn[i] != 0.0 || testfn[(wy - 1) * wx + i] != 0.0)
            throw std::invalid_argument("stability_Q: testfn must vanish on the boundary ring");
    for (std::size_t j = 0; j < wy; ++j)
        if (testfn[j * wx] != 0.0 || testfn[j * wx + wx - 1] != 0.0)
            throw std::invalid_argument("stability_Q: testfn must vanish on the boundary ring");

    double sum = 0.0;
    for (std::size_t j = 0; j + 1 < wy; ++j)
        for (std::size_t i = 0; i + 1 < wx; ++i) {
            double v00 = testfn[j * wx + i], v10 = testfn[j * wx + i + 1];
            double v01 = testfn[(j + 1) * wx + i], v11 = testfn[(j + 1) * wx + i + 1];
            double gx = 0.5 * ((v10 - v00) + (v11 - v01)) / f.hx;
            double gy = 0.5 * ((v01 - v00) + (v11 - v10)) / f.hy;
            double phim = 0.25 * (v00 + v10 + v01 + v11);
            double um = 0.25 * (f.at(w.i0 + i, w.j0 + j) + f.at(w.i0 + i + 1, w.j0 + j) +
                                f.at(w.i0 + i, w.j0 + j + 1) + f.at(w.i0 + i + 1, w.j0 + j + 1));
            sum += (f.epsilon * (gx * gx + gy * gy) +
                    p.Wpp(um) * phim * phim / f.epsilon) *
                   f.hx * f.hy;
        }
    return sum;
}

ReducedStabilityReport reduced_stability_check(const LayerAnsatz& a, const Profile& prof,
                                               const std::vector<double>& eta,
                                               bool stable_flag) {
    // the tail-amplitude weights of the interaction terms are absorbed into
    // the inequality's constant; prof pins the profile the ansatz was built
    // from
    (void)prof;
    const int Q = int(a.interfaces.size());
    const std::size_t nx = a.g_star.nx;
    if (eta.size() != nx)
        throw std::invalid_argument("reduced_stability_check: eta size mismatch");
    if (eta.front() != 0.0 || eta.back() != 0.0)
        throw std::invalid_argument("reduced_stability_check: eta must vanish at the ends");

    ReducedStabilityReport rep;
    rep.stable = stable_flag;
    const double eps = a.epsilon;
    const double dy = a.g_star.hx / eps; // stretched measure

    rep.lhs_per_layer.assign(Q, 0.0);
    double int_eta_sq = 0.0, int_etap_sq = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
        double x = a.g_star.x_of(i);
        double e2 = eta[i] * eta[i];
        int_eta_sq += e2 * dy;
        if (i + 1 < nx) {
            double d = (eta[i + 1] - eta[i]) / dy;
            int_etap_sq += d * d * dy;
        }
        for (int q = 0; q < Q; ++q) {
            const InterfaceCurve& c = a.interfaces[q];
            if (x < c.gx.front() || x > c.gx.back()) continue;
            Point base{x, c.graph_at(x)};
            double term = 0.0;
            if (q > 0) {
                double dlo = signed_distance(a.interfaces[q - 1], base).z;
                term += std::exp(-kSqrt2 * dlo / eps);
            }
            if (q + 1 < Q) {
                double dhi = signed_distance(a.interfaces[q + 1], base).z;
                term += std::exp(kSqrt2 * dhi / eps);
            }
            rep.lhs_per_layer[q] += e2 * term * dy;
        }
    }
    for (double v : rep.lhs_per_layer) rep.lhs += v;
    rep.int_eta_prime_sq = int_etap_sq;
    rep.eps43_int_eta_sq = std::pow(eps, 4.0 / 3.0) * int_eta_sq;
    double denom = rep.int_eta_prime_sq + rep.eps43_int_eta_sq;
    rep.ratio = denom > 0 ? rep.lhs / denom : 0.0;
    return rep;
}

void save_spectral_json(const SpectralReport& rep, const std::string& path) {
    nlohmann::json j;
    j["eigenvalues"] = rep.eigenvalues;
    j["residuals"] = rep.residuals;
    j["morse_index"] = rep.morse_index;
    j["tol_neg"] = rep.tol_neg;
    j["window"] = {rep.window.i0, rep.window.i1, rep.window.j0, rep.window.j1};
    j["iterations"] = rep.iterations;
    j["converged"] = rep.converged;
    j["index_unresolved"] = rep.index_unresolved;
    std::ofstream out(path);
    out << j.dump(2) << "\n";
}

} // namespace aclab
