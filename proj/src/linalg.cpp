#include "aclab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "aclab/kernels.hpp"

namespace aclab {

bool BandedLDLT::factorize() {
    // Row-oriented LDL^T restricted to the band. a_[k*n+i] holds A(i+k, i)
    // on input and L(i+k, i) (k>0) / D(i) (k=0) on output.
    const std::size_t n = n_, bw = bw_;
    for (std::size_t j = 0; j < n; ++j) {
        double d = at(j, 0);
        std::size_t lo = j > bw ? j - bw : 0;
        for (std::size_t p = lo; p < j; ++p) {
            double l = at(p, j - p);
            d -= l * l * at(p, 0);
        }
        if (!(d > 0.0)) return false;
        at(j, 0) = d;
        std::size_t hi = std::min(n - 1, j + bw);
        for (std::size_t i = j + 1; i <= hi; ++i) {
            double s = at(j, i - j);
            std::size_t lo2 = i > bw ? i - bw : 0;
            for (std::size_t p = std::max(lo, lo2); p < j; ++p)
                s -= at(p, i - p) * at(p, j - p) * at(p, 0);
            at(j, i - j) = s / d;
        }
    }
    factored_ = true;
    return true;
}

void BandedLDLT::solve(const double* b, double* x) const {
    const std::size_t n = n_, bw = bw_;
    // forward: L y = b
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        std::size_t lo = i > bw ? i - bw : 0;
        for (std::size_t p = lo; p < i; ++p) s -= at(p, i - p) * x[p];
        x[i] = s;
    }
    // diagonal
    for (std::size_t i = 0; i < n; ++i) x[i] /= at(i, 0);
    // backward: L^T x = y
    for (std::size_t i = n; i-- > 0;) {
        double s = x[i];
        std::size_t hi = std::min(n - 1, i + bw);
        for (std::size_t p = i + 1; p <= hi; ++p) s -= at(i, p - i) * x[p];
        x[i] = s;
    }
}

void jacobi_eigen(std::vector<double>& a, std::size_t m, std::vector<double>& evals,
                  std::vector<double>& evecs) {
    evecs.assign(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i) evecs[i * m + i] = 1.0;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j) off += a[i * m + j] * a[i * m + j];
        if (off < 1e-28) break;
        for (std::size_t p = 0; p < m; ++p)
            for (std::size_t q = p + 1; q < m; ++q) {
                double apq = a[p * m + q];
                if (std::fabs(apq) < 1e-300) continue;
                double theta = (a[q * m + q] - a[p * m + p]) / (2.0 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (std::size_t k = 0; k < m; ++k) {
                    double akp = a[k * m + p], akq = a[k * m + q];
                    a[k * m + p] = c * akp - s * akq;
                    a[k * m + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < m; ++k) {
                    double apk = a[p * m + k], aqk = a[q * m + k];
                    a[p * m + k] = c * apk - s * aqk;
                    a[q * m + k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < m; ++k) {
                    double vkp = evecs[k * m + p], vkq = evecs[k * m + q];
                    evecs[k * m + p] = c * vkp - s * vkq;
                    evecs[k * m + q] = s * vkp + c * vkq;
                }
            }
    }
    // sort ascending
    std::vector<std::size_t> idx(m);
    for (std::size_t i = 0; i < m; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t i, std::size_t j) { return a[i * m + i] < a[j * m + j]; });
    evals.resize(m);
    std::vector<double> ve(m * m);
    for (std::size_t c = 0; c < m; ++c) {
        evals[c] = a[idx[c] * m + idx[c]];
        for (std::size_t r = 0; r < m; ++r) ve[r * m + c] = evecs[r * m + idx[c]];
    }
    evecs.swap(ve);
}

namespace {

void orthonormalize(std::vector<std::vector<double>>& X) {
    const std::size_t m = X.size();
    for (std::size_t i = 0; i < m; ++i) {
        for (int rep = 0; rep < 2; ++rep)
            for (std::size_t j = 0; j < i; ++j) {
                double d = kern::dot(X[i].data(), X[j].data(), X[i].size());
                kern::axpy(-d, X[j].data(), X[i].data(), X[i].size());
            }
        double nrm = std::sqrt(kern::dot(X[i].data(), X[i].data(), X[i].size()));
        if (nrm < 1e-300) nrm = 1.0;
        kern::scale(1.0 / nrm, X[i].data(), X[i].size());
    }
}

} // namespace

EigResult lowest_eigenpairs_banded(std::size_t n, const SymOp& apply,
                                   const BandAssembler& assemble, double sigma0,
                                   int k, double tol, int max_rounds, unsigned seed) {
    EigResult out;
    const std::size_t m = std::min<std::size_t>(n, std::size_t(k) + 5);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<std::vector<double>> X(m, std::vector<double>(n));
    for (auto& col : X)
        for (auto& v : col) v = unif(rng);
    orthonormalize(X);

    double sigma = sigma0;
    double sigma_safe = sigma0;
    BandedLDLT fac(1, 0);
    auto refactor = [&](double s) {
        assemble(s, fac);
        if (fac.factorize()) { sigma = s; sigma_safe = s; return true; }
        return false;
    };
    {
        // sigma0 must be safe; if not, walk down until it is.
        double s = sigma0;
        bool ok = false;
        for (int attempt = 0; attempt < 60 && !ok; ++attempt) {
            assemble(s, fac);
            ok = fac.factorize();
            if (!ok) s -= std::max(1.0, std::fabs(s));
        }
        if (!ok) throw std::runtime_error("lowest_eigenpairs: no positive definite shift found");
        sigma = s;
        sigma_safe = s;
    }

    std::vector<std::vector<double>> Y(m, std::vector<double>(n));
    std::vector<double> small_mat(m * m), evals, evecs;
    std::vector<double> Av(n);
    out.values.assign(k, 0.0);
    out.residuals.assign(k, 1e300);
    int since_reshift = 0;
    for (int round = 0; round < max_rounds; ++round) {
        ++out.iterations;
        for (std::size_t i = 0; i < m; ++i) fac.solve(X[i].data(), Y[i].data());
        orthonormalize(Y);
        // Rayleigh-Ritz with the true operator
        std::vector<std::vector<double>> AY(m, std::vector<double>(n));
        for (std::size_t i = 0; i < m; ++i) apply(Y[i].data(), AY[i].data());
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j <= i; ++j) {
                double v = kern::dot(Y[i].data(), AY[j].data(), n);
                small_mat[i * m + j] = v;
                small_mat[j * m + i] = v;
            }
        std::vector<double> sm = small_mat;
        jacobi_eigen(sm, m, evals, evecs);
        for (std::size_t c = 0; c < m; ++c) {
            std::fill(X[c].begin(), X[c].end(), 0.0);
            for (std::size_t r = 0; r < m; ++r)
                kern::axpy(evecs[r * m + c], Y[r].data(), X[c].data(), n);
        }
        // residuals of the first k Ritz pairs
        bool all_ok = true;
        for (int c = 0; c < k; ++c) {
            apply(X[c].data(), Av.data());
            kern::axpy(-evals[c], X[c].data(), Av.data(), n);
            double res = std::sqrt(kern::dot(Av.data(), Av.data(), n));
            out.values[c] = evals[c];
            out.residuals[c] = res;
            if (res > tol) all_ok = false;
        }
        if (all_ok) {
            out.converged = true;
            break;
        }
        // pull the shift closer once Ritz values settle (faster contraction)
        if (++since_reshift >= 3) {
            since_reshift = 0;
            double spread = std::max(1e-8, evals[m - 1] - evals[0]);
            double target = evals[0] - 0.05 * spread;
            if (target > sigma + 0.01 * spread) {
                if (!refactor(target)) {
                    // not SPD there; restore the known-good shift
                    assemble(sigma_safe, fac);
                    fac.factorize();
                    sigma = sigma_safe;
                }
            }
        }
    }
    out.vectors.assign(k, {});
    for (int c = 0; c < k; ++c) out.vectors[c] = X[c];
    return out;
}

int pcg(std::size_t n, const SymOp& apply, const double* diag, const double* b,
        double* x, double tol_abs, int max_iter) {
    std::vector<double> r(n), z(n), p(n), Ap(n);
    apply(x, Ap.data());
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - Ap[i];
    for (std::size_t i = 0; i < n; ++i) z[i] = diag ? r[i] / diag[i] : r[i];
    p = z;
    double rz = kern::dot(r.data(), z.data(), n);
    for (int it = 1; it <= max_iter; ++it) {
        apply(p.data(), Ap.data());
        double pAp = kern::dot(p.data(), Ap.data(), n);
        if (!(pAp > 0.0)) return -1; // nonpositive curvature
        double alpha = rz / pAp;
        kern::axpy(alpha, p.data(), x, n);
        kern::axpy(-alpha, Ap.data(), r.data(), n);
        double rmax = 0.0;
        for (std::size_t i = 0; i < n; ++i) rmax = std::max(rmax, std::fabs(r[i]));
        if (rmax <= tol_abs) return it;
        for (std::size_t i = 0; i < n; ++i) z[i] = diag ? r[i] / diag[i] : r[i];
        double rz_new = kern::dot(r.data(), z.data(), n);
        double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    return max_iter;
}

} // namespace aclab
