#ifndef ACLAB_LINALG_HPP
#define ACLAB_LINALG_HPP

#include <cstddef>
#include <functional>
#include <vector>

namespace aclab {

/// Symmetric positive definite banded matrix, lower storage:
/// band(i, k) = A(i+k, i) for k = 0..bw. Factorized in place as L D L^T.
class BandedLDLT {
  public:
    BandedLDLT(std::size_t n, std::size_t bw) : n_(n), bw_(bw), a_((bw + 1) * n, 0.0) {}

    double& at(std::size_t i, std::size_t k) { return a_[k * n_ + i]; }
    double at(std::size_t i, std::size_t k) const { return a_[k * n_ + i]; }
    std::size_t size() const { return n_; }
    std::size_t bandwidth() const { return bw_; }

    /// In-place factorization. Returns false on a non-positive pivot
    /// (matrix not positive definite); the caller may re-shift and retry.
    bool factorize();
    /// Solves A x = b with the factor computed by factorize().
    void solve(const double* b, double* x) const;

  private:
    std::size_t n_, bw_;
    std::vector<double> a_;
    bool factored_ = false;
};

/// Symmetric operator interface for the eigensolver.
using SymOp = std::function<void(const double*, double*)>;
/// Fills a BandedLDLT with (A - shift I) for the same operator.
using BandAssembler = std::function<void(double shift, BandedLDLT&)>;

struct EigResult {
    std::vector<double> values;               // ascending
    std::vector<std::vector<double>> vectors; // normalized
    std::vector<double> residuals;            // ||A v - lambda v||_2
    bool converged = false;
    int iterations = 0;
};

/// Lowest k eigenpairs of a symmetric operator by shifted inverse subspace
/// iteration with deflation: X <- (A - sigma I)^{-1} X, orthonormalize,
/// Rayleigh-Ritz. The shift starts at sigma0 (must be strictly below the
/// spectrum) and is pulled toward the lowest Ritz value as estimates settle;
/// a failed Cholesky simply keeps the previous safe shift.
EigResult lowest_eigenpairs_banded(std::size_t n, const SymOp& apply,
                                   const BandAssembler& assemble, double sigma0,
                                   int k, double tol = 1e-8, int max_rounds = 400,
                                   unsigned seed = 12345);

/// Jacobi eigensolver for small dense symmetric matrices (row-major).
void jacobi_eigen(std::vector<double>& a, std::size_t m, std::vector<double>& evals,
                  std::vector<double>& evecs);

/// Preconditioned conjugate gradient with Jacobi preconditioner.
/// Returns iterations used, or -1 when nonpositive curvature was detected
/// (matrix not positive definite along the Krylov path).
int pcg(std::size_t n, const SymOp& apply, const double* diag, const double* b,
        double* x, double tol_abs, int max_iter);

} // namespace aclab

#endif
