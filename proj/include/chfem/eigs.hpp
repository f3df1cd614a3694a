// ============================================================================
// eigs.hpp — generalized eigenvalue helpers.
//
// Two routes are provided and cross-checked in the tests:
//   * dense GeneralizedSelfAdjointEigenSolver for small reduced pencils;
//   * a shift-invert Arnoldi iteration (full reorthogonalisation, fixed
//     Krylov dimension) on the operator (A - shift*M)^{-1} M for large
//     sparse indefinite pencils, returning the eigenvalues of A x = lam M x
//     closest to the shift.
// ============================================================================
#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

namespace chfem {

// Ascending eigenvalues of A x = lam B x, A symmetric, B SPD (dense).
std::vector<double> dense_generalized_eigs(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

struct ShiftInvertOptions {
    double shift = 1.0;
    int krylov_dim = 120;
    int wanted = 8;           // converged Ritz values requested
    double tol = 1e-9;        // relative Ritz residual ||A v - lam M v|| / |lam|
    unsigned seed = 20240811; // start-vector seed
    // sign making k_sign*M positive (semi)definite on the physical modes;
    // the iteration orthogonalises in the k_sign*M inner product
    double k_sign = -1.0;
};

// Eigenvalues of the pencil (A, M) near the shift, ascending.  A must be
// symmetric and invertible at the shift; M is symmetric positive
// semidefinite (a singular M simply restricts the usable spectrum, spurious
// infinite modes are filtered through the residual test).
std::vector<double> shift_invert_eigs(const Eigen::SparseMatrix<double>& A,
                                      const Eigen::SparseMatrix<double>& M,
                                      const ShiftInvertOptions& opt);

}  // namespace chfem
