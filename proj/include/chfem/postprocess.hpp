// ============================================================================
// postprocess.hpp — elementwise quintic reconstruction of the state.
//
// On each element the reconstructed field u~ in P5(K) matches the discrete
// flux in the Hessian energy and keeps the linear moments of the state:
//   (hess u~, hess q)_K = (sigma_h + eps^{-2} f(u_h) I, hess q)_K   q in P5(K)
//   (u~, v)_K           = (u_h, v)_K                                v in P1(K)
// The first block alone is singular on linear polynomials; the three moment
// constraints (enforced through Lagrange multipliers) close the system.  For
// consistent data the multipliers vanish identically.
// ============================================================================
#pragma once

#include "chfem/manufactured.hpp"
#include "chfem/sigma_space.hpp"
#include "chfem/vspace.hpp"

#include <Eigen/Dense>

namespace chfem {

struct ReconResult {
    // row t = coefficients of the 21 degree-5 barycentric monomials on
    // element t (ordering of monomial_exponents(5))
    Eigen::MatrixXd coef;
    double max_multiplier = 0.0;  // diagnostics; ~0 expected
};

ReconResult reconstruct_state(const SigmaSpace& space, const VSpace& vs,
                              const Eigen::VectorXd& s, const Eigen::VectorXd& w,
                              const CHCase& cas, int quad_degree = 8);

double eval_reconstruction(const Eigen::MatrixXd& coef, int t, double l0, double l1, double l2);

// || u~ - u(t) ||_{L2}
double error_reconstruction(const TriMesh& mesh, const Eigen::MatrixXd& coef, const CHCase& cas,
                            double t, int quad_degree);

}  // namespace chfem
