// ============================================================================
// assembly.hpp — finite element matrices and load vectors for the mixed
// scheme.
//
// Unknown ordering in the saddle systems: tensor dofs first, then the scalar
// dofs, then one Lagrange multiplier per constraint row (and, where present,
// a single mean multiplier last).
// ============================================================================
#pragma once

#include "chfem/constraints.hpp"
#include "chfem/sigma_space.hpp"
#include "chfem/vspace.hpp"

#include <Eigen/Sparse>
#include <functional>

namespace chfem {

using SpMat = Eigen::SparseMatrix<double>;

// Gram matrix of the tensor space, (tau, phi) over the domain.
SpMat mass_sigma(const SigmaSpace& space, int quad_degree);

// Gram matrix of the scalar space (block diagonal, exact).
SpMat mass_v(const VSpace& vs);

// Coupling B with B(i,j) = (divDiv phi_j, psi_i); rows scalar, cols tensor.
SpMat divdiv_coupling(const SigmaSpace& space, const VSpace& vs);

// mean vector j_i = (1, psi_i)
Eigen::VectorXd mean_vector(const VSpace& vs);

// Load (w(x) I, phi) for a scalar field w given at barycentric points of each
// element; used with w = nonlinear potential derivative of the previous
// iterate.  The identity-tensor pairing reduces to tr(T) * integral(w * L).
Eigen::VectorXd load_isotropic(
    const SigmaSpace& space,
    const std::function<double(int, double, double, double)>& w_at, int quad_degree);

// Boundary load (n' phi n, q)_{boundary} for scalar boundary data q(x) given
// in the outward normal direction convention:
//   contribution of edge e uses the outward normal of its adjacent element.
Eigen::VectorXd load_normal_trace(
    const SigmaSpace& space,
    const std::function<double(const Eigen::Vector2d&, const Eigen::Vector2d&)>& q_of_x_nout,
    int quad_degree);

// Volume load (g, psi) for the scalar space.
Eigen::VectorXd load_scalar(const VSpace& vs,
                            const std::function<double(const Eigen::Vector2d&)>& g,
                            int quad_degree);

// --- saddle-point system assembly -------------------------------------------

// One time step of the linearised evolution:
//   [ Ms   -B'   C' ] [ s ]   [ r_sigma ]
//   [ -B  -Mu/tau 0 ] [ w ] = [ r_u     ]
//   [ C    0     0  ] [ m ]   [ r_c     ]
SpMat step_matrix(const SpMat& Ms, const SpMat& B, const SpMat& Mu, const SpMat& C, double tau);

// Stationary counterpart with a zero (2,2) block plus a single mean
// constraint on the scalar unknown:
//   [ Ms  -B'  C'  0  ] [ s ]   [ r_sigma ]
//   [ -B   0   0  -j  ] [ w ] = [ r_u     ]
//   [ C    0   0   0  ] [ m ]   [ r_c     ]
//   [ 0   -j'  0   0  ] [ rho]  [ r_mean  ]
SpMat stationary_matrix(const SpMat& Ms, const SpMat& B, const SpMat& C,
                        const Eigen::VectorXd& jvec);

// Eigen pencil blocks: A as in step_matrix with the (2,2) block removed, and
// the mass weight M = diag(0, -Mu, 0).
SpMat pencil_stiffness(const SpMat& Ms, const SpMat& B, const SpMat& C);
SpMat pencil_mass(const SpMat& Mu, int n_sigma, int n_con);

}  // namespace chfem
