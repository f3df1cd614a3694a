// ============================================================================
// biharmonic.hpp — stationary fourth-order comparison problems on the
// L-shaped domain, discretised with the mixed tensor scheme.
//
// Source problem:  bilap u = g with prescribed normal derivative g1 and
// prescribed normal derivative of lap u (g2); the state is pinned through a
// mean constraint.  Eigenvalue problem: bilap u = lam u with the homogeneous
// versions of the same boundary conditions; zero is always an eigenvalue
// (constants) and is filtered out.
// ============================================================================
#pragma once

#include "chfem/manufactured.hpp"
#include "chfem/mesh.hpp"

#include <vector>

namespace chfem {

struct BiharmonicErrors {
    double sigma;  // || hess u - sigma_h ||_{L2}
    double state;  // || u - u_h ||_{L2}
    int n_dofs;
};

// Solve the source problem driven by the given closed-form solution
// (forcing, boundary data and the mean all evaluated from it).
BiharmonicErrors mixed_biharmonic_solve(const TriMesh& mesh,
                                        const std::shared_ptr<const ExactSolution>& exact);

// Smallest `count` nonzero eigenvalues.  dense = reduce to a dense Schur
// complement on the scalar space (exact multiplicities); otherwise a
// shift-invert Krylov iteration on the full saddle pencil.
std::vector<double> mixed_biharmonic_eigs(const TriMesh& mesh, int count, bool dense);

}  // namespace chfem
