// ============================================================================
// ciarlet_raviart.hpp — the classical two-field P1/P1 mixed discretisation of
// the fourth-order problem, used as a second comparison method.
//
// Both the auxiliary variable s = lap(u) and the state u are continuous
// piecewise linears.  The coupled system
//     (s, r) + (grad u, grad r) = <g1, r>_boundary          for all r,
//     (grad s, grad v) + rho (1, v) = <g2, v>_boundary - (g, v)  for all v,
//     mean(u) prescribed,
// is solved as one symmetric saddle problem.  On nonconvex domains this
// discretisation is known to converge to the wrong limit for solutions with
// corner singularities; it is included deliberately so the verification
// driver can exhibit that failure next to the convergent methods.
// ============================================================================
#pragma once

#include "chfem/manufactured.hpp"
#include "chfem/mesh.hpp"

#include <memory>
#include <vector>

namespace chfem {

struct CiarletRaviartErrors {
    double sigma;  // || lap u - s_h ||_{L2}
    double state;  // || u - u_h ||_{L2}
    int n_dofs;    // vertices (per scalar field)
};

CiarletRaviartErrors ciarlet_raviart_solve(const TriMesh& mesh,
                                           const std::shared_ptr<const ExactSolution>& exact);

// Smallest `count` nonzero eigenvalues of the associated eigenproblem
// K M^{-1} K u = lambda M u (the constant mode is filtered out).
std::vector<double> ciarlet_raviart_eigs(const TriMesh& mesh, int count);

}  // namespace chfem
