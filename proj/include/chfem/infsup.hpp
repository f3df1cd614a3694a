// ============================================================================
// infsup.hpp — discrete stability constant of the divDiv coupling.
//
// beta_h = inf over mean-zero scalar v of  sup over admissible tau of
//          (divDiv tau, v) / (||tau|| |v|_{2,h})
// computed as the square root of the smallest eigenvalue of the Schur
// complement pencil restricted to the admissible tensor subspace and the
// mean-zero scalar subspace:
//   ( Z'B' (Z'Ms Z)^{-1} B Z restricted,  G )  on  {v : (1,v) = 0}
// with Z a basis of ker C.  Dense linear algebra throughout — intended for
// coarse verification meshes.
// ============================================================================
#pragma once

#include "chfem/mesh.hpp"

namespace chfem {

double infsup_constant(const TriMesh& mesh);

}  // namespace chfem
