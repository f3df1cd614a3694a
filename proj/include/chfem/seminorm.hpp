// ============================================================================
// seminorm.hpp — the mesh-dependent second-order seminorm on the broken
// linear space:
//   |v|^2 = sum_K |v|_{H2(K)}^2
//         + sum_{interior e} h_e^{-3} ||[v]||_{L2(e)}^2
//         + sum_{all e}      h_e^{-1} ||[dv/dn]||_{L2(e)}^2
// with boundary "jumps" taken as traces.  For elementwise linear fields the
// volume part vanishes and the kernel is exactly the globally constant field.
// ============================================================================
#pragma once

#include "chfem/vspace.hpp"

#include <Eigen/Sparse>

namespace chfem {

// Gram matrix G with  v' G v = |v|^2  on the broken linear space.
Eigen::SparseMatrix<double> seminorm_gram(const VSpace& vs, int edge_quad_degree = 4);

double seminorm(const VSpace& vs, const Eigen::VectorXd& w, int edge_quad_degree = 4);

}  // namespace chfem
