// ============================================================================
// errors.hpp — L2 errors of the discrete fields against closed-form targets.
// ============================================================================
#pragma once

#include "chfem/manufactured.hpp"
#include "chfem/sigma_space.hpp"
#include "chfem/vspace.hpp"

namespace chfem {

// || sigma_h - sigma(t) ||_{L2} (Frobenius norm pointwise)
double error_sigma(const SigmaSpace& space, const Eigen::VectorXd& s, const CHCase& cas,
                   double t, int quad_degree);

// || u_h - u(t) ||_{L2}
double error_state(const VSpace& vs, const Eigen::VectorXd& w, const CHCase& cas, double t,
                   int quad_degree);

// || v_h ||_{L2} for a scalar field (used for steady-state checks)
double l2_norm_state(const VSpace& vs, const Eigen::VectorXd& w);

}  // namespace chfem
