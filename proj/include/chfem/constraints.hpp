// ============================================================================
// constraints.hpp — linear side conditions that carve the admissible tensor
// subspace out of the broken cubic space.
//
// A tensor field is admissible when
//   * across every interior edge the normal component of its row-wise
//     divergence is continuous, and
//   * on every boundary edge the tangential part of tau*n and the normal
//     component of Div tau match the prescribed boundary data.
//
// The divergence conditions are imposed through edge moments: Div tau . n has
// degree <= 2 along an edge, so testing against the L2(e)-orthonormal
// Legendre polynomials q_0..q_2 pins it down pointwise.  Moment rows carry a
// sqrt(h) factor so row magnitudes stay comparable under refinement:
//   interior edge e : 3 rows   h^{+1/2} * < [Div tau . n], q_c >,  c = 0..2
//   boundary edge e : 3 rows   h^{+1/2} * < Div tau . n,   q_c >,  c = 0..2
// ([.] = jump, first minus second adjacent element in edge-table order.)
//
// The tangential boundary trace t' tau n is cubic along each boundary edge
// and is pinned by point conditions instead:
//   * its values at the two interior edge nodes are single shared degrees of
//     freedom (2 rows per boundary edge), and
//   * its endpoint values are combinations of the three shared vertex
//     components.  Imposing endpoint conditions edge by edge would duplicate
//     one condition per boundary vertex -- for symmetric tensors the endpoint
//     functionals of two boundary edges meeting at a right angle (or
//     collinearly) coincide up to sign -- so endpoint conditions are
//     collected per boundary vertex and a greedy orthogonalisation keeps
//     only the independent ones (one row at straight or right-angle corners,
//     two at general corners).
// The matrix therefore has full row rank.
//
// The same functionals applied to a prescribed boundary field give the
// inhomogeneous right-hand side for the constraint block.
// ============================================================================
#pragma once

#include "chfem/sigma_space.hpp"

#include <Eigen/Sparse>
#include <functional>
#include <vector>

namespace chfem {

struct ConstraintRow {
    int edge;    // global edge id
    int moment;  // divergence rows: Legendre index 0..2.  tangential rows:
                 // evaluation point along the edge -- 0 = node at 1/3,
                 // 1 = node at 2/3, 2 = lower endpoint, 3 = upper endpoint
    bool tangential;  // true: point value of t'tau n (boundary only);
                      // false: Div tau . n moment
};

class SigmaConstraints {
public:
    explicit SigmaConstraints(const SigmaSpace& space);

    const Eigen::SparseMatrix<double>& matrix() const { return C_; }
    int rows() const { return static_cast<int>(C_.rows()); }
    const std::vector<ConstraintRow>& row_info() const { return rows_; }

    // Moments of prescribed boundary traces, aligned with the rows of C.
    // tn_data(x, t_e, n_e)  : value of t' sigma n on the boundary,
    // dn_data(x, n_e)       : value of Div sigma . n on the boundary,
    // both evaluated in the shared edge frame (not the outward normal).
    Eigen::VectorXd boundary_moments(
        const std::function<double(const Eigen::Vector2d&, const Eigen::Vector2d&,
                                   const Eigen::Vector2d&)>& tn_data,
        const std::function<double(const Eigen::Vector2d&, const Eigen::Vector2d&)>& dn_data)
        const;

    // Dense rank diagnostics (small problems): returns the numerical rank of
    // the row space; full row rank is expected.
    int dense_rank(double rel_tol = 1e-10) const;

private:
    const SigmaSpace* space_;
    Eigen::SparseMatrix<double> C_;
    std::vector<ConstraintRow> rows_;
};

}  // namespace chfem
