// ============================================================================
// morley.hpp — the quadratic Morley plate element as a fourth-order
// comparison discretisation.
//
// Degrees of freedom: one value per vertex and one mean normal derivative
// per edge (evaluated in the shared lo->hi edge frame, so both neighbouring
// elements address the same functional).  The broken Hessian bilinear form
// a(u,v) = sum_K (hess u, hess v)_K drives both the source and the
// eigenvalue problem; boundary edge dofs are essential (set from the
// prescribed normal derivative), and the source problem pins the state by a
// mean constraint through a scalar multiplier.
// ============================================================================
#pragma once

#include "chfem/manufactured.hpp"
#include "chfem/mesh.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <memory>
#include <vector>

namespace chfem {

class MorleySpace {
public:
    explicit MorleySpace(const TriMesh& mesh);

    const TriMesh& mesh() const { return *mesh_; }
    int ndof() const { return mesh_->num_vertices() + mesh_->num_edges(); }

    // global dof of local functional l (0..2 vertex values, 3..5 edge normal
    // derivatives of local edges 0..2)
    int global_dof(int t, int l) const;

    // local basis coefficients on element t: column j holds the coefficients
    // of local basis function j in the quadratic barycentric monomial basis
    // (ordering of monomial_exponents(2))
    const Eigen::Matrix<double, 6, 6>& local_basis(int t) const {
        return coef_[static_cast<size_t>(t)];
    }

    double eval(const Eigen::VectorXd& u, int t, double l0, double l1, double l2) const;
    Eigen::Vector2d eval_grad(const Eigen::VectorXd& u, int t, double l0, double l1,
                              double l2) const;
    // Hessian of a local basis function (constant per element)
    Eigen::Matrix2d basis_hessian(int t, int j) const;

private:
    const TriMesh* mesh_;
    std::vector<Eigen::Matrix<double, 6, 6>> coef_;
};

struct MorleyErrors {
    double sigma;  // || hess u - hess u_h ||_{L2} (broken)
    double state;  // || u - u_h ||_{L2}
    int n_dofs;
};

MorleyErrors morley_biharmonic_solve(const TriMesh& mesh,
                                     const std::shared_ptr<const ExactSolution>& exact);

std::vector<double> morley_biharmonic_eigs(const TriMesh& mesh, int count, bool dense);

}  // namespace chfem
