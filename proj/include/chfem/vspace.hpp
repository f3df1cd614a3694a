// ============================================================================
// vspace.hpp — elementwise linear scalar fields with no interelement
// continuity.  Dof (3t + a) carries the barycentric basis function lam_a on
// triangle t.
// ============================================================================
#pragma once

#include "chfem/mesh.hpp"

#include <Eigen/Dense>
#include <functional>

namespace chfem {

class VSpace {
public:
    explicit VSpace(const TriMesh& mesh) : mesh_(&mesh) {}

    const TriMesh& mesh() const { return *mesh_; }
    int ndof() const { return 3 * mesh_->num_tris(); }

    double eval(const Eigen::VectorXd& coef, int t, double l0, double l1, double l2) const {
        return coef[3 * t + 0] * l0 + coef[3 * t + 1] * l1 + coef[3 * t + 2] * l2;
    }

    // integral of the field over the whole mesh (exact)
    double integral(const Eigen::VectorXd& coef) const;

    // interpolate a smooth function by matching vertex values per element
    Eigen::VectorXd interpolate_nodal(const std::function<double(const Eigen::Vector2d&)>& f) const;

    // elementwise L2-orthogonal projection of a general function
    Eigen::VectorXd project_l2(const std::function<double(const Eigen::Vector2d&)>& f,
                               int quad_degree) const;

private:
    const TriMesh* mesh_;
};

}  // namespace chfem
