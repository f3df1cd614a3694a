// Shared helpers for the unit tests.
#pragma once

#include "chfem/bary_poly.hpp"
#include "chfem/sigma_space.hpp"

#include <Eigen/Dense>
#include <functional>

namespace testutil {

using TensorField = std::function<Eigen::Matrix2d(const Eigen::Vector2d&)>;

// Interpolate a smooth symmetric tensor field through the nodal degrees of
// freedom: at every Lagrange node the three local dofs carry linearly
// independent constant tensors, so matching the field value determines the
// coefficients uniquely.  Shared dofs receive consistent values because the
// nodal tensors of shared dofs are defined in the shared edge/vertex frames.
// Exact for fields with componentwise cubic entries.
inline Eigen::VectorXd interpolate_tensor(const chfem::SigmaSpace& sp, const TensorField& F) {
    const chfem::TriMesh& m = sp.mesh();
    Eigen::VectorXd coef = Eigen::VectorXd::Zero(sp.ndof());
    const auto& nodes = chfem::p3_basis().node;
    for (int t = 0; t < m.num_tris(); ++t) {
        const auto& dofs = sp.dofs(t);
        for (int node = 0; node < 10; ++node) {
            int idx[3], found = 0;
            for (int l = 0; l < chfem::SigmaSpace::ldof; ++l)
                if (dofs[l].node == node && found < 3) idx[found++] = l;
            if (found != 3) continue;  // guarded by a dedicated structural test
            const Eigen::Vector2d x = m.point(t, nodes[node][0] / 3.0, nodes[node][1] / 3.0,
                                              nodes[node][2] / 3.0);
            Eigen::Matrix3d A;
            for (int j = 0; j < 3; ++j) {
                const Eigen::Matrix2d& T = dofs[idx[j]].T;
                A.col(j) << T(0, 0), T(0, 1), T(1, 1);
            }
            const Eigen::Matrix2d M = F(x);
            const Eigen::Vector3d rhs(M(0, 0), M(0, 1), M(1, 1));
            const Eigen::Vector3d c = A.fullPivLu().solve(rhs);
            for (int j = 0; j < 3; ++j) coef[dofs[idx[j]].gdof] = c[j];
        }
    }
    return coef;
}

// a fixed cubic symmetric tensor field with dense cross terms
inline Eigen::Matrix2d cubic_field(const Eigen::Vector2d& p) {
    const double x = p[0], y = p[1];
    Eigen::Matrix2d M;
    M(0, 0) = 1.0 + x - 2.0 * y + x * x * y + 0.5 * y * y * y;
    M(0, 1) = x * y - 0.25 * x * x * x + 2.0 * y * y + x;
    M(1, 1) = 2.0 - y + 3.0 * x * y * y + x * x;
    M(1, 0) = M(0, 1);
    return M;
}

}  // namespace testutil
