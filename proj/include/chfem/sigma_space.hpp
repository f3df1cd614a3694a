// ============================================================================
// sigma_space.hpp — piecewise-cubic symmetric-tensor space with shared
// vertex values and shared edge normal traces.
//
// Every shape function is a scalar cubic Lagrange function times a constant
// symmetric 2x2 tensor, so on element K a field reads
//     tau(x) = sum_l  c_l * L_{n(l)}(x) * T_l .
// The tensors attached to the ten Lagrange nodes of K are chosen so that the
// trace tau*n on each edge is controlled only by degrees of freedom shared
// through that edge:
//
//   * vertex node:   3 Cartesian components (T = e11, e12+e21, e22), shared
//                    by all elements at the vertex;
//   * edge node (two per edge, at 1/3 and 2/3 from the lower-indexed
//     endpoint): the nn and tn+nt components in the edge frame are shared by
//     both adjacent elements, while the tt component is private to each
//     element (tt does not influence tau*n);
//   * centroid node: 3 Cartesian components, private to the element.
//
// Global layout:  [0, 3V)              vertex dofs  (v*3 + {11,12,22})
//                 [3V, 3V+4E)          shared edge dofs
//                                      (e*4 + {A nn, A tn, B nn, B tn}),
//                                      A/B = nodes at 1/3 / 2/3 from lo
//                 [3V+4E, 3V+4E+9T)    element dofs (t*9 + {tt at the six
//                                      edge nodes in local-edge order, then
//                                      centroid 11,12,22})
//
// The nine element-private dofs have identically vanishing normal trace on
// the element boundary; they span the local "bubble" enrichment.
//
// Useful identities (L scalar, T constant):
//   Div (L T)    = T * grad L           (divergence taken row-wise)
//   divDiv (L T) = T : hess L
// ============================================================================
#pragma once

#include "chfem/bary_poly.hpp"
#include "chfem/mesh.hpp"
#include "chfem/quadrature.hpp"

#include <Eigen/Dense>
#include <array>
#include <vector>

namespace chfem {

struct SigmaDof {
    int gdof;           // global index
    int node;           // local P3 Lagrange node (0..9)
    Eigen::Matrix2d T;  // constant symmetric tensor factor
};

class SigmaSpace {
public:
    explicit SigmaSpace(const TriMesh& mesh);

    const TriMesh& mesh() const { return *mesh_; }
    int ndof() const { return ndof_; }
    static constexpr int ldof = 30;  // 10 nodes x 3 components

    const std::array<SigmaDof, ldof>& dofs(int t) const {
        return elem_[static_cast<size_t>(t)];
    }

    // Field value at a barycentric point of element t.
    Eigen::Matrix2d eval(const Eigen::VectorXd& coef, int t, double l0, double l1,
                         double l2) const;
    // Row-wise divergence at a barycentric point of element t.
    Eigen::Vector2d eval_div(const Eigen::VectorXd& coef, int t, double l0, double l1,
                             double l2) const;

    // Tabulated scalar P3 data at the points of a cached triangle rule.
    static const ScalarTab& p3_at(const std::vector<QPoint>& rule);

    // Tabulated scalar P3 data along local edge k, parametrised lo -> hi by a
    // cached segment rule; a_lo is the local index of the edge's lower-indexed
    // global endpoint.
    static const ScalarTab& p3_edge_at(int k, int a_lo, const std::vector<QPoint1D>& rule);

private:
    const TriMesh* mesh_;
    int ndof_;
    std::vector<std::array<SigmaDof, ldof>> elem_;
};

// Symmetric tensor helpers (the three Cartesian basis tensors).
Eigen::Matrix2d tensor_e11();
Eigen::Matrix2d tensor_e12();  // [[0,1],[1,0]]
Eigen::Matrix2d tensor_e22();

}  // namespace chfem
