// ============================================================================
// mesh.hpp — conforming triangle meshes with deterministic entity numbering.
//
// Conventions used throughout the solver:
//   * triangles are counter-clockwise; local edge k is opposite local vertex k
//     (edge 0 = (v1,v2), edge 1 = (v2,v0), edge 2 = (v0,v1));
//   * a global edge stores its endpoints as (lo, hi) with lo < hi; its unit
//     tangent runs lo -> hi and its unit normal is the tangent rotated by
//     -90 degrees, n = (t_y, -t_x).  Every element adjacent to an edge uses
//     this one shared frame;
//   * uniform refinement keeps parent vertices first and appends one midpoint
//     per parent edge (vertex id = V_parent + edge id), then emits the four
//     children of each parent in a fixed order, so numbering is reproducible;
//   * edges are numbered in lexicographic order of their (lo, hi) pairs.
// ============================================================================
#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

namespace chfem {

struct TriMesh {
    std::vector<Eigen::Vector2d> xy;        // vertex coordinates
    std::vector<std::array<int, 3>> tri;    // CCW vertex triples

    // built by finalize():
    std::vector<std::array<int, 2>> edge_v;    // (lo, hi), lo < hi
    std::vector<std::array<int, 2>> edge_tri;  // adjacent tris, [1] = -1 on boundary
    std::vector<std::array<int, 3>> tri_edge;  // global edge of local edge k

    int num_vertices() const { return static_cast<int>(xy.size()); }
    int num_tris() const { return static_cast<int>(tri.size()); }
    int num_edges() const { return static_cast<int>(edge_v.size()); }
    int num_boundary_edges() const;

    bool is_boundary_edge(int e) const { return edge_tri[static_cast<size_t>(e)][1] < 0; }

    // --- per-triangle geometry ---
    double area(int t) const;
    Eigen::Vector2d centroid(int t) const;
    // gradients of the three barycentric coordinates (constant on the element)
    std::array<Eigen::Vector2d, 3> grad_lambda(int t) const;
    // physical point of barycentric coordinates within triangle t
    Eigen::Vector2d point(int t, double l0, double l1, double l2) const;

    // --- per-edge geometry (shared lo->hi frame) ---
    double edge_length(int e) const;
    Eigen::Vector2d edge_tangent(int e) const;  // unit, lo -> hi
    Eigen::Vector2d edge_normal(int e) const;   // unit, tangent rotated -90 deg
    Eigen::Vector2d edge_point(int e, double s) const;  // lo + s*(hi-lo), s in [0,1]
    // +1 if the shared frame normal is outward for triangle t on edge e
    double outward_sign(int t, int e) const;
    // local index (in tri[t]) of a global vertex; -1 if absent
    int local_vertex(int t, int v) const;

    // longest edge in the mesh (the reported mesh size)
    double h_max() const;
    // shortest edge in the mesh; on the structured triangulations used here
    // this is the grid spacing, which is what the step-size rules square
    double h_min() const;

    void finalize();  // build edge tables; validates orientation

    TriMesh refined() const;  // one uniform (red) refinement, then finalize()

    // unit square (0,1)^2 split along the diagonal (0,0)-(1,1)
    static TriMesh unit_square();
    // L-shaped domain (-1,1)^2 minus the closed quadrant [0,1] x [-1,0]
    static TriMesh lshape();
    // structured n-by-n grid of squares on (0,1)^2, each split along the
    // direction parallel to (1,1)
    static TriMesh structured_square(int n);

    // plain-text dump: one "x y" line per vertex, then one "v0 v1 v2" line
    // per triangle (0-based)
    void dump(const std::string& path) const;
};

// The two verification domains at refinement level L (level 1 = coarsest):
// unit square / L-shape refined (L-1) times.
TriMesh square_level(int level);
TriMesh lshape_level(int level);

}  // namespace chfem
