#include "doctest.h"

#include "chfem/mesh.hpp"

#include <cmath>

using chfem::TriMesh;

namespace {

double total_area(const TriMesh& m) {
    double a = 0.0;
    for (int t = 0; t < m.num_tris(); ++t) a += m.area(t);
    return a;
}

}  // namespace

TEST_CASE("base meshes: entity counts and areas") {
    const TriMesh sq = TriMesh::unit_square();
    CHECK(sq.num_vertices() == 4);
    CHECK(sq.num_edges() == 5);
    CHECK(sq.num_tris() == 2);
    CHECK(sq.num_boundary_edges() == 4);
    CHECK(total_area(sq) == doctest::Approx(1.0).epsilon(1e-14));

    const TriMesh ls = TriMesh::lshape();
    CHECK(ls.num_vertices() == 8);
    CHECK(ls.num_edges() == 13);
    CHECK(ls.num_tris() == 6);
    CHECK(ls.num_boundary_edges() == 8);
    CHECK(total_area(ls) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("refinement: V+E vertices, 2E+3T edges, 4T triangles, midpoint ids") {
    for (const TriMesh& base : {TriMesh::unit_square(), TriMesh::lshape()}) {
        TriMesh m = base;
        for (int r = 0; r < 3; ++r) {
            const TriMesh f = m.refined();
            CHECK(f.num_vertices() == m.num_vertices() + m.num_edges());
            CHECK(f.num_edges() == 2 * m.num_edges() + 3 * m.num_tris());
            CHECK(f.num_tris() == 4 * m.num_tris());
            CHECK(total_area(f) == doctest::Approx(total_area(m)).epsilon(1e-13));
            // midpoint of parent edge e gets vertex id V_parent + e
            for (int e = 0; e < m.num_edges(); ++e) {
                const Eigen::Vector2d mid =
                    0.5 * (m.xy[m.edge_v[e][0]] + m.xy[m.edge_v[e][1]]);
                CHECK((f.xy[m.num_vertices() + e] - mid).norm() <= 1e-15);
            }
            m = f;
        }
    }
}

TEST_CASE("level helper: counts and mesh size on both domains") {
    const int sqV[] = {4, 9, 25, 81, 289};
    const int sqE[] = {5, 16, 56, 208, 800};
    const int sqT[] = {2, 8, 32, 128, 512};
    const int lsV[] = {8, 21, 65, 225, 833};
    const int lsE[] = {13, 44, 160, 608, 2368};
    const int lsT[] = {6, 24, 96, 384, 1536};
    for (int level = 1; level <= 5; ++level) {
        const TriMesh sq = chfem::square_level(level);
        CHECK(sq.num_vertices() == sqV[level - 1]);
        CHECK(sq.num_edges() == sqE[level - 1]);
        CHECK(sq.num_tris() == sqT[level - 1]);
        const double want_h = std::sqrt(2.0) * std::pow(2.0, 1 - level);
        CHECK(sq.h_max() == doctest::Approx(want_h).epsilon(1e-13));

        const TriMesh ls = chfem::lshape_level(level);
        CHECK(ls.num_vertices() == lsV[level - 1]);
        CHECK(ls.num_edges() == lsE[level - 1]);
        CHECK(ls.num_tris() == lsT[level - 1]);
        CHECK(ls.h_max() == doctest::Approx(want_h).epsilon(1e-13));
        CHECK(ls.num_boundary_edges() == 8 * (1 << (level - 1)));
    }
}

TEST_CASE("triangles are CCW and barycentric helpers are consistent") {
    const TriMesh m = chfem::lshape_level(2);
    for (int t = 0; t < m.num_tris(); ++t) {
        CHECK(m.area(t) > 0.0);
        const auto g = m.grad_lambda(t);
        CHECK((g[0] + g[1] + g[2]).norm() <= 1e-13);
        // point() at barycentric unit vectors returns the vertices
        for (int a = 0; a < 3; ++a) {
            const Eigen::Vector2d p =
                m.point(t, a == 0 ? 1.0 : 0.0, a == 1 ? 1.0 : 0.0, a == 2 ? 1.0 : 0.0);
            CHECK((p - m.xy[m.tri[t][a]]).norm() <= 1e-14);
        }
        // grad_lambda[a] . (v_b - v_a) = -1 for b != a, and lambda_a is 1 at v_a
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                const double d = g[a].dot(m.xy[m.tri[t][b]] - m.xy[m.tri[t][a]]);
                CHECK(std::abs(d - (a == b ? 0.0 : -1.0)) <= 1e-12);
            }
    }
}

TEST_CASE("shared edge frame: lo<hi, tangent and normal conventions, outward signs") {
    const TriMesh m = chfem::square_level(2);
    for (int e = 0; e < m.num_edges(); ++e) {
        CHECK(m.edge_v[e][0] < m.edge_v[e][1]);
        const Eigen::Vector2d te = m.edge_tangent(e);
        const Eigen::Vector2d ne = m.edge_normal(e);
        CHECK(te.norm() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::abs(te.dot(ne)) <= 1e-14);
        CHECK(ne[0] == doctest::Approx(te[1]).epsilon(1e-14));
        CHECK(ne[1] == doctest::Approx(-te[0]).epsilon(1e-14));
        const Eigen::Vector2d lo = m.xy[m.edge_v[e][0]];
        const Eigen::Vector2d hi = m.xy[m.edge_v[e][1]];
        CHECK((hi - lo).normalized().dot(te) == doctest::Approx(1.0).epsilon(1e-13));
        CHECK((m.edge_point(e, 0.25) - (lo + 0.25 * (hi - lo))).norm() <= 1e-14);

        const int t0 = m.edge_tri[e][0];
        const int t1 = m.edge_tri[e][1];
        CHECK(t0 >= 0);
        // the signed frame normal points away from each adjacent element
        const Eigen::Vector2d mid = m.edge_point(e, 0.5);
        CHECK((mid - m.centroid(t0)).dot(m.outward_sign(t0, e) * ne) > 0.0);
        if (t1 >= 0) {
            CHECK((mid - m.centroid(t1)).dot(m.outward_sign(t1, e) * ne) > 0.0);
            CHECK(m.outward_sign(t0, e) * m.outward_sign(t1, e) == doctest::Approx(-1.0));
        } else {
            CHECK(m.is_boundary_edge(e));
        }
    }
}

TEST_CASE("tri_edge is the edge opposite the local vertex") {
    const TriMesh m = chfem::lshape_level(2);
    for (int t = 0; t < m.num_tris(); ++t)
        for (int k = 0; k < 3; ++k) {
            const int e = m.tri_edge[t][k];
            const int a = m.tri[t][(k + 1) % 3];
            const int b = m.tri[t][(k + 2) % 3];
            CHECK(std::min(a, b) == m.edge_v[e][0]);
            CHECK(std::max(a, b) == m.edge_v[e][1]);
        }
}

TEST_CASE("structured square grid") {
    const TriMesh m = TriMesh::structured_square(20);
    CHECK(m.num_vertices() == 21 * 21);
    CHECK(m.num_tris() == 2 * 20 * 20);
    CHECK(total_area(m) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(m.h_max() == doctest::Approx(std::sqrt(2.0) / 20.0).epsilon(1e-13));
}
