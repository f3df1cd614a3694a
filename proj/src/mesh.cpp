#include "chfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>

namespace chfem {

namespace {
double signed_area2(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                    const Eigen::Vector2d& c) {
    return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}
}  // namespace

int TriMesh::num_boundary_edges() const {
    int n = 0;
    for (int e = 0; e < num_edges(); ++e)
        if (is_boundary_edge(e)) ++n;
    return n;
}

double TriMesh::area(int t) const {
    const auto& v = tri[static_cast<size_t>(t)];
    return 0.5 * signed_area2(xy[static_cast<size_t>(v[0])], xy[static_cast<size_t>(v[1])],
                              xy[static_cast<size_t>(v[2])]);
}

Eigen::Vector2d TriMesh::centroid(int t) const {
    const auto& v = tri[static_cast<size_t>(t)];
    return (xy[static_cast<size_t>(v[0])] + xy[static_cast<size_t>(v[1])] +
            xy[static_cast<size_t>(v[2])]) / 3.0;
}

std::array<Eigen::Vector2d, 3> TriMesh::grad_lambda(int t) const {
    const auto& v = tri[static_cast<size_t>(t)];
    const double inv2A = 1.0 / (2.0 * area(t));
    std::array<Eigen::Vector2d, 3> g;
    for (int i = 0; i < 3; ++i) {
        // edge opposite vertex i, as seen CCW: from v[i+1] to v[i+2]
        const Eigen::Vector2d d = xy[static_cast<size_t>(v[(i + 2) % 3])] -
                                  xy[static_cast<size_t>(v[(i + 1) % 3])];
        g[static_cast<size_t>(i)] = inv2A * Eigen::Vector2d(-d.y(), d.x());
    }
    return g;
}

Eigen::Vector2d TriMesh::point(int t, double l0, double l1, double l2) const {
    const auto& v = tri[static_cast<size_t>(t)];
    return l0 * xy[static_cast<size_t>(v[0])] + l1 * xy[static_cast<size_t>(v[1])] +
           l2 * xy[static_cast<size_t>(v[2])];
}

double TriMesh::edge_length(int e) const {
    const auto& v = edge_v[static_cast<size_t>(e)];
    return (xy[static_cast<size_t>(v[1])] - xy[static_cast<size_t>(v[0])]).norm();
}

Eigen::Vector2d TriMesh::edge_tangent(int e) const {
    const auto& v = edge_v[static_cast<size_t>(e)];
    return (xy[static_cast<size_t>(v[1])] - xy[static_cast<size_t>(v[0])]).normalized();
}

Eigen::Vector2d TriMesh::edge_normal(int e) const {
    const Eigen::Vector2d t = edge_tangent(e);
    return {t.y(), -t.x()};
}

Eigen::Vector2d TriMesh::edge_point(int e, double s) const {
    const auto& v = edge_v[static_cast<size_t>(e)];
    return (1.0 - s) * xy[static_cast<size_t>(v[0])] + s * xy[static_cast<size_t>(v[1])];
}

double TriMesh::outward_sign(int t, int e) const {
    const Eigen::Vector2d m = edge_point(e, 0.5);
    return (edge_normal(e).dot(m - centroid(t)) > 0.0) ? 1.0 : -1.0;
}

int TriMesh::local_vertex(int t, int v) const {
    const auto& tv = tri[static_cast<size_t>(t)];
    for (int i = 0; i < 3; ++i)
        if (tv[static_cast<size_t>(i)] == v) return i;
    return -1;
}

double TriMesh::h_max() const {
    double h = 0.0;
    for (int e = 0; e < num_edges(); ++e) h = std::max(h, edge_length(e));
    return h;
}

double TriMesh::h_min() const {
    double h = std::numeric_limits<double>::infinity();
    for (int e = 0; e < num_edges(); ++e) h = std::min(h, edge_length(e));
    return h;
}

void TriMesh::finalize() {
    for (int t = 0; t < num_tris(); ++t)
        if (area(t) <= 0.0) throw std::runtime_error("mesh: triangle not CCW");

    // Collect unique (lo,hi) pairs, number them lexicographically.
    std::map<std::array<int, 2>, int> id;
    for (const auto& tv : tri)
        for (int k = 0; k < 3; ++k) {
            int a = tv[static_cast<size_t>((k + 1) % 3)];
            int b = tv[static_cast<size_t>((k + 2) % 3)];
            id[{std::min(a, b), std::max(a, b)}] = 0;
        }
    edge_v.clear();
    edge_v.reserve(id.size());
    int next = 0;
    for (auto& [key, val] : id) {
        val = next++;
        edge_v.push_back(key);
    }

    edge_tri.assign(edge_v.size(), {-1, -1});
    tri_edge.assign(tri.size(), {-1, -1, -1});
    for (int t = 0; t < num_tris(); ++t) {
        const auto& tv = tri[static_cast<size_t>(t)];
        for (int k = 0; k < 3; ++k) {
            int a = tv[static_cast<size_t>((k + 1) % 3)];
            int b = tv[static_cast<size_t>((k + 2) % 3)];
            const int e = id.at({std::min(a, b), std::max(a, b)});
            tri_edge[static_cast<size_t>(t)][static_cast<size_t>(k)] = e;
            auto& et = edge_tri[static_cast<size_t>(e)];
            if (et[0] < 0)
                et[0] = t;
            else if (et[1] < 0)
                et[1] = t;
            else
                throw std::runtime_error("mesh: edge shared by more than two triangles");
        }
    }
}

TriMesh TriMesh::refined() const {
    TriMesh r;
    r.xy = xy;
    r.xy.reserve(xy.size() + edge_v.size());
    for (int e = 0; e < num_edges(); ++e) r.xy.push_back(edge_point(e, 0.5));

    r.tri.reserve(tri.size() * 4);
    const int V = num_vertices();
    for (int t = 0; t < num_tris(); ++t) {
        const auto& tv = tri[static_cast<size_t>(t)];
        const auto& te = tri_edge[static_cast<size_t>(t)];
        const int m0 = V + te[0];  // midpoint of edge opposite v0
        const int m1 = V + te[1];
        const int m2 = V + te[2];
        r.tri.push_back({tv[0], m2, m1});
        r.tri.push_back({m2, tv[1], m0});
        r.tri.push_back({m1, m0, tv[2]});
        r.tri.push_back({m0, m1, m2});
    }
    r.finalize();
    return r;
}

TriMesh TriMesh::unit_square() {
    TriMesh m;
    m.xy = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    m.tri = {{0, 1, 2}, {0, 2, 3}};
    m.finalize();
    return m;
}

TriMesh TriMesh::lshape() {
    TriMesh m;
    m.xy = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}};
    // three unit squares, each split along a diagonal through-or-parallel to
    // the re-entrant corner
    m.tri = {
        {0, 1, 2}, {0, 2, 3},   // [0,1]x[0,1], diagonal (0,0)-(1,1)
        {5, 0, 3}, {5, 3, 4},   // [-1,0]x[0,1], diagonal (-1,0)-(0,1)
        {6, 7, 0}, {6, 0, 5},   // [-1,0]x[-1,0], diagonal (-1,-1)-(0,0)
    };
    m.finalize();
    return m;
}

TriMesh TriMesh::structured_square(int n) {
    TriMesh m;
    const double h = 1.0 / n;
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i) m.xy.push_back({i * h, j * h});
    auto vid = [n](int i, int j) { return j * (n + 1) + i; };
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
            m.tri.push_back({a, b, c});
            m.tri.push_back({a, c, d});
        }
    m.finalize();
    return m;
}

void TriMesh::dump(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("mesh dump: cannot open " + path);
    for (const auto& p : xy) out << p.x() << " " << p.y() << "\n";
    for (const auto& t : tri) out << t[0] << " " << t[1] << " " << t[2] << "\n";
}

TriMesh square_level(int level) {
    TriMesh m = TriMesh::unit_square();
    for (int i = 1; i < level; ++i) m = m.refined();
    return m;
}

TriMesh lshape_level(int level) {
    TriMesh m = TriMesh::lshape();
    for (int i = 1; i < level; ++i) m = m.refined();
    return m;
}

}  // namespace chfem
