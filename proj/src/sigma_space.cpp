#include "chfem/sigma_space.hpp"

#include <map>
#include <mutex>
#include <tuple>

namespace chfem {

Eigen::Matrix2d tensor_e11() {
    Eigen::Matrix2d m;
    m << 1, 0, 0, 0;
    return m;
}
Eigen::Matrix2d tensor_e12() {
    Eigen::Matrix2d m;
    m << 0, 1, 1, 0;
    return m;
}
Eigen::Matrix2d tensor_e22() {
    Eigen::Matrix2d m;
    m << 0, 0, 0, 1;
    return m;
}

SigmaSpace::SigmaSpace(const TriMesh& mesh) : mesh_(&mesh) {
    const int V = mesh.num_vertices();
    const int E = mesh.num_edges();
    const int T = mesh.num_tris();
    ndof_ = 3 * V + 4 * E + 9 * T;
    elem_.resize(static_cast<size_t>(T));

    const P3Basis& p3 = p3_basis();
    const std::array<Eigen::Matrix2d, 3> cart{tensor_e11(), tensor_e12(), tensor_e22()};

    for (int t = 0; t < T; ++t) {
        auto& ld = elem_[static_cast<size_t>(t)];
        int l = 0;
        // vertex nodes: shared Cartesian components
        for (int a = 0; a < 3; ++a) {
            const int v = mesh.tri[static_cast<size_t>(t)][static_cast<size_t>(a)];
            for (int c = 0; c < 3; ++c)
                ld[static_cast<size_t>(l++)] = {3 * v + c, a, cart[static_cast<size_t>(c)]};
        }
        // edge nodes: shared normal-trace components in the edge frame
        const int ebase_elem = 3 * V + 4 * E + 9 * t;
        int tt_slot = 0;
        for (int k = 0; k < 3; ++k) {
            const int e = mesh.tri_edge[static_cast<size_t>(t)][static_cast<size_t>(k)];
            const Eigen::Vector2d tn = mesh.edge_tangent(e);
            const Eigen::Vector2d nn = mesh.edge_normal(e);
            const Eigen::Matrix2d Tnn = nn * nn.transpose();
            const Eigen::Matrix2d Ttn = tn * nn.transpose() + nn * tn.transpose();
            const Eigen::Matrix2d Ttt = tn * tn.transpose();
            // local indices of the edge endpoints: edge k joins vertices
            // (k+1)%3 and (k+2)%3
            const int lo = mesh.edge_v[static_cast<size_t>(e)][0];
            const int a_lo = mesh.local_vertex(t, lo);
            const int a_hi = (a_lo == (k + 1) % 3) ? (k + 2) % 3 : (k + 1) % 3;
            // node A sits at 1/3 from lo (barycentric weight 2/3 on lo),
            // node B at 2/3 from lo (weight 2/3 on hi)
            const int nA = p3.edge_node(k, a_lo);
            const int nB = p3.edge_node(k, a_hi);
            ld[static_cast<size_t>(l++)] = {3 * V + 4 * e + 0, nA, Tnn};
            ld[static_cast<size_t>(l++)] = {3 * V + 4 * e + 1, nA, Ttn};
            ld[static_cast<size_t>(l++)] = {3 * V + 4 * e + 2, nB, Tnn};
            ld[static_cast<size_t>(l++)] = {3 * V + 4 * e + 3, nB, Ttn};
            // element-private tangential-tangential components
            ld[static_cast<size_t>(l++)] = {ebase_elem + tt_slot++, nA, Ttt};
            ld[static_cast<size_t>(l++)] = {ebase_elem + tt_slot++, nB, Ttt};
        }
        // centroid node: element-private Cartesian components
        for (int c = 0; c < 3; ++c)
            ld[static_cast<size_t>(l++)] = {ebase_elem + 6 + c, 9, cart[static_cast<size_t>(c)]};
    }
}

Eigen::Matrix2d SigmaSpace::eval(const Eigen::VectorXd& coef, int t, double l0, double l1,
                                 double l2) const {
    const P3Basis& p3 = p3_basis();
    std::array<double, 10> L;
    for (int n = 0; n < 10; ++n) L[static_cast<size_t>(n)] = p3.fun[static_cast<size_t>(n)].eval(l0, l1, l2);
    Eigen::Matrix2d s = Eigen::Matrix2d::Zero();
    for (const auto& d : dofs(t)) s += coef[d.gdof] * L[static_cast<size_t>(d.node)] * d.T;
    return s;
}

Eigen::Vector2d SigmaSpace::eval_div(const Eigen::VectorXd& coef, int t, double l0, double l1,
                                     double l2) const {
    const P3Basis& p3 = p3_basis();
    const auto g = mesh_->grad_lambda(t);
    std::array<Eigen::Vector2d, 10> gradL;
    for (int n = 0; n < 10; ++n) {
        Eigen::Vector2d gr = Eigen::Vector2d::Zero();
        for (int i = 0; i < 3; ++i)
            gr += p3.fun[static_cast<size_t>(n)].dlam(i).eval(l0, l1, l2) * g[static_cast<size_t>(i)];
        gradL[static_cast<size_t>(n)] = gr;
    }
    Eigen::Vector2d dv = Eigen::Vector2d::Zero();
    for (const auto& d : dofs(t)) dv += coef[d.gdof] * (d.T * gradL[static_cast<size_t>(d.node)]);
    return dv;
}

const ScalarTab& SigmaSpace::p3_at(const std::vector<QPoint>& rule) {
    static std::mutex mtx;
    static std::map<const void*, ScalarTab> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(rule.data());
    if (it != cache.end()) return it->second;
    std::vector<BaryPoint> pts;
    pts.reserve(rule.size());
    for (const auto& q : rule) pts.push_back({1.0 - q.x - q.y, q.x, q.y});
    std::vector<BaryPoly> basis(p3_basis().fun.begin(), p3_basis().fun.end());
    return cache.emplace(rule.data(), tabulate(basis, pts)).first->second;
}

const ScalarTab& SigmaSpace::p3_edge_at(int k, int a_lo, const std::vector<QPoint1D>& rule) {
    static std::mutex mtx;
    static std::map<std::tuple<int, int, const void*>, ScalarTab> cache;
    std::lock_guard<std::mutex> lock(mtx);
    const auto key = std::make_tuple(k, a_lo, static_cast<const void*>(rule.data()));
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    const int a_hi = (a_lo == (k + 1) % 3) ? (k + 2) % 3 : (k + 1) % 3;
    std::vector<BaryPoint> pts;
    pts.reserve(rule.size());
    for (const auto& q : rule) {
        std::array<double, 3> lam{0.0, 0.0, 0.0};
        lam[static_cast<size_t>(a_lo)] = 1.0 - q.t;
        lam[static_cast<size_t>(a_hi)] = q.t;
        pts.push_back({lam[0], lam[1], lam[2]});
    }
    std::vector<BaryPoly> basis(p3_basis().fun.begin(), p3_basis().fun.end());
    return cache.emplace(key, tabulate(basis, pts)).first->second;
}

}  // namespace chfem
