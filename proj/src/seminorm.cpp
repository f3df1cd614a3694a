#include "chfem/seminorm.hpp"

#include "chfem/quadrature.hpp"

#include <cmath>
#include <vector>

namespace chfem {

Eigen::SparseMatrix<double> seminorm_gram(const VSpace& vs, int edge_quad_degree) {
    const TriMesh& mesh = vs.mesh();
    const auto& rule = segment_rule(edge_quad_degree);
    std::vector<Eigen::Triplet<double>> trip;

    // Elementwise linear fields have no volume H2 part; only the edge terms
    // contribute.
    for (int e = 0; e < mesh.num_edges(); ++e) {
        const double h = mesh.edge_length(e);
        const Eigen::Vector2d ne = mesh.edge_normal(e);
        const bool bdry = mesh.is_boundary_edge(e);

        struct Side {
            int t;
            int a_lo, a_hi;  // local indices of the edge endpoints
            std::array<Eigen::Vector2d, 3> g;
        };
        std::vector<Side> sides;
        for (int sd = 0; sd < 2; ++sd) {
            const int t = mesh.edge_tri[static_cast<size_t>(e)][static_cast<size_t>(sd)];
            if (t < 0) continue;
            Side s;
            s.t = t;
            s.a_lo = mesh.local_vertex(t, mesh.edge_v[static_cast<size_t>(e)][0]);
            s.a_hi = mesh.local_vertex(t, mesh.edge_v[static_cast<size_t>(e)][1]);
            s.g = mesh.grad_lambda(t);
            sides.push_back(s);
        }

        // normal-derivative jump (trace on the boundary): constant along the
        // edge for linear fields, so
        //   h^{-1} || [dv/dn] ||^2_{L2(e)} = h^{-1} * h * jump^2 = jump^2
        {
            std::vector<std::pair<int, double>> func;
            for (size_t sd = 0; sd < sides.size(); ++sd) {
                const double sign = (sd == 0) ? 1.0 : -1.0;
                const auto& S = sides[sd];
                for (int a = 0; a < 3; ++a)
                    func.emplace_back(3 * S.t + a, sign * S.g[static_cast<size_t>(a)].dot(ne));
            }
            for (const auto& [i, ci] : func)
                for (const auto& [j, cj] : func)
                    if (ci * cj != 0.0) trip.emplace_back(i, j, ci * cj);
        }

        // value jump across interior edges: h^{-3} integral over e of [v]^2
        if (!bdry) {
            for (const auto& q : rule) {
                const double weight = std::pow(h, -3) * h * q.w;
                std::vector<std::pair<int, double>> func;
                for (size_t sd = 0; sd < sides.size(); ++sd) {
                    const double sign = (sd == 0) ? 1.0 : -1.0;
                    const auto& S = sides[sd];
                    func.emplace_back(3 * S.t + S.a_lo, sign * (1.0 - q.t));
                    func.emplace_back(3 * S.t + S.a_hi, sign * q.t);
                }
                for (const auto& [i, ci] : func)
                    for (const auto& [j, cj] : func)
                        if (ci * cj != 0.0) trip.emplace_back(i, j, weight * ci * cj);
            }
        }
    }

    Eigen::SparseMatrix<double> G(vs.ndof(), vs.ndof());
    G.setFromTriplets(trip.begin(), trip.end());
    G.makeCompressed();
    return G;
}

double seminorm(const VSpace& vs, const Eigen::VectorXd& w, int edge_quad_degree) {
    const Eigen::SparseMatrix<double> G = seminorm_gram(vs, edge_quad_degree);
    return std::sqrt(std::max(0.0, w.dot(G * w)));
}

}  // namespace chfem
