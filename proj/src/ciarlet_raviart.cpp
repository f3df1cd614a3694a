#include "chfem/ciarlet_raviart.hpp"

#include "chfem/eigs.hpp"
#include "chfem/quadrature.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>
#include <stdexcept>

namespace chfem {

namespace {

using SpMat = Eigen::SparseMatrix<double>;

// vertex stiffness, consistent mass and volume vector of continuous P1
void p1_operators(const TriMesh& mesh, SpMat& K, SpMat& M, Eigen::VectorXd& jvec) {
    const int V = mesh.num_vertices();
    std::vector<Eigen::Triplet<double>> kt, mt;
    jvec = Eigen::VectorXd::Zero(V);
    for (int t = 0; t < mesh.num_tris(); ++t) {
        const double A = mesh.area(t);
        const auto g = mesh.grad_lambda(t);
        const auto& vid = mesh.tri[static_cast<size_t>(t)];
        for (int a = 0; a < 3; ++a) {
            jvec[vid[static_cast<size_t>(a)]] += A / 3.0;
            for (int b = 0; b < 3; ++b) {
                kt.emplace_back(vid[static_cast<size_t>(a)], vid[static_cast<size_t>(b)],
                                A * g[static_cast<size_t>(a)].dot(g[static_cast<size_t>(b)]));
                mt.emplace_back(vid[static_cast<size_t>(a)], vid[static_cast<size_t>(b)],
                                A / 12.0 * (a == b ? 2.0 : 1.0));
            }
        }
    }
    K.resize(V, V);
    M.resize(V, V);
    K.setFromTriplets(kt.begin(), kt.end());
    M.setFromTriplets(mt.begin(), mt.end());
    K.makeCompressed();
    M.makeCompressed();
}

}  // namespace

CiarletRaviartErrors ciarlet_raviart_solve(const TriMesh& mesh,
                                           const std::shared_ptr<const ExactSolution>& exact) {
    const int V = mesh.num_vertices();
    SpMat K, M;
    Eigen::VectorXd jvec;
    p1_operators(mesh, K, M, jvec);

    // loads
    Eigen::VectorXd b1 = Eigen::VectorXd::Zero(V);  // <g1, r> on the boundary
    Eigen::VectorXd b2 = Eigen::VectorXd::Zero(V);  // <g2, v> boundary - (g, v) volume
    const auto& vrule = triangle_rule(8);
    for (int t = 0; t < mesh.num_tris(); ++t) {
        const double A = mesh.area(t);
        const auto& vid = mesh.tri[static_cast<size_t>(t)];
        for (const auto& q : vrule) {
            const double l0 = 1.0 - q.x - q.y;
            const double gv = exact->bilap_u(mesh.point(t, l0, q.x, q.y), 0.0);
            if (gv == 0.0) continue;
            const double lam[3] = {l0, q.x, q.y};
            for (int a = 0; a < 3; ++a)
                b2[vid[static_cast<size_t>(a)]] -= 2.0 * A * q.w * gv * lam[a];
        }
    }
    const auto& erule = segment_rule(8);
    for (int e = 0; e < mesh.num_edges(); ++e) {
        if (!mesh.is_boundary_edge(e)) continue;
        const int t = mesh.edge_tri[static_cast<size_t>(e)][0];
        const double h = mesh.edge_length(e);
        const Eigen::Vector2d nout = mesh.outward_sign(t, e) * mesh.edge_normal(e);
        const int lo = mesh.edge_v[static_cast<size_t>(e)][0];
        const int hi = mesh.edge_v[static_cast<size_t>(e)][1];
        for (const auto& q : erule) {
            const Eigen::Vector2d x = mesh.edge_point(e, q.t);
            const double g1 = exact->grad_u(x, 0.0).dot(nout);
            const double g2 = exact->grad_lap_u(x, 0.0).dot(nout);
            b1[lo] += q.w * h * g1 * (1.0 - q.t);
            b1[hi] += q.w * h * g1 * q.t;
            b2[lo] += q.w * h * g2 * (1.0 - q.t);
            b2[hi] += q.w * h * g2 * q.t;
        }
    }
    double u_int = 0.0;
    const auto& rule12 = triangle_rule(12);
    for (int t = 0; t < mesh.num_tris(); ++t) {
        const double scale = 2.0 * mesh.area(t);
        for (const auto& q : rule12)
            u_int += scale * q.w * exact->u(mesh.point(t, 1.0 - q.x - q.y, q.x, q.y), 0.0);
    }

    // assemble [[M, K, 0], [K, 0, j], [0, j', 0]]
    const int n = 2 * V + 1;
    std::vector<Eigen::Triplet<double>> trip;
    for (int k = 0; k < M.outerSize(); ++k)
        for (SpMat::InnerIterator it(M, k); it; ++it)
            trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    for (int k = 0; k < K.outerSize(); ++k)
        for (SpMat::InnerIterator it(K, k); it; ++it) {
            trip.emplace_back(static_cast<int>(it.row()), V + static_cast<int>(it.col()),
                              it.value());
            trip.emplace_back(V + static_cast<int>(it.row()), static_cast<int>(it.col()),
                              it.value());
        }
    for (int i = 0; i < V; ++i) {
        if (jvec[i] == 0.0) continue;
        trip.emplace_back(V + i, 2 * V, jvec[i]);
        trip.emplace_back(2 * V, V + i, jvec[i]);
    }
    SpMat S(n, n);
    S.setFromTriplets(trip.begin(), trip.end());
    S.makeCompressed();

    Eigen::VectorXd rhs(n);
    rhs.segment(0, V) = b1;
    rhs.segment(V, V) = b2;
    rhs[2 * V] = u_int;

    Eigen::SparseLU<SpMat> lu;
    lu.compute(S);
    if (lu.info() != Eigen::Success)
        throw std::runtime_error("ciarlet_raviart_solve: factorisation failed");
    const Eigen::VectorXd sol = lu.solve(rhs);
    const Eigen::VectorXd sh = sol.segment(0, V);
    const Eigen::VectorXd uh = sol.segment(V, V);

    CiarletRaviartErrors err;
    err.n_dofs = V;
    double e_sig = 0.0, e_u = 0.0;
    for (int t = 0; t < mesh.num_tris(); ++t) {
        const double scale = 2.0 * mesh.area(t);
        const auto& vid = mesh.tri[static_cast<size_t>(t)];
        for (const auto& q : rule12) {
            const double l0 = 1.0 - q.x - q.y;
            const double lam[3] = {l0, q.x, q.y};
            const Eigen::Vector2d x = mesh.point(t, l0, q.x, q.y);
            double sv = 0.0, uv = 0.0;
            for (int a = 0; a < 3; ++a) {
                sv += sh[vid[static_cast<size_t>(a)]] * lam[a];
                uv += uh[vid[static_cast<size_t>(a)]] * lam[a];
            }
            e_sig += scale * q.w * std::pow(sv - exact->lap_u(x, 0.0), 2);
            e_u += scale * q.w * std::pow(uv - exact->u(x, 0.0), 2);
        }
    }
    err.sigma = std::sqrt(e_sig);
    err.state = std::sqrt(e_u);
    return err;
}

std::vector<double> ciarlet_raviart_eigs(const TriMesh& mesh, int count) {
    SpMat K, M;
    Eigen::VectorXd jvec;
    p1_operators(mesh, K, M, jvec);

    const Eigen::MatrixXd Kd(K), Md(M);
    const Eigen::LLT<Eigen::MatrixXd> llt(Md);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("ciarlet_raviart_eigs: mass factorisation failed");
    const Eigen::MatrixXd S = Kd * llt.solve(Kd);

    const std::vector<double> all = dense_generalized_eigs(S, Md);
    std::vector<double> out;
    for (const double lam : all) {
        if (lam < 1e-6) continue;  // the constant mode
        out.push_back(lam);
        if (static_cast<int>(out.size()) == count) break;
    }
    return out;
}

}  // namespace chfem
