#include "chfem/assembly.hpp"

#include "chfem/quadrature.hpp"

#include <vector>

namespace chfem {

SpMat mass_sigma(const SigmaSpace& space, int quad_degree) {
    const TriMesh& mesh = space.mesh();
    const auto& rule = triangle_rule(quad_degree);
    const auto& tab = SigmaSpace::p3_at(rule);

    // reference scalar mass matrix of the ten Lagrange functions
    Eigen::Matrix<double, 10, 10> Mref = Eigen::Matrix<double, 10, 10>::Zero();
    for (int q = 0; q < tab.npts; ++q)
        for (int a = 0; a < 10; ++a)
            for (int b = 0; b < 10; ++b)
                Mref(a, b) += rule[static_cast<size_t>(q)].w * tab.value(a, q) * tab.value(b, q);

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(mesh.num_tris()) * SigmaSpace::ldof * SigmaSpace::ldof);
    for (int t = 0; t < mesh.num_tris(); ++t) {
        const double scale = 2.0 * mesh.area(t);
        const auto& dofs = space.dofs(t);
        for (int i = 0; i < SigmaSpace::ldof; ++i)
            for (int j = 0; j < SigmaSpace::ldof; ++j) {
                const double tij = dofs[static_cast<size_t>(i)].T.cwiseProduct(
                    dofs[static_cast<size_t>(j)].T).sum();
                const double v = scale * tij *
                                 Mref(dofs[static_cast<size_t>(i)].node,
                                      dofs[static_cast<size_t>(j)].node);
                if (v != 0.0)
                    trip.emplace_back(dofs[static_cast<size_t>(i)].gdof,
                                      dofs[static_cast<size_t>(j)].gdof, v);
            }
    }
    SpMat M(space.ndof(), space.ndof());
    M.setFromTriplets(trip.begin(), trip.end());
    M.makeCompressed();
    return M;
}

SpMat mass_v(const VSpace& vs) {
    const TriMesh& mesh = vs.mesh();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(mesh.num_tris()) * 9);
    for (int t = 0; t < mesh.num_tris(); ++t) {
        const double A = mesh.area(t);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                trip.emplace_back(3 * t + a, 3 * t + b, A * (a == b ? 2.0 : 1.0) / 12.0);
    }
    SpMat M(vs.ndof(), vs.ndof());
    M.setFromTriplets(trip.begin(), trip.end());
    M.makeCompressed();
    return M;
}

SpMat divdiv_coupling(const SigmaSpace& space, const VSpace& vs) {
    const TriMesh& mesh = space.mesh();
    // divDiv of a cubic tensor function is linear, the scalar test functions
    // are linear: a degree-2 rule integrates the product exactly.
    const auto& rule = triangle_rule(4);
    const auto& tab = SigmaSpace::p3_at(rule);

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(mesh.num_tris()) * SigmaSpace::ldof * 3);
    for (int t = 0; t < mesh.num_tris(); ++t) {
        const double scale = 2.0 * mesh.area(t);
        const auto g = mesh.grad_lambda(t);
        const auto& dofs = space.dofs(t);
        for (int q = 0; q < static_cast<int>(rule.size()); ++q) {
            const double l1 = rule[static_cast<size_t>(q)].x, l2 = rule[static_cast<size_t>(q)].y;
            const double lam[3] = {1.0 - l1 - l2, l1, l2};
            const double wq = scale * rule[static_cast<size_t>(q)].w;
            // Hessians of the ten scalar nodes at this point
            std::array<Eigen::Matrix2d, 10> hessL;
            for (int n = 0; n < 10; ++n) {
                const auto& d2 = tab.hess(n, q);
                Eigen::Matrix2d H = Eigen::Matrix2d::Zero();
                const int pair[6][2] = {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}};
                for (int s = 0; s < 6; ++s) {
                    const Eigen::Matrix2d gg = g[static_cast<size_t>(pair[s][0])] *
                                               g[static_cast<size_t>(pair[s][1])].transpose();
                    H += d2[static_cast<size_t>(s)] *
                         (pair[s][0] == pair[s][1] ? gg : Eigen::Matrix2d(gg + gg.transpose()));
                }
                hessL[static_cast<size_t>(n)] = H;
            }
            for (int j = 0; j < SigmaSpace::ldof; ++j) {
                const auto& d = dofs[static_cast<size_t>(j)];
                const double dd = d.T.cwiseProduct(hessL[static_cast<size_t>(d.node)]).sum();
                if (dd == 0.0) continue;
                for (int a = 0; a < 3; ++a)
                    trip.emplace_back(3 * t + a, d.gdof, wq * dd * lam[a]);
            }
        }
    }
    SpMat B(vs.ndof(), space.ndof());
    B.setFromTriplets(trip.begin(), trip.end());
    B.makeCompressed();
    return B;
}

Eigen::VectorXd mean_vector(const VSpace& vs) {
    const TriMesh& mesh = vs.mesh();
    Eigen::VectorXd j(vs.ndof());
    for (int t = 0; t < mesh.num_tris(); ++t) {
        const double A = mesh.area(t);
        for (int a = 0; a < 3; ++a) j[3 * t + a] = A / 3.0;
    }
    return j;
}

Eigen::VectorXd load_isotropic(
    const SigmaSpace& space,
    const std::function<double(int, double, double, double)>& w_at, int quad_degree) {
    const TriMesh& mesh = space.mesh();
    const auto& rule = triangle_rule(quad_degree);
    const auto& tab = SigmaSpace::p3_at(rule);
    Eigen::VectorXd F = Eigen::VectorXd::Zero(space.ndof());
    for (int t = 0; t < mesh.num_tris(); ++t) {
        const double scale = 2.0 * mesh.area(t);
        const auto& dofs = space.dofs(t);
        // per-node integral of w * L_n
        std::array<double, 10> wn{};
        for (int q = 0; q < static_cast<int>(rule.size()); ++q) {
            const double l1 = rule[static_cast<size_t>(q)].x, l2 = rule[static_cast<size_t>(q)].y;
            const double wv = w_at(t, 1.0 - l1 - l2, l1, l2);
            for (int n = 0; n < 10; ++n)
                wn[static_cast<size_t>(n)] += rule[static_cast<size_t>(q)].w * wv * tab.value(n, q);
        }
        for (const auto& d : dofs) {
            const double tr = d.T.trace();
            if (tr != 0.0) F[d.gdof] += scale * tr * wn[static_cast<size_t>(d.node)];
        }
    }
    return F;
}

Eigen::VectorXd load_normal_trace(
    const SigmaSpace& space,
    const std::function<double(const Eigen::Vector2d&, const Eigen::Vector2d&)>& q_of_x_nout,
    int quad_degree) {
    const TriMesh& mesh = space.mesh();
    const auto& rule = segment_rule(quad_degree);
    Eigen::VectorXd F = Eigen::VectorXd::Zero(space.ndof());
    for (int e = 0; e < mesh.num_edges(); ++e) {
        if (!mesh.is_boundary_edge(e)) continue;
        const int t = mesh.edge_tri[static_cast<size_t>(e)][0];
        int k = 0;
        while (mesh.tri_edge[static_cast<size_t>(t)][static_cast<size_t>(k)] != e) ++k;
        const int a_lo = mesh.local_vertex(t, mesh.edge_v[static_cast<size_t>(e)][0]);
        const auto& tab = SigmaSpace::p3_edge_at(k, a_lo, rule);
        const double h = mesh.edge_length(e);
        const Eigen::Vector2d ne = mesh.edge_normal(e);
        const double sgn = mesh.outward_sign(t, e);
        const Eigen::Vector2d nout = sgn * ne;
        for (const auto& d : space.dofs(t)) {
            // n'(L T)n with the outward normal; sign cancels in the quadratic form
            const double nTn = ne.dot(d.T * ne);
            if (nTn == 0.0) continue;
            double m = 0.0;
            for (int q = 0; q < tab.npts; ++q) {
                const Eigen::Vector2d x = mesh.edge_point(e, rule[static_cast<size_t>(q)].t);
                m += rule[static_cast<size_t>(q)].w * h * tab.value(d.node, q) *
                     q_of_x_nout(x, nout);
            }
            F[d.gdof] += nTn * m;
        }
    }
    return F;
}

Eigen::VectorXd load_scalar(const VSpace& vs,
                            const std::function<double(const Eigen::Vector2d&)>& g,
                            int quad_degree) {
    const TriMesh& mesh = vs.mesh();
    const auto& rule = triangle_rule(quad_degree);
    Eigen::VectorXd F = Eigen::VectorXd::Zero(vs.ndof());
    for (int t = 0; t < mesh.num_tris(); ++t) {
        const double scale = 2.0 * mesh.area(t);
        for (const auto& q : rule) {
            const double lam[3] = {1.0 - q.x - q.y, q.x, q.y};
            const double gv = g(mesh.point(t, lam[0], lam[1], lam[2]));
            for (int a = 0; a < 3; ++a) F[3 * t + a] += scale * q.w * gv * lam[a];
        }
    }
    return F;
}

namespace {
// Place scale*A (or scale*A' when transpose) with its top-left corner at
// (r0, c0) of the assembled system.
void append_block(std::vector<Eigen::Triplet<double>>& trip, const SpMat& A, int r0, int c0,
                  double scale, bool transpose) {
    for (int k = 0; k < A.outerSize(); ++k)
        for (SpMat::InnerIterator it(A, k); it; ++it) {
            if (transpose)
                trip.emplace_back(r0 + static_cast<int>(it.col()), c0 + static_cast<int>(it.row()),
                                  scale * it.value());
            else
                trip.emplace_back(r0 + static_cast<int>(it.row()), c0 + static_cast<int>(it.col()),
                                  scale * it.value());
        }
}
}  // namespace

SpMat step_matrix(const SpMat& Ms, const SpMat& B, const SpMat& Mu, const SpMat& C, double tau) {
    const int ns = static_cast<int>(Ms.rows());
    const int nu = static_cast<int>(B.rows());
    const int nc = static_cast<int>(C.rows());
    const int n = ns + nu + nc;
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(Ms.nonZeros() + 2 * B.nonZeros() + Mu.nonZeros() +
                                     2 * C.nonZeros()));
    append_block(trip, Ms, 0, 0, 1.0, false);
    append_block(trip, B, 0, ns, -1.0, true);       // -B'
    append_block(trip, B, ns, 0, -1.0, false);      // -B
    append_block(trip, Mu, ns, ns, -1.0 / tau, false);
    append_block(trip, C, 0, ns + nu, 1.0, true);   // C'
    append_block(trip, C, ns + nu, 0, 1.0, false);  // C
    SpMat K(n, n);
    K.setFromTriplets(trip.begin(), trip.end());
    K.makeCompressed();
    return K;
}

SpMat stationary_matrix(const SpMat& Ms, const SpMat& B, const SpMat& C,
                        const Eigen::VectorXd& jvec) {
    const int ns = static_cast<int>(Ms.rows());
    const int nu = static_cast<int>(B.rows());
    const int nc = static_cast<int>(C.rows());
    const int n = ns + nu + nc + 1;
    std::vector<Eigen::Triplet<double>> trip;
    append_block(trip, Ms, 0, 0, 1.0, false);
    append_block(trip, B, 0, ns, -1.0, true);
    append_block(trip, B, ns, 0, -1.0, false);
    append_block(trip, C, 0, ns + nu, 1.0, true);
    append_block(trip, C, ns + nu, 0, 1.0, false);
    for (int i = 0; i < nu; ++i) {
        if (jvec[i] == 0.0) continue;
        trip.emplace_back(ns + i, n - 1, -jvec[i]);
        trip.emplace_back(n - 1, ns + i, -jvec[i]);
    }
    SpMat K(n, n);
    K.setFromTriplets(trip.begin(), trip.end());
    K.makeCompressed();
    return K;
}

SpMat pencil_stiffness(const SpMat& Ms, const SpMat& B, const SpMat& C) {
    const int ns = static_cast<int>(Ms.rows());
    const int nu = static_cast<int>(B.rows());
    const int nc = static_cast<int>(C.rows());
    const int n = ns + nu + nc;
    std::vector<Eigen::Triplet<double>> trip;
    append_block(trip, Ms, 0, 0, 1.0, false);
    append_block(trip, B, 0, ns, -1.0, true);
    append_block(trip, B, ns, 0, -1.0, false);
    append_block(trip, C, 0, ns + nu, 1.0, true);
    append_block(trip, C, ns + nu, 0, 1.0, false);
    SpMat K(n, n);
    K.setFromTriplets(trip.begin(), trip.end());
    K.makeCompressed();
    return K;
}

SpMat pencil_mass(const SpMat& Mu, int n_sigma, int n_con) {
    const int nu = static_cast<int>(Mu.rows());
    const int n = n_sigma + nu + n_con;
    std::vector<Eigen::Triplet<double>> trip;
    append_block(trip, Mu, n_sigma, n_sigma, -1.0, false);
    SpMat M(n, n);
    M.setFromTriplets(trip.begin(), trip.end());
    M.makeCompressed();
    return M;
}

}  // namespace chfem
