#include "chfem/morley.hpp"

#include "chfem/bary_poly.hpp"
#include "chfem/eigs.hpp"
#include "chfem/quadrature.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <stdexcept>

namespace chfem {

namespace {

const std::vector<BaryPoly>& p2_monomials() {
    static const std::vector<BaryPoly> basis = monomial_basis(2);
    return basis;
}

// Hessian of a quadratic barycentric monomial: constant, assembled from the
// barycentric gradients.
Eigen::Matrix2d monomial_hessian(const std::array<int, 3>& expo,
                                 const std::array<Eigen::Vector2d, 3>& g) {
    Eigen::Matrix2d H = Eigen::Matrix2d::Zero();
    // lam_a^2 -> 2 g_a g_a',  lam_a lam_b -> g_a g_b' + g_b g_a'
    for (int a = 0; a < 3; ++a)
        for (int b = a; b < 3; ++b) {
            int cnt;
            if (a == b)
                cnt = expo[static_cast<size_t>(a)] == 2 ? 2 : 0;
            else
                cnt = (expo[static_cast<size_t>(a)] == 1 && expo[static_cast<size_t>(b)] == 1)
                          ? 1
                          : 0;
            if (cnt == 0) continue;
            const Eigen::Matrix2d gg = g[static_cast<size_t>(a)] *
                                       g[static_cast<size_t>(b)].transpose();
            H += (a == b) ? Eigen::Matrix2d(2.0 * gg) : Eigen::Matrix2d(gg + gg.transpose());
        }
    return H;
}

}  // namespace

MorleySpace::MorleySpace(const TriMesh& mesh) : mesh_(&mesh) {
    const auto& mono = p2_monomials();
    coef_.resize(static_cast<size_t>(mesh.num_tris()));

    for (int t = 0; t < mesh.num_tris(); ++t) {
        const auto g = mesh.grad_lambda(t);
        Eigen::Matrix<double, 6, 6> A;  // A(f, k) = functional f applied to monomial k
        for (int k = 0; k < 6; ++k) {
            const BaryPoly& m = mono[static_cast<size_t>(k)];
            // vertex values
            A(0, k) = m.eval(1, 0, 0);
            A(1, k) = m.eval(0, 1, 0);
            A(2, k) = m.eval(0, 0, 1);
            // mean (= midpoint) normal derivatives in the shared edge frames
            for (int ke = 0; ke < 3; ++ke) {
                const int e = mesh.tri_edge[static_cast<size_t>(t)][static_cast<size_t>(ke)];
                const Eigen::Vector2d ne = mesh.edge_normal(e);
                std::array<double, 3> lam{0.0, 0.0, 0.0};
                lam[static_cast<size_t>((ke + 1) % 3)] = 0.5;
                lam[static_cast<size_t>((ke + 2) % 3)] = 0.5;
                Eigen::Vector2d grad = Eigen::Vector2d::Zero();
                for (int i = 0; i < 3; ++i)
                    grad += m.dlam(i).eval(lam[0], lam[1], lam[2]) * g[static_cast<size_t>(i)];
                A(3 + ke, k) = grad.dot(ne);
            }
        }
        coef_[static_cast<size_t>(t)] = A.fullPivLu().solve(Eigen::Matrix<double, 6, 6>::Identity());
    }
}

int MorleySpace::global_dof(int t, int l) const {
    if (l < 3) return mesh_->tri[static_cast<size_t>(t)][static_cast<size_t>(l)];
    return mesh_->num_vertices() +
           mesh_->tri_edge[static_cast<size_t>(t)][static_cast<size_t>(l - 3)];
}

double MorleySpace::eval(const Eigen::VectorXd& u, int t, double l0, double l1, double l2) const {
    const auto& mono = p2_monomials();
    double v = 0.0;
    for (int j = 0; j < 6; ++j) {
        const double uj = u[global_dof(t, j)];
        if (uj == 0.0) continue;
        for (int k = 0; k < 6; ++k)
            v += uj * coef_[static_cast<size_t>(t)](k, j) *
                 mono[static_cast<size_t>(k)].eval(l0, l1, l2);
    }
    return v;
}

Eigen::Vector2d MorleySpace::eval_grad(const Eigen::VectorXd& u, int t, double l0, double l1,
                                       double l2) const {
    const auto& mono = p2_monomials();
    const auto g = mesh_->grad_lambda(t);
    Eigen::Vector2d gr = Eigen::Vector2d::Zero();
    for (int j = 0; j < 6; ++j) {
        const double uj = u[global_dof(t, j)];
        if (uj == 0.0) continue;
        for (int k = 0; k < 6; ++k) {
            const double c = uj * coef_[static_cast<size_t>(t)](k, j);
            if (c == 0.0) continue;
            for (int i = 0; i < 3; ++i)
                gr += c * mono[static_cast<size_t>(k)].dlam(i).eval(l0, l1, l2) *
                      g[static_cast<size_t>(i)];
        }
    }
    return gr;
}

Eigen::Matrix2d MorleySpace::basis_hessian(int t, int j) const {
    const auto& expo = monomial_exponents(2);
    const auto g = mesh_->grad_lambda(t);
    Eigen::Matrix2d H = Eigen::Matrix2d::Zero();
    for (int k = 0; k < 6; ++k)
        H += coef_[static_cast<size_t>(t)](k, j) * monomial_hessian(expo[static_cast<size_t>(k)], g);
    return H;
}

// ---------------------------------------------------------------------------
// source problem
// ---------------------------------------------------------------------------
MorleyErrors morley_biharmonic_solve(const TriMesh& mesh,
                                     const std::shared_ptr<const ExactSolution>& exact) {
    const MorleySpace sp(mesh);
    const int n = sp.ndof();
    const int V = mesh.num_vertices();

    // broken Hessian stiffness + volume integral vector (for the mean row)
    std::vector<Eigen::Triplet<double>> trip;
    Eigen::VectorXd jvec = Eigen::VectorXd::Zero(n);
    const auto& vol_rule = triangle_rule(4);
    for (int t = 0; t < mesh.num_tris(); ++t) {
        const double A = mesh.area(t);
        std::array<Eigen::Matrix2d, 6> H;
        for (int j = 0; j < 6; ++j) H[static_cast<size_t>(j)] = sp.basis_hessian(t, j);
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) {
                const double v = A * H[static_cast<size_t>(i)]
                                         .cwiseProduct(H[static_cast<size_t>(j)])
                                         .sum();
                if (v != 0.0) trip.emplace_back(sp.global_dof(t, i), sp.global_dof(t, j), v);
            }
        // integrals of the local basis functions
        const auto& mono = p2_monomials();
        for (const auto& qp : vol_rule) {
            const double l0 = 1.0 - qp.x - qp.y;
            for (int j = 0; j < 6; ++j) {
                double bj = 0.0;
                for (int k = 0; k < 6; ++k)
                    bj += sp.local_basis(t)(k, j) * mono[static_cast<size_t>(k)].eval(l0, qp.x, qp.y);
                jvec[sp.global_dof(t, j)] += 2.0 * A * qp.w * bj;
            }
        }
    }

    // right-hand side: (g, v) + boundary terms
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    const auto& rule = triangle_rule(8);
    const auto& mono = p2_monomials();
    for (int t = 0; t < mesh.num_tris(); ++t) {
        const double A = mesh.area(t);
        for (const auto& q : rule) {
            const double l0 = 1.0 - q.x - q.y;
            const double gv = exact->bilap_u(mesh.point(t, l0, q.x, q.y), 0.0);
            if (gv == 0.0) continue;
            for (int j = 0; j < 6; ++j) {
                double bj = 0.0;
                for (int k = 0; k < 6; ++k)
                    bj += sp.local_basis(t)(k, j) * mono[static_cast<size_t>(k)].eval(l0, q.x, q.y);
                rhs[sp.global_dof(t, j)] += 2.0 * A * q.w * gv * bj;
            }
        }
    }
    // boundary integrals: + (t' hess(u) n_out, dv/dt) - (g2, v)
    const auto& erule = segment_rule(8);
    for (int e = 0; e < mesh.num_edges(); ++e) {
        if (!mesh.is_boundary_edge(e)) continue;
        const int t = mesh.edge_tri[static_cast<size_t>(e)][0];
        const double h = mesh.edge_length(e);
        const Eigen::Vector2d te = mesh.edge_tangent(e);
        const Eigen::Vector2d nout = mesh.outward_sign(t, e) * mesh.edge_normal(e);
        const int a_lo = mesh.local_vertex(t, mesh.edge_v[static_cast<size_t>(e)][0]);
        const int a_hi = mesh.local_vertex(t, mesh.edge_v[static_cast<size_t>(e)][1]);
        const auto g = mesh.grad_lambda(t);
        for (const auto& q : erule) {
            const Eigen::Vector2d x = mesh.edge_point(e, q.t);
            std::array<double, 3> lam{0.0, 0.0, 0.0};
            lam[static_cast<size_t>(a_lo)] = 1.0 - q.t;
            lam[static_cast<size_t>(a_hi)] = q.t;
            const Eigen::Matrix2d Hx = exact->hess_u(x, 0.0);
            const double tHn = te.dot(Hx * nout);
            const double g2 = exact->grad_lap_u(x, 0.0).dot(nout);
            // local basis values and tangential derivatives at the edge point
            for (int j = 0; j < 6; ++j) {
                double vj = 0.0, dtvj = 0.0;
                for (int k = 0; k < 6; ++k) {
                    const double c = sp.local_basis(t)(k, j);
                    if (c == 0.0) continue;
                    const BaryPoly& m = mono[static_cast<size_t>(k)];
                    vj += c * m.eval(lam[0], lam[1], lam[2]);
                    for (int i = 0; i < 3; ++i)
                        dtvj += c * m.dlam(i).eval(lam[0], lam[1], lam[2]) *
                                g[static_cast<size_t>(i)].dot(te);
                }
                rhs[sp.global_dof(t, j)] += q.w * h * (tHn * dtvj - g2 * vj);
            }
        }
    }

    // essential boundary-edge dofs: mean of the exact normal derivative in
    // the shared frame
    std::vector<char> fixed(static_cast<size_t>(n), 0);
    Eigen::VectorXd ufix = Eigen::VectorXd::Zero(n);
    for (int e = 0; e < mesh.num_edges(); ++e) {
        if (!mesh.is_boundary_edge(e)) continue;
        const Eigen::Vector2d ne = mesh.edge_normal(e);
        double mean = 0.0;
        for (const auto& q : erule)
            mean += q.w * exact->grad_u(mesh.edge_point(e, q.t), 0.0).dot(ne);
        fixed[static_cast<size_t>(V + e)] = 1;
        ufix[V + e] = mean;
    }

    // exact mean of the state
    double u_int = 0.0;
    const auto& rule12 = triangle_rule(12);
    for (int t = 0; t < mesh.num_tris(); ++t) {
        const double scale = 2.0 * mesh.area(t);
        for (const auto& q : rule12)
            u_int += scale * q.w * exact->u(mesh.point(t, 1.0 - q.x - q.y, q.x, q.y), 0.0);
    }

    // reduce to the free dofs, append the mean multiplier row/column
    std::vector<int> free_id(static_cast<size_t>(n), -1);
    int nf = 0;
    for (int i = 0; i < n; ++i)
        if (!fixed[static_cast<size_t>(i)]) free_id[static_cast<size_t>(i)] = nf++;

    Eigen::SparseMatrix<double> Kfull(n, n);
    Kfull.setFromTriplets(trip.begin(), trip.end());
    Kfull.makeCompressed();

    std::vector<Eigen::Triplet<double>> rt;
    Eigen::VectorXd rrhs = Eigen::VectorXd::Zero(nf + 1);
    for (int k = 0; k < Kfull.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(Kfull, k); it; ++it) {
            const int i = static_cast<int>(it.row()), j = static_cast<int>(it.col());
            if (fixed[static_cast<size_t>(i)]) continue;
            if (fixed[static_cast<size_t>(j)])
                rrhs[free_id[static_cast<size_t>(i)]] -= it.value() * ufix[j];
            else
                rt.emplace_back(free_id[static_cast<size_t>(i)], free_id[static_cast<size_t>(j)],
                                it.value());
        }
    double mean_rhs = u_int;
    for (int i = 0; i < n; ++i) {
        if (fixed[static_cast<size_t>(i)]) {
            mean_rhs -= jvec[i] * ufix[i];
        } else {
            rrhs[free_id[static_cast<size_t>(i)]] += rhs[i];
            if (jvec[i] != 0.0) {
                rt.emplace_back(free_id[static_cast<size_t>(i)], nf, jvec[i]);
                rt.emplace_back(nf, free_id[static_cast<size_t>(i)], jvec[i]);
            }
        }
    }
    rrhs[nf] = mean_rhs;

    Eigen::SparseMatrix<double> Kred(nf + 1, nf + 1);
    Kred.setFromTriplets(rt.begin(), rt.end());
    Kred.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(Kred);
    if (lu.info() != Eigen::Success)
        throw std::runtime_error("morley_biharmonic_solve: factorisation failed");
    const Eigen::VectorXd sol = lu.solve(rrhs);

    Eigen::VectorXd u = ufix;
    for (int i = 0; i < n; ++i)
        if (!fixed[static_cast<size_t>(i)]) u[i] = sol[free_id[static_cast<size_t>(i)]];

    // errors
    MorleyErrors err;
    err.n_dofs = n;
    double e_sig = 0.0, e_u = 0.0;
    for (int t = 0; t < mesh.num_tris(); ++t) {
        const double scale = 2.0 * mesh.area(t);
        Eigen::Matrix2d Hh = Eigen::Matrix2d::Zero();
        for (int j = 0; j < 6; ++j) Hh += u[sp.global_dof(t, j)] * sp.basis_hessian(t, j);
        for (const auto& q : rule12) {
            const double l0 = 1.0 - q.x - q.y;
            const Eigen::Vector2d x = mesh.point(t, l0, q.x, q.y);
            const double uh = sp.eval(u, t, l0, q.x, q.y);
            e_sig += scale * q.w * (exact->hess_u(x, 0.0) - Hh).squaredNorm();
            e_u += scale * q.w * std::pow(uh - exact->u(x, 0.0), 2);
        }
    }
    err.sigma = std::sqrt(e_sig);
    err.state = std::sqrt(e_u);
    return err;
}

// ---------------------------------------------------------------------------
// eigenvalue problem (homogeneous boundary data: boundary edge dofs = 0)
// ---------------------------------------------------------------------------
std::vector<double> morley_biharmonic_eigs(const TriMesh& mesh, int count, bool dense) {
    const MorleySpace sp(mesh);
    const int n = sp.ndof();
    const int V = mesh.num_vertices();

    std::vector<char> fixed(static_cast<size_t>(n), 0);
    for (int e = 0; e < mesh.num_edges(); ++e)
        if (mesh.is_boundary_edge(e)) fixed[static_cast<size_t>(V + e)] = 1;
    std::vector<int> free_id(static_cast<size_t>(n), -1);
    int nf = 0;
    for (int i = 0; i < n; ++i)
        if (!fixed[static_cast<size_t>(i)]) free_id[static_cast<size_t>(i)] = nf++;

    std::vector<Eigen::Triplet<double>> kt, mt;
    const auto& rule = triangle_rule(6);
    const auto& mono = p2_monomials();
    for (int t = 0; t < mesh.num_tris(); ++t) {
        const double A = mesh.area(t);
        std::array<Eigen::Matrix2d, 6> H;
        for (int j = 0; j < 6; ++j) H[static_cast<size_t>(j)] = sp.basis_hessian(t, j);
        // local values at quadrature points
        Eigen::MatrixXd val(6, static_cast<int>(rule.size()));
        for (int q = 0; q < static_cast<int>(rule.size()); ++q) {
            const auto& qp = rule[static_cast<size_t>(q)];
            const double l0 = 1.0 - qp.x - qp.y;
            for (int j = 0; j < 6; ++j) {
                double bj = 0.0;
                for (int k = 0; k < 6; ++k)
                    bj += sp.local_basis(t)(k, j) * mono[static_cast<size_t>(k)].eval(l0, qp.x, qp.y);
                val(j, q) = bj;
            }
        }
        for (int i = 0; i < 6; ++i) {
            const int gi = sp.global_dof(t, i);
            if (fixed[static_cast<size_t>(gi)]) continue;
            for (int j = 0; j < 6; ++j) {
                const int gj = sp.global_dof(t, j);
                if (fixed[static_cast<size_t>(gj)]) continue;
                const double kv = A * H[static_cast<size_t>(i)]
                                          .cwiseProduct(H[static_cast<size_t>(j)])
                                          .sum();
                double mv = 0.0;
                for (int q = 0; q < static_cast<int>(rule.size()); ++q)
                    mv += 2.0 * A * rule[static_cast<size_t>(q)].w * val(i, q) * val(j, q);
                if (kv != 0.0)
                    kt.emplace_back(free_id[static_cast<size_t>(gi)],
                                    free_id[static_cast<size_t>(gj)], kv);
                mt.emplace_back(free_id[static_cast<size_t>(gi)],
                                free_id[static_cast<size_t>(gj)], mv);
            }
        }
    }
    Eigen::SparseMatrix<double> K(nf, nf), M(nf, nf);
    K.setFromTriplets(kt.begin(), kt.end());
    M.setFromTriplets(mt.begin(), mt.end());
    K.makeCompressed();
    M.makeCompressed();

    std::vector<double> all;
    if (dense) {
        all = dense_generalized_eigs(Eigen::MatrixXd(K), Eigen::MatrixXd(M));
    } else {
        ShiftInvertOptions opt;
        opt.shift = 1.0;
        opt.k_sign = 1.0;
        opt.wanted = count + 3;
        opt.krylov_dim = 140;
        all = shift_invert_eigs(K, M, opt);
    }
    std::vector<double> out;
    for (const double lam : all) {
        if (lam < 1e-6) continue;  // the constant mode
        out.push_back(lam);
        if (static_cast<int>(out.size()) == count) break;
    }
    return out;
}

}  // namespace chfem
