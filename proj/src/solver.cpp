#include "chfem/solver.hpp"

#include "chfem/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace chfem {

MixedCH::MixedCH(TriMesh mesh, CHCase cas, QuadOptions quad)
    : mesh_(std::move(mesh)), case_(std::move(cas)), quad_(quad) {
    sig_ = std::make_unique<SigmaSpace>(mesh_);
    vsp_ = std::make_unique<VSpace>(mesh_);
    con_ = std::make_unique<SigmaConstraints>(*sig_);
    Ms_ = mass_sigma(*sig_, quad_.mass);
    B_ = divdiv_coupling(*sig_, *vsp_);
    Mu_ = mass_v(*vsp_);
    jvec_ = mean_vector(*vsp_);
}

Eigen::VectorXd MixedCH::natural_load(double t) const {
    if (!case_.exact) return Eigen::VectorXd::Zero(sig_->ndof());
    return load_normal_trace(
        *sig_,
        [&](const Eigen::Vector2d& x, const Eigen::Vector2d& nout) {
            return case_.normal_deriv(x, nout, t);
        },
        quad_.edge);
}

Eigen::VectorXd MixedCH::constraint_data(double t) const {
    if (!case_.exact) return Eigen::VectorXd::Zero(con_->rows());
    return con_->boundary_moments(
        [&](const Eigen::Vector2d& x, const Eigen::Vector2d& te, const Eigen::Vector2d& ne) {
            return case_.tn_trace(x, te, ne, t);
        },
        [&](const Eigen::Vector2d& x, const Eigen::Vector2d& ne) {
            return case_.dn_trace(x, ne, t);
        });
}

MixedCH::Pair MixedCH::project_exact(double t, double* rho_out) const {
    if (!case_.exact) throw std::logic_error("project_exact: no exact solution available");
    const int ns = sig_->ndof();
    const int nu = vsp_->ndof();
    const int nc = con_->rows();

    const SpMat K = stationary_matrix(Ms_, B_, con_->matrix(), jvec_);
    Eigen::SparseLU<SpMat> lu;
    lu.compute(K);
    if (lu.info() != Eigen::Success)
        throw std::runtime_error("project_exact: factorisation failed");

    // r1_i = (sigma, phi_i) - sum_K (divDiv phi_i, u)_K
    const auto& rule = triangle_rule(quad_.project);
    const auto& tab = SigmaSpace::p3_at(rule);
    Eigen::VectorXd r1 = Eigen::VectorXd::Zero(ns);
    for (int tt = 0; tt < mesh_.num_tris(); ++tt) {
        const double scale = 2.0 * mesh_.area(tt);
        const auto g = mesh_.grad_lambda(tt);
        for (int q = 0; q < static_cast<int>(rule.size()); ++q) {
            const double l1 = rule[static_cast<size_t>(q)].x, l2 = rule[static_cast<size_t>(q)].y;
            const Eigen::Vector2d x = mesh_.point(tt, 1.0 - l1 - l2, l1, l2);
            const Eigen::Matrix2d sig = case_.sigma(x, t);
            const double uv = case_.exact->u(x, t);
            const double wq = scale * rule[static_cast<size_t>(q)].w;
            // Hessians of the scalar nodes
            std::array<Eigen::Matrix2d, 10> hessL;
            for (int n = 0; n < 10; ++n) {
                const auto& d2 = tab.hess(n, q);
                const int pair[6][2] = {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}};
                Eigen::Matrix2d H = Eigen::Matrix2d::Zero();
                for (int ss = 0; ss < 6; ++ss) {
                    const Eigen::Matrix2d gg = g[static_cast<size_t>(pair[ss][0])] *
                                               g[static_cast<size_t>(pair[ss][1])].transpose();
                    H += d2[static_cast<size_t>(ss)] *
                         (pair[ss][0] == pair[ss][1] ? gg : Eigen::Matrix2d(gg + gg.transpose()));
                }
                hessL[static_cast<size_t>(n)] = H;
            }
            for (const auto& d : sig_->dofs(tt)) {
                const double tau_dot_sigma = d.T.cwiseProduct(sig).sum() * tab.value(d.node, q);
                const double divdiv = d.T.cwiseProduct(hessL[static_cast<size_t>(d.node)]).sum();
                r1[d.gdof] += wq * (tau_dot_sigma - divdiv * uv);
            }
        }
    }

    // r2_i = (divDiv sigma, psi_i), with divDiv sigma available in closed form
    Eigen::VectorXd r2 = load_scalar(
        *vsp_, [&](const Eigen::Vector2d& x) { return case_.divdiv_sigma(x, t); },
        quad_.project);

    // exact state integral
    double u_int = 0.0;
    for (int tt = 0; tt < mesh_.num_tris(); ++tt) {
        const double scale = 2.0 * mesh_.area(tt);
        for (const auto& q : rule)
            u_int += scale * q.w *
                     case_.exact->u(mesh_.point(tt, 1.0 - q.x - q.y, q.x, q.y), t);
    }

    Eigen::VectorXd rhs(ns + nu + nc + 1);
    rhs.segment(0, ns) = r1;
    rhs.segment(ns, nu) = -r2;
    rhs.segment(ns + nu, nc) = constraint_data(t);
    rhs[ns + nu + nc] = -u_int;

    const Eigen::VectorXd sol = lu.solve(rhs);
    if (rho_out) *rho_out = sol[ns + nu + nc];
    return {sol.segment(0, ns), sol.segment(ns, nu)};
}

MixedCH::Pair MixedCH::init_from_u0() const {
    const int ns = sig_->ndof();
    const int nc = con_->rows();
    Eigen::VectorXd w0 = vsp_->project_l2(case_.u0, quad_.project);

    // flux consistent with the frozen state:
    //   (s, phi) = (divDiv phi, w0) + N(0) - eps^{-2} (f(w0) I, phi),  C s = d(0)
    std::vector<Eigen::Triplet<double>> trip;
    for (int k = 0; k < Ms_.outerSize(); ++k)
        for (SpMat::InnerIterator it(Ms_, k); it; ++it)
            trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    const SpMat& C = con_->matrix();
    for (int k = 0; k < C.outerSize(); ++k)
        for (SpMat::InnerIterator it(C, k); it; ++it) {
            trip.emplace_back(ns + static_cast<int>(it.row()), static_cast<int>(it.col()),
                              it.value());
            trip.emplace_back(static_cast<int>(it.col()), ns + static_cast<int>(it.row()),
                              it.value());
        }
    SpMat K(ns + nc, ns + nc);
    K.setFromTriplets(trip.begin(), trip.end());
    K.makeCompressed();
    Eigen::SparseLU<SpMat> lu;
    lu.compute(K);
    if (lu.info() != Eigen::Success)
        throw std::runtime_error("init_from_u0: factorisation failed");

    const double w = -case_.eps_inv2();
    Eigen::VectorXd fload = load_isotropic(
        *sig_,
        [&](int t, double l0, double l1, double l2) {
            return w * case_.f(vsp_->eval(w0, t, l0, l1, l2));
        },
        quad_.project);
    Eigen::VectorXd rhs(ns + nc);
    rhs.segment(0, ns) = B_.transpose() * w0 + natural_load(0.0) + fload;
    rhs.segment(ns, nc) = constraint_data(0.0);
    const Eigen::VectorXd sol = lu.solve(rhs);
    return {sol.segment(0, ns), w0};
}

void MixedCH::prepare_stepping(double tau) {
    tau_ = tau;
    step_lu_ = std::make_unique<Eigen::SparseLU<SpMat>>();
    const SpMat K = step_matrix(Ms_, B_, Mu_, con_->matrix(), tau);
    step_lu_->compute(K);
    if (step_lu_->info() != Eigen::Success)
        throw std::runtime_error("prepare_stepping: factorisation failed");
}

MixedCH::Pair MixedCH::solve_step_rhs(const Eigen::VectorXd& s_rhs, const Eigen::VectorXd& u_rhs,
                                      const Eigen::VectorXd& c_rhs) const {
    const int ns = sig_->ndof();
    const int nu = vsp_->ndof();
    const int nc = con_->rows();
    Eigen::VectorXd rhs(ns + nu + nc);
    rhs.segment(0, ns) = s_rhs;
    rhs.segment(ns, nu) = u_rhs;
    rhs.segment(ns + nu, nc) = c_rhs;
    const Eigen::VectorXd sol = step_lu_->solve(rhs);
    Pair out{sol.segment(0, ns), sol.segment(ns, nu)};
    if (!out.s.allFinite() || !out.w.allFinite())
        throw std::runtime_error("time step produced non-finite values");
    return out;
}

MixedCH::Pair MixedCH::step(const Pair& prev, double t_new) const {
    return step_custom_potential(
        prev, t_new,
        [&](int t, double l0, double l1, double l2) {
            return vsp_->eval(prev.w, t, l0, l1, l2);
        },
        quad_.mass);
}

MixedCH::Pair MixedCH::step_custom_potential(
    const Pair& prev, double t_new,
    const std::function<double(int, double, double, double)>& u_at, int quad_degree) const {
    if (!step_lu_) throw std::logic_error("step: call prepare_stepping first");
    const double w = -case_.eps_inv2();
    Eigen::VectorXd s_rhs = load_isotropic(
        *sig_,
        [&](int t, double l0, double l1, double l2) { return w * case_.f(u_at(t, l0, l1, l2)); },
        quad_degree);
    s_rhs += natural_load(t_new);

    Eigen::VectorXd u_rhs = -(1.0 / tau_) * (Mu_ * prev.w);
    if (case_.exact)
        u_rhs -= load_scalar(
            *vsp_, [&](const Eigen::Vector2d& x) { return case_.source(x, t_new); },
            quad_.source);

    return solve_step_rhs(s_rhs, u_rhs, constraint_data(t_new));
}

int step_count(double T, double tau) {
    const int n = static_cast<int>(std::llround(T / tau));
    return n < 1 ? 1 : n;
}

}  // namespace chfem
