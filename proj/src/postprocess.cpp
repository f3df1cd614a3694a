#include "chfem/postprocess.hpp"

#include "chfem/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace chfem {

namespace {

const std::vector<BaryPoly>& p5_monomials() {
    static const std::vector<BaryPoly> basis = monomial_basis(5);
    return basis;
}

const ScalarTab& p5_at(const std::vector<QPoint>& rule) {
    static std::mutex mtx;
    static std::map<const void*, ScalarTab> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(rule.data());
    if (it != cache.end()) return it->second;
    std::vector<BaryPoint> pts;
    pts.reserve(rule.size());
    for (const auto& q : rule) pts.push_back({1.0 - q.x - q.y, q.x, q.y});
    return cache.emplace(rule.data(), tabulate(p5_monomials(), pts)).first->second;
}

Eigen::Matrix2d contract_hess(const std::array<double, 6>& d2,
                              const std::array<Eigen::Vector2d, 3>& g) {
    const int pair[6][2] = {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}};
    Eigen::Matrix2d H = Eigen::Matrix2d::Zero();
    for (int s = 0; s < 6; ++s) {
        const Eigen::Matrix2d gg = g[static_cast<size_t>(pair[s][0])] *
                                   g[static_cast<size_t>(pair[s][1])].transpose();
        H += d2[static_cast<size_t>(s)] *
             (pair[s][0] == pair[s][1] ? gg : Eigen::Matrix2d(gg + gg.transpose()));
    }
    return H;
}

}  // namespace

ReconResult reconstruct_state(const SigmaSpace& space, const VSpace& vs,
                              const Eigen::VectorXd& s, const Eigen::VectorXd& w,
                              const CHCase& cas, int quad_degree) {
    const TriMesh& mesh = space.mesh();
    const auto& rule = triangle_rule(quad_degree);
    const auto& tab5 = p5_at(rule);
    const auto& tab3 = SigmaSpace::p3_at(rule);
    constexpr int np = 21;

    ReconResult out;
    out.coef.resize(mesh.num_tris(), np);

    for (int t = 0; t < mesh.num_tris(); ++t) {
        const double A = mesh.area(t);
        const double scale = 2.0 * A;
        const auto g = mesh.grad_lambda(t);
        const auto& dofs = space.dofs(t);

        Eigen::MatrixXd K = Eigen::MatrixXd::Zero(np + 3, np + 3);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(np + 3);

        for (int q = 0; q < static_cast<int>(rule.size()); ++q) {
            const double wq = scale * rule[static_cast<size_t>(q)].w;
            const double l1 = rule[static_cast<size_t>(q)].x, l2 = rule[static_cast<size_t>(q)].y;
            const double lam[3] = {1.0 - l1 - l2, l1, l2};

            std::array<Eigen::Matrix2d, np> hess5;
            for (int i = 0; i < np; ++i) hess5[static_cast<size_t>(i)] = contract_hess(tab5.hess(i, q), g);

            // driving tensor: sigma_h + eps^{-2} f(u_h) I
            Eigen::Matrix2d drive = Eigen::Matrix2d::Zero();
            for (const auto& d : dofs) drive += s[d.gdof] * tab3.value(d.node, q) * d.T;
            const double fw = cas.eps_inv2() * cas.f(vs.eval(w, t, lam[0], lam[1], lam[2]));
            drive(0, 0) += fw;
            drive(1, 1) += fw;

            for (int i = 0; i < np; ++i) {
                for (int j = 0; j <= i; ++j) {
                    const double v = wq * hess5[static_cast<size_t>(i)]
                                              .cwiseProduct(hess5[static_cast<size_t>(j)])
                                              .sum();
                    K(i, j) += v;
                    if (i != j) K(j, i) += v;
                }
                rhs[i] += wq * drive.cwiseProduct(hess5[static_cast<size_t>(i)]).sum();
                // moment coupling (p_i, lam_a)
                for (int a = 0; a < 3; ++a) {
                    const double v = wq * tab5.value(i, q) * lam[a];
                    K(np + a, i) += v;
                    K(i, np + a) += v;
                }
            }
        }

        // exact linear moments of the state
        const Eigen::Matrix3d Mloc =
            A / 12.0 * (Eigen::Matrix3d::Ones() + Eigen::Matrix3d::Identity());
        rhs.segment<3>(np) = Mloc * w.segment<3>(3 * t);

        const Eigen::VectorXd sol = Eigen::FullPivLU<Eigen::MatrixXd>(K).solve(rhs);
        out.coef.row(t) = sol.segment(0, np).transpose();
        out.max_multiplier =
            std::max(out.max_multiplier, sol.segment<3>(np).cwiseAbs().maxCoeff());
    }
    return out;
}

double eval_reconstruction(const Eigen::MatrixXd& coef, int t, double l0, double l1, double l2) {
    const auto& basis = p5_monomials();
    double v = 0.0;
    for (int i = 0; i < 21; ++i) v += coef(t, i) * basis[static_cast<size_t>(i)].eval(l0, l1, l2);
    return v;
}

double error_reconstruction(const TriMesh& mesh, const Eigen::MatrixXd& coef, const CHCase& cas,
                            double t, int quad_degree) {
    const auto& rule = triangle_rule(quad_degree);
    const auto& tab5 = p5_at(rule);
    double err2 = 0.0;
    for (int tt = 0; tt < mesh.num_tris(); ++tt) {
        const double scale = 2.0 * mesh.area(tt);
        for (int q = 0; q < static_cast<int>(rule.size()); ++q) {
            double uh = 0.0;
            for (int i = 0; i < 21; ++i) uh += coef(tt, i) * tab5.value(i, q);
            const double l1 = rule[static_cast<size_t>(q)].x, l2 = rule[static_cast<size_t>(q)].y;
            const double ue = cas.exact->u(mesh.point(tt, 1.0 - l1 - l2, l1, l2), t);
            err2 += scale * rule[static_cast<size_t>(q)].w * (uh - ue) * (uh - ue);
        }
    }
    return std::sqrt(err2);
}

}  // namespace chfem
