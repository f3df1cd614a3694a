#include "chfem/errors.hpp"

#include "chfem/quadrature.hpp"

#include <cmath>

namespace chfem {

double error_sigma(const SigmaSpace& space, const Eigen::VectorXd& s, const CHCase& cas,
                   double t, int quad_degree) {
    const TriMesh& mesh = space.mesh();
    const auto& rule = triangle_rule(quad_degree);
    const auto& tab = SigmaSpace::p3_at(rule);
    double err2 = 0.0;
    for (int tt = 0; tt < mesh.num_tris(); ++tt) {
        const double scale = 2.0 * mesh.area(tt);
        const auto& dofs = space.dofs(tt);
        for (int q = 0; q < static_cast<int>(rule.size()); ++q) {
            Eigen::Matrix2d sh = Eigen::Matrix2d::Zero();
            for (const auto& d : dofs) sh += s[d.gdof] * tab.value(d.node, q) * d.T;
            const double l1 = rule[static_cast<size_t>(q)].x, l2 = rule[static_cast<size_t>(q)].y;
            const Eigen::Vector2d x = mesh.point(tt, 1.0 - l1 - l2, l1, l2);
            const Eigen::Matrix2d diff = sh - cas.sigma(x, t);
            err2 += scale * rule[static_cast<size_t>(q)].w * diff.squaredNorm();
        }
    }
    return std::sqrt(err2);
}

double error_state(const VSpace& vs, const Eigen::VectorXd& w, const CHCase& cas, double t,
                   int quad_degree) {
    const TriMesh& mesh = vs.mesh();
    const auto& rule = triangle_rule(quad_degree);
    double err2 = 0.0;
    for (int tt = 0; tt < mesh.num_tris(); ++tt) {
        const double scale = 2.0 * mesh.area(tt);
        for (const auto& q : rule) {
            const double l0 = 1.0 - q.x - q.y;
            const double uh = vs.eval(w, tt, l0, q.x, q.y);
            const double ue = cas.exact->u(mesh.point(tt, l0, q.x, q.y), t);
            err2 += scale * q.w * (uh - ue) * (uh - ue);
        }
    }
    return std::sqrt(err2);
}

double l2_norm_state(const VSpace& vs, const Eigen::VectorXd& w) {
    const TriMesh& mesh = vs.mesh();
    double n2 = 0.0;
    for (int tt = 0; tt < mesh.num_tris(); ++tt) {
        const double A = mesh.area(tt);
        const Eigen::Vector3d c = w.segment<3>(3 * tt);
        const Eigen::Matrix3d M =
            A / 12.0 * (Eigen::Matrix3d::Ones() + Eigen::Matrix3d::Identity());
        n2 += c.dot(M * c);
    }
    return std::sqrt(n2);
}

}  // namespace chfem
