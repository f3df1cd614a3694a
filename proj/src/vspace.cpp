#include "chfem/vspace.hpp"

#include "chfem/quadrature.hpp"

namespace chfem {

double VSpace::integral(const Eigen::VectorXd& coef) const {
    double s = 0.0;
    for (int t = 0; t < mesh_->num_tris(); ++t) {
        const double A = mesh_->area(t);
        s += A / 3.0 * (coef[3 * t] + coef[3 * t + 1] + coef[3 * t + 2]);
    }
    return s;
}

Eigen::VectorXd VSpace::interpolate_nodal(
    const std::function<double(const Eigen::Vector2d&)>& f) const {
    Eigen::VectorXd c(ndof());
    for (int t = 0; t < mesh_->num_tris(); ++t)
        for (int a = 0; a < 3; ++a)
            c[3 * t + a] = f(mesh_->xy[static_cast<size_t>(
                mesh_->tri[static_cast<size_t>(t)][static_cast<size_t>(a)])]);
    return c;
}

Eigen::VectorXd VSpace::project_l2(const std::function<double(const Eigen::Vector2d&)>& f,
                                   int quad_degree) const {
    const auto& rule = triangle_rule(quad_degree);
    Eigen::VectorXd c(ndof());
    for (int t = 0; t < mesh_->num_tris(); ++t) {
        const double A = mesh_->area(t);
        // local mass matrix of the barycentric basis: A/12 * (ones + I)
        Eigen::Matrix3d M = A / 12.0 * (Eigen::Matrix3d::Ones() + Eigen::Matrix3d::Identity());
        Eigen::Vector3d b = Eigen::Vector3d::Zero();
        for (const auto& q : rule) {
            const double l0 = 1.0 - q.x - q.y, l1 = q.x, l2 = q.y;
            const double fv = f(mesh_->point(t, l0, l1, l2));
            b += 2.0 * A * q.w * fv * Eigen::Vector3d(l0, l1, l2);
        }
        c.segment<3>(3 * t) = M.ldlt().solve(b);
    }
    return c;
}

}  // namespace chfem
