#include "chfem/audit.hpp"

#include "chfem/constraints.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace chfem {

namespace {

// worst relative edge-trace violation of a tensor field
double field_violation(const TriMesh& mesh, const SigmaSpace& sig, const Eigen::VectorXd& c) {
    const std::array<double, 5> samples{0.12, 0.34, 0.5, 0.71, 0.93};
    double worst = 0.0;
    for (int e = 0; e < mesh.num_edges(); ++e) {
        const Eigen::Vector2d ne = mesh.edge_normal(e);
        const Eigen::Vector2d te = mesh.edge_tangent(e);
        for (const double s : samples) {
            // per side: tau*n and Div tau . n at the edge point
            std::array<Eigen::Vector2d, 2> tn{Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero()};
            std::array<double, 2> dn{0.0, 0.0};
            int nsides = 0;
            for (int sd = 0; sd < 2; ++sd) {
                const int t = mesh.edge_tri[static_cast<size_t>(e)][static_cast<size_t>(sd)];
                if (t < 0) continue;
                ++nsides;
                const int a_lo = mesh.local_vertex(t, mesh.edge_v[static_cast<size_t>(e)][0]);
                const int a_hi = mesh.local_vertex(t, mesh.edge_v[static_cast<size_t>(e)][1]);
                std::array<double, 3> lam{0.0, 0.0, 0.0};
                lam[static_cast<size_t>(a_lo)] = 1.0 - s;
                lam[static_cast<size_t>(a_hi)] = s;
                const Eigen::Matrix2d tau = sig.eval(c, t, lam[0], lam[1], lam[2]);
                const Eigen::Vector2d dv = sig.eval_div(c, t, lam[0], lam[1], lam[2]);
                tn[static_cast<size_t>(sd)] = tau * ne;
                dn[static_cast<size_t>(sd)] = dv.dot(ne);
            }
            const double ref = std::max({tn[0].norm(), tn[1].norm(), std::abs(dn[0]),
                                         std::abs(dn[1]), 1e-12});
            if (nsides == 2) {
                worst = std::max(worst, (tn[0] - tn[1]).norm() / ref);
                worst = std::max(worst, std::abs(dn[0] - dn[1]) / ref);
            } else {
                // homogeneous boundary conditions: tangential trace and
                // normal divergence vanish
                worst = std::max(worst, std::abs(te.dot(tn[0])) / ref);
                worst = std::max(worst, std::abs(dn[0]) / ref);
            }
        }
    }
    return worst;
}

}  // namespace

AuditReport conformity_audit(const TriMesh& mesh, int n_fields, unsigned seed) {
    const SigmaSpace sig(mesh);
    const SigmaConstraints con(sig);
    const Eigen::SparseMatrix<double>& C = con.matrix();

    AuditReport rep;
    rep.fields = n_fields;
    rep.constraint_rows = con.rows();
    rep.constraint_rank = con.dense_rank();

    // least-squares projector onto ker C via the normal equations of C'
    Eigen::SparseMatrix<double> CCt = (C * Eigen::SparseMatrix<double>(C.transpose()))
                                          .pruned();
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(CCt);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    rep.min_control_jump = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n_fields; ++k) {
        Eigen::VectorXd y(sig.ndof());
        for (int i = 0; i < y.size(); ++i) y[i] = gauss(rng);
        y /= y.cwiseAbs().maxCoeff();

        rep.min_control_jump = std::min(rep.min_control_jump, field_violation(mesh, sig, y));

        const Eigen::VectorXd adm = y - C.transpose() * ldlt.solve(C * y);
        rep.max_admissible_jump = std::max(rep.max_admissible_jump,
                                           field_violation(mesh, sig, adm));
    }
    return rep;
}

}  // namespace chfem
