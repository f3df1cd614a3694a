#include "doctest.h"

#include "chfem/assembly.hpp"
#include "util.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>

using chfem::SigmaSpace;
using chfem::TriMesh;
using chfem::VSpace;

TEST_CASE("tensor Gram matrix is symmetric positive definite") {
    const TriMesh m = chfem::square_level(1);
    const SigmaSpace sp(m);
    const Eigen::MatrixXd Ms = Eigen::MatrixXd(chfem::mass_sigma(sp, 6));
    CHECK((Ms - Ms.transpose()).norm() <= 1e-13 * Ms.norm());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Ms);
    CHECK(es.eigenvalues().minCoeff() > 1e-12 * es.eigenvalues().maxCoeff());
}

TEST_CASE("scalar mass blocks match the closed form A/12 (ones + I)") {
    const TriMesh m = chfem::lshape_level(2);
    const VSpace vs(m);
    const Eigen::MatrixXd Mu = Eigen::MatrixXd(chfem::mass_v(vs));
    for (int t = 0; t < m.num_tris(); ++t) {
        const double A = m.area(t);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                const double want = A / 12.0 * (a == b ? 2.0 : 1.0);
                CHECK(Mu(3 * t + a, 3 * t + b) == doctest::Approx(want).epsilon(1e-13));
            }
    }
    // no coupling between elements
    for (int t = 1; t < m.num_tris(); ++t) CHECK(Mu(0, 3 * t) == 0.0);
}

TEST_CASE("mean vector entries are A/3 and match the unit scalar load") {
    const TriMesh m = chfem::square_level(2);
    const VSpace vs(m);
    const Eigen::VectorXd j = chfem::mean_vector(vs);
    for (int t = 0; t < m.num_tris(); ++t)
        for (int a = 0; a < 3; ++a)
            CHECK(j[3 * t + a] == doctest::Approx(m.area(t) / 3.0).epsilon(1e-13));
    const Eigen::VectorXd g1 =
        chfem::load_scalar(vs, [](const Eigen::Vector2d&) { return 1.0; }, 4);
    CHECK((j - g1).norm() <= 1e-13 * j.norm());
    CHECK(j.sum() == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("divDiv coupling satisfies the elementwise integration-by-parts identity") {
    // (divDiv tau, v)_K  =  sum_edges int_e (Div tau . n_out) v ds  -  (Div tau, grad v)_K
    const TriMesh m = chfem::square_level(2);
    const SigmaSpace sp(m);
    const VSpace vs(m);
    const Eigen::SparseMatrix<double> B = chfem::divdiv_coupling(sp, vs);
    REQUIRE(B.rows() == vs.ndof());
    REQUIRE(B.cols() == sp.ndof());

    std::mt19937 rng(777);
    std::normal_distribution<double> N(0.0, 1.0);
    Eigen::VectorXd tau(sp.ndof()), v(vs.ndof());
    for (int i = 0; i < tau.size(); ++i) tau[i] = N(rng);
    for (int i = 0; i < v.size(); ++i) v[i] = N(rng);

    const Eigen::VectorXd Bt = B * tau;
    const auto& vol = chfem::triangle_rule(6);
    const auto& seg = chfem::segment_rule(8);
    double max_rel = 0.0;
    for (int t = 0; t < m.num_tris(); ++t) {
        const double lhs = v.segment(3 * t, 3).dot(Bt.segment(3 * t, 3));
        const auto g = m.grad_lambda(t);
        const Eigen::Vector2d grad_v =
            v[3 * t] * g[0] + v[3 * t + 1] * g[1] + v[3 * t + 2] * g[2];
        double rhs = 0.0;
        for (const auto& q : vol) {
            const double l0 = 1.0 - q.x - q.y;
            const Eigen::Vector2d dv = sp.eval_div(tau, t, l0, q.x, q.y);
            rhs -= 2.0 * m.area(t) * q.w * dv.dot(grad_v);
        }
        for (int k = 0; k < 3; ++k) {
            const int e = m.tri_edge[t][k];
            const Eigen::Vector2d n_out = m.outward_sign(t, e) * m.edge_normal(e);
            const int a_lo = m.local_vertex(t, m.edge_v[e][0]);
            const int a_hi = m.local_vertex(t, m.edge_v[e][1]);
            for (const auto& q : seg) {
                double lam[3] = {0.0, 0.0, 0.0};
                lam[a_lo] = 1.0 - q.t;
                lam[a_hi] = q.t;
                const Eigen::Vector2d dv = sp.eval_div(tau, t, lam[0], lam[1], lam[2]);
                const double vv = vs.eval(v, t, lam[0], lam[1], lam[2]);
                rhs += m.edge_length(e) * q.w * dv.dot(n_out) * vv;
            }
        }
        max_rel = std::max(max_rel, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
    }
    CHECK(max_rel <= 1e-11);
}

TEST_CASE("isotropic potential load with unit weight equals Gram times identity field") {
    const TriMesh m = chfem::square_level(1);
    const SigmaSpace sp(m);
    const Eigen::SparseMatrix<double> Ms = chfem::mass_sigma(sp, 6);
    const Eigen::VectorXd id_coef = testutil::interpolate_tensor(
        sp, [](const Eigen::Vector2d&) { return Eigen::Matrix2d::Identity(); });
    const Eigen::VectorXd load = chfem::load_isotropic(
        sp, [](int, double, double, double) { return 1.0; }, 6);
    CHECK((load - Ms * id_coef).norm() <= 1e-12 * load.norm());
}

TEST_CASE("saddle matrices are symmetric with the documented block layout") {
    const TriMesh m = chfem::square_level(1);
    const SigmaSpace sp(m);
    const VSpace vs(m);
    const chfem::SigmaConstraints con(sp);
    const auto Ms = chfem::mass_sigma(sp, 6);
    const auto Mu = chfem::mass_v(vs);
    const auto B = chfem::divdiv_coupling(sp, vs);
    const Eigen::VectorXd j = chfem::mean_vector(vs);

    const double tau = 0.125;
    const Eigen::MatrixXd S = Eigen::MatrixXd(chfem::step_matrix(Ms, B, Mu, con.matrix(), tau));
    const int ns = sp.ndof(), nu = vs.ndof(), nc = con.rows();
    REQUIRE(S.rows() == ns + nu + nc);
    CHECK((S - S.transpose()).norm() <= 1e-12 * S.norm());
    CHECK((S.topLeftCorner(ns, ns) - Eigen::MatrixXd(Ms)).norm() <= 1e-14 * S.norm());
    CHECK((S.block(ns, 0, nu, ns) + Eigen::MatrixXd(B)).norm() <= 1e-14 * S.norm());
    CHECK((S.block(ns, ns, nu, nu) + Eigen::MatrixXd(Mu) / tau).norm() <= 1e-12 * S.norm());
    CHECK(S.bottomRightCorner(nc, nc).norm() == 0.0);

    const Eigen::MatrixXd St = Eigen::MatrixXd(chfem::stationary_matrix(Ms, B, con.matrix(), j));
    REQUIRE(St.rows() == ns + nu + nc + 1);
    CHECK((St - St.transpose()).norm() <= 1e-12 * St.norm());
    CHECK((St.block(ns, ns + nu + nc, nu, 1) + j).norm() == 0.0);
    CHECK(St.block(ns, ns, nu, nu).norm() == 0.0);

    const Eigen::MatrixXd A = Eigen::MatrixXd(chfem::pencil_stiffness(Ms, B, con.matrix()));
    const Eigen::MatrixXd Mw = Eigen::MatrixXd(chfem::pencil_mass(Mu, ns, nc));
    REQUIRE(A.rows() == ns + nu + nc);
    REQUIRE(Mw.rows() == ns + nu + nc);
    CHECK((A - A.transpose()).norm() <= 1e-12 * A.norm());
    CHECK(A.block(ns, ns, nu, nu).norm() == 0.0);
    CHECK((Mw.block(ns, ns, nu, nu) + Eigen::MatrixXd(Mu)).norm() <= 1e-14 * Mw.norm());
    CHECK(Mw.topLeftCorner(ns, ns).norm() == 0.0);
    CHECK(Mw.bottomRightCorner(nc, nc).norm() == 0.0);
}
