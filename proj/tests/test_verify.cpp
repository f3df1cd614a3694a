#include "doctest.h"

#include "chfem/audit.hpp"
#include "chfem/infsup.hpp"
#include "chfem/seminorm.hpp"
#include "chfem/vspace.hpp"

#include <cmath>
#include <random>

using chfem::TriMesh;
using chfem::VSpace;

TEST_CASE("broken seminorm: hand-computed values on the two-triangle square") {
    const TriMesh m = chfem::square_level(1);
    const VSpace vs(m);

    // indicator of one triangle: only the value jump over the diagonal
    // contributes, |v|^2 = h^{-3} * ||1||^2_{L2(e)} = (sqrt 2)^{-3} * sqrt 2 = 1/2
    Eigen::VectorXd ind = Eigen::VectorXd::Zero(vs.ndof());
    ind[0] = ind[1] = ind[2] = 1.0;
    CHECK(chfem::seminorm(vs, ind) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));

    // v = x is continuous with continuous gradient; only the boundary traces
    // of the normal derivative on the two vertical sides contribute, each
    // h^{-1} ||1||^2 = 1, so |v| = sqrt 2
    const Eigen::VectorXd vx =
        vs.interpolate_nodal([](const Eigen::Vector2d& p) { return p[0]; });
    CHECK(chfem::seminorm(vs, vx) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

    // global constants are exactly the kernel
    const Eigen::VectorXd c = Eigen::VectorXd::Constant(vs.ndof(), 3.7);
    CHECK(chfem::seminorm(vs, c) <= 1e-6);
}

TEST_CASE("seminorm Gram matrix is symmetric positive semidefinite, kernel dim 1") {
    const TriMesh m = chfem::square_level(2);
    const VSpace vs(m);
    const Eigen::MatrixXd G = Eigen::MatrixXd(chfem::seminorm_gram(vs));
    CHECK((G - G.transpose()).norm() <= 1e-12 * G.norm());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    const Eigen::VectorXd ev = es.eigenvalues();
    CHECK(ev.minCoeff() >= -1e-10 * ev.maxCoeff());
    int near_zero = 0;
    for (int i = 0; i < ev.size(); ++i)
        if (ev[i] <= 1e-10 * ev.maxCoeff()) ++near_zero;
    CHECK(near_zero == 1);
}

TEST_CASE("discrete stability constant is positive on coarse meshes") {
    const double b1 = chfem::infsup_constant(chfem::square_level(1));
    const double b2 = chfem::infsup_constant(chfem::square_level(2));
    CHECK(b1 > 1e-4);
    CHECK(b1 < 10.0);
    CHECK(b2 > 1e-4);
    CHECK(b2 < 10.0);
    // no collapse between consecutive levels
    CHECK(std::abs(b2 - b1) / std::max(b1, b2) < 0.5);
}

TEST_CASE("randomized conformity audit: admissible fields conform, controls do not") {
    for (const TriMesh& m : {chfem::square_level(2), chfem::lshape_level(1)}) {
        const chfem::AuditReport rep = chfem::conformity_audit(m, 8, 20240811u);
        CHECK(rep.fields == 8);
        CHECK(rep.constraint_rank == rep.constraint_rows);
        CHECK(rep.max_admissible_jump <= 1e-10);
        CHECK(rep.min_control_jump >= 1e-3);
    }
}
