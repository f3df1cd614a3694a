#include "doctest.h"

#include "chfem/manufactured.hpp"

#include <cmath>
#include <vector>

using chfem::CHCase;
using chfem::ExactSolution;
using Eigen::Matrix2d;
using Eigen::Vector2d;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// central finite differences of a scalar callable
template <class F>
double fd_dx(const F& f, const Vector2d& x, double h = 1e-5) {
    return (f(Vector2d(x[0] + h, x[1])) - f(Vector2d(x[0] - h, x[1]))) / (2.0 * h);
}
template <class F>
double fd_dy(const F& f, const Vector2d& x, double h = 1e-5) {
    return (f(Vector2d(x[0], x[1] + h)) - f(Vector2d(x[0], x[1] - h))) / (2.0 * h);
}

void check_derivative_chain(const std::shared_ptr<const ExactSolution>& ex,
                            const std::vector<Vector2d>& pts, double t) {
    for (const Vector2d& x : pts) {
        const auto u = [&](const Vector2d& p) { return ex->u(p, t); };
        const Vector2d g = ex->grad_u(x, t);
        CHECK(std::abs(fd_dx(u, x) - g[0]) <= 1e-5 * std::max(1.0, std::abs(g[0])));
        CHECK(std::abs(fd_dy(u, x) - g[1]) <= 1e-5 * std::max(1.0, std::abs(g[1])));

        const auto ux = [&](const Vector2d& p) { return ex->grad_u(p, t)[0]; };
        const auto uy = [&](const Vector2d& p) { return ex->grad_u(p, t)[1]; };
        const Matrix2d H = ex->hess_u(x, t);
        CHECK((H - H.transpose()).norm() <= 1e-13 * std::max(1.0, H.norm()));
        CHECK(std::abs(fd_dx(ux, x) - H(0, 0)) <= 1e-5 * std::max(1.0, std::abs(H(0, 0))));
        CHECK(std::abs(fd_dy(ux, x) - H(0, 1)) <= 1e-5 * std::max(1.0, std::abs(H(0, 1))));
        CHECK(std::abs(fd_dy(uy, x) - H(1, 1)) <= 1e-5 * std::max(1.0, std::abs(H(1, 1))));
        CHECK(std::abs(H.trace() - ex->lap_u(x, t)) <= 1e-12 * std::max(1.0, H.norm()));

        const auto lap = [&](const Vector2d& p) { return ex->lap_u(p, t); };
        const Vector2d gl = ex->grad_lap_u(x, t);
        CHECK(std::abs(fd_dx(lap, x) - gl[0]) <= 1e-5 * std::max(1.0, std::abs(gl[0])));
        CHECK(std::abs(fd_dy(lap, x) - gl[1]) <= 1e-5 * std::max(1.0, std::abs(gl[1])));

        const auto glx = [&](const Vector2d& p) { return ex->grad_lap_u(p, t)[0]; };
        const auto gly = [&](const Vector2d& p) { return ex->grad_lap_u(p, t)[1]; };
        const double bl = ex->bilap_u(x, t);
        CHECK(std::abs(fd_dx(glx, x) + fd_dy(gly, x) - bl) <= 1e-4 * std::max(1.0, std::abs(bl)));

        const double ht = 1e-6;
        const double dudt_fd = (ex->u(x, t + ht) - ex->u(x, t - ht)) / (2.0 * ht);
        CHECK(std::abs(dudt_fd - ex->dudt(x, t)) <= 1e-6 * std::max(1.0, std::abs(dudt_fd)));
    }
}

}  // namespace

TEST_CASE("trigonometric solution: derivative chain against finite differences") {
    const auto ex = chfem::exact_square_trig();
    check_derivative_chain(ex, {{0.31, 0.47}, {0.72, 0.15}, {0.5, 0.88}, {0.11, 0.93}}, 0.37);

    // closed-form cross check: lap u = -2 pi^2 u, bilap u = 4 pi^4 u
    const Vector2d x(0.42, 0.66);
    const double u = ex->u(x, 0.2);
    CHECK(ex->lap_u(x, 0.2) == doctest::Approx(-2.0 * kPi * kPi * u).epsilon(1e-12));
    CHECK(ex->bilap_u(x, 0.2) == doctest::Approx(4.0 * std::pow(kPi, 4) * u).epsilon(1e-12));
    CHECK(ex->dudt(x, 0.2) == doctest::Approx(-u).epsilon(1e-12));
}

TEST_CASE("corner-singular solution: derivative chain, closed forms, branch continuity") {
    const auto ex = chfem::exact_lshape_singular();
    check_derivative_chain(
        ex, {{-0.51, 0.43}, {-0.62, -0.57}, {0.35, 0.72}, {-0.91, 0.08}, {0.05, 0.95}}, 0.25);

    // lap u = (4/3) e^{-t} r^{-2/3} cos(2 theta / 3); bilap u = 0
    for (const Vector2d& x : std::vector<Vector2d>{{0.4, 0.3}, {-0.5, -0.6}, {-0.7, 0.2}}) {
        const double t = 0.6;
        const double r = x.norm();
        double theta = std::atan2(x[1], x[0]);
        if (theta < 0.0) theta += 2.0 * kPi;
        const double want =
            4.0 / 3.0 * std::exp(-t) * std::pow(r, -2.0 / 3.0) * std::cos(2.0 * theta / 3.0);
        CHECK(ex->lap_u(x, t) == doctest::Approx(want).epsilon(1e-12));
        CHECK(std::abs(ex->bilap_u(x, t)) <= 1e-12);
    }

    // continuity along an arc crossing the negative x-axis (the angular branch
    // cut sits on the excluded quadrant, not inside the domain)
    double prev = ex->u(Vector2d(0.5 * std::cos(0.05), 0.5 * std::sin(0.05)), 0.0);
    for (int k = 1; k <= 200; ++k) {
        const double th = 0.05 + (1.5 * kPi - 0.1) * k / 200.0;
        const double cur = ex->u(Vector2d(0.5 * std::cos(th), 0.5 * std::sin(th)), 0.0);
        CHECK(std::abs(cur - prev) < 0.02);
        prev = cur;
    }
}

TEST_CASE("polar-term calculus: derivatives against finite differences") {
    const chfem::PolarSum base = chfem::PolarSum::cosine(2.5, 4.0 / 3.0, 2.0 / 3.0) +
                                 chfem::PolarSum::sine(-0.75, 7.0 / 3.0, 5.0 / 3.0);
    const chfem::PolarSum bx = base.dx();
    const chfem::PolarSum by = base.dy();
    const chfem::PolarSum bxy = bx.dy();
    const chfem::PolarSum byx = by.dx();
    for (const Vector2d& x : std::vector<Vector2d>{{0.4, 0.3}, {-0.5, 0.35}, {-0.3, -0.45}}) {
        const auto f = [&](const Vector2d& p) { return base.eval(p[0], p[1]); };
        CHECK(std::abs(fd_dx(f, x) - bx.eval(x[0], x[1])) <= 1e-6);
        CHECK(std::abs(fd_dy(f, x) - by.eval(x[0], x[1])) <= 1e-6);
        // mixed partials commute
        CHECK(bxy.eval(x[0], x[1]) == doctest::Approx(byx.eval(x[0], x[1])).epsilon(1e-11));
    }
}

TEST_CASE("flux and forcing of the evolution case against finite differences") {
    const CHCase cas = chfem::case_square_trig(1.0);
    const double t = 0.15;
    for (const Vector2d& x : std::vector<Vector2d>{{0.33, 0.58}, {0.81, 0.27}}) {
        // sigma = hess u - eps^{-2} f(u) I
        const Matrix2d S = cas.sigma(x, t);
        const Matrix2d want =
            cas.exact->hess_u(x, t) -
            cas.eps_inv2() * cas.f(cas.exact->u(x, t)) * Matrix2d::Identity();
        CHECK((S - want).norm() <= 1e-13 * std::max(1.0, want.norm()));

        // Div sigma against finite differences of sigma
        const auto s11 = [&](const Vector2d& p) { return cas.sigma(p, t)(0, 0); };
        const auto s12 = [&](const Vector2d& p) { return cas.sigma(p, t)(0, 1); };
        const auto s22 = [&](const Vector2d& p) { return cas.sigma(p, t)(1, 1); };
        const Vector2d ds = cas.div_sigma(x, t);
        CHECK(std::abs(fd_dx(s11, x) + fd_dy(s12, x) - ds[0]) <=
              1e-4 * std::max(1.0, std::abs(ds[0])));
        CHECK(std::abs(fd_dx(s12, x) + fd_dy(s22, x) - ds[1]) <=
              1e-4 * std::max(1.0, std::abs(ds[1])));

        // divDiv sigma against finite differences of Div sigma
        const auto d1 = [&](const Vector2d& p) { return cas.div_sigma(p, t)[0]; };
        const auto d2 = [&](const Vector2d& p) { return cas.div_sigma(p, t)[1]; };
        const double dd = cas.divdiv_sigma(x, t);
        CHECK(std::abs(fd_dx(d1, x, 1e-4) + fd_dy(d2, x, 1e-4) - dd) <=
              1e-4 * std::max(1.0, std::abs(dd)));

        // forcing = time derivative + divDiv of the flux
        CHECK(cas.source(x, t) ==
              doctest::Approx(cas.exact->dudt(x, t) + dd).epsilon(1e-11));

        // traces agree with the tensor in an arbitrary frame
        const Vector2d te = Vector2d(0.6, 0.8);
        const Vector2d ne = Vector2d(0.8, -0.6);
        CHECK(cas.tn_trace(x, te, ne, t) ==
              doctest::Approx(te.dot(S * ne)).epsilon(1e-12));
        CHECK(cas.dn_trace(x, ne, t) == doctest::Approx(ds.dot(ne)).epsilon(1e-12));
        CHECK(cas.normal_deriv(x, ne, t) ==
              doctest::Approx(cas.exact->grad_u(x, t).dot(ne)).epsilon(1e-12));
    }
}

TEST_CASE("all boundary data vanish on the two edges meeting the reentrant corner") {
    const CHCase cas = chfem::case_lshape_singular(1.0);
    const double t = 0.4;
    // edge along theta = 0: points (x, 0), outward normal (0, -1) w.r.t. the domain
    for (double x : {0.1, 0.37, 0.82}) {
        const Vector2d p(x, 0.0);
        const Vector2d te(1.0, 0.0), ne(0.0, -1.0);
        CHECK(std::abs(cas.normal_deriv(p, ne, t)) <= 1e-12);
        CHECK(std::abs(cas.tn_trace(p, te, ne, t)) <= 1e-12);
        CHECK(std::abs(cas.dn_trace(p, ne, t)) <= 1e-12);
    }
    // edge along theta = 3 pi / 2: points (0, y), y < 0, outward normal (1, 0)
    for (double y : {-0.12, -0.5, -0.9}) {
        const Vector2d p(0.0, y);
        const Vector2d te(0.0, 1.0), ne(1.0, 0.0);
        CHECK(std::abs(cas.normal_deriv(p, ne, t)) <= 1e-11);
        CHECK(std::abs(cas.tn_trace(p, te, ne, t)) <= 1e-11);
        CHECK(std::abs(cas.dn_trace(p, ne, t)) <= 1e-11);
    }
}

TEST_CASE("constant states are exact steady solutions with zero data") {
    for (double c : {0.0, 1.0, -1.0}) {
        const CHCase cas = chfem::case_constant(c, 1.0);
        const Vector2d x(0.3, 0.7);
        CHECK(cas.exact->u(x, 0.8) == doctest::Approx(c));
        CHECK(cas.sigma(x, 0.5).norm() <= 1e-14);
        CHECK(std::abs(cas.source(x, 0.5)) <= 1e-14);
        CHECK(std::abs(cas.normal_deriv(x, Vector2d(0, 1), 0.5)) <= 1e-14);
        CHECK(std::abs(cas.tn_trace(x, Vector2d(1, 0), Vector2d(0, 1), 0.5)) <= 1e-14);
        CHECK(std::abs(cas.dn_trace(x, Vector2d(0, 1), 0.5)) <= 1e-14);
    }
}

TEST_CASE("two-drop initial state: values at the centres and far away") {
    const CHCase cas = chfem::case_two_drops(0.01);
    CHECK(cas.exact == nullptr);
    REQUIRE(static_cast<bool>(cas.u0));
    CHECK(cas.u0(Vector2d(0.3, 0.5)) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(cas.u0(Vector2d(0.7, 0.5)) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(cas.u0(Vector2d(0.02, 0.02)) == doctest::Approx(-1.0).epsilon(1e-3));
    CHECK(cas.u0(Vector2d(0.98, 0.98)) == doctest::Approx(-1.0).epsilon(1e-3));
    // mirror symmetry across x = 1/2
    CHECK(cas.u0(Vector2d(0.22, 0.61)) ==
          doctest::Approx(cas.u0(Vector2d(0.78, 0.61))).epsilon(1e-12));
}
