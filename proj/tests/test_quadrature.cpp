#include "doctest.h"

#include "chfem/quadrature.hpp"

#include <cmath>

namespace {

// exact integral of x^a y^b over the reference triangle (0,0)-(1,0)-(0,1)
double tri_monomial_integral(int a, int b) {
    // a! b! / (a+b+2)!
    double v = 1.0;
    for (int k = 1; k <= a; ++k) v *= k;
    for (int k = 1; k <= b; ++k) v *= k;
    for (int k = 1; k <= a + b + 2; ++k) v /= k;
    return v;
}

}  // namespace

TEST_CASE("triangle rules integrate monomials exactly up to their degree") {
    for (int degree : {1, 2, 3, 4, 5, 6, 8, 10, 12, 14, 18}) {
        const auto& rule = chfem::triangle_rule(degree);
        double wsum = 0.0;
        for (const auto& q : rule) {
            wsum += q.w;
            CHECK(q.w > 0.0);
            CHECK(q.x > 0.0);
            CHECK(q.y > 0.0);
            CHECK(q.x + q.y < 1.0);
        }
        CHECK(wsum == doctest::Approx(0.5).epsilon(1e-14));
        for (int a = 0; a + 0 <= degree; ++a) {
            for (int b = 0; a + b <= degree; ++b) {
                double got = 0.0;
                for (const auto& q : rule) got += q.w * std::pow(q.x, a) * std::pow(q.y, b);
                const double want = tri_monomial_integral(a, b);
                CHECK(std::abs(got - want) <= 1e-13 * std::max(1.0, std::abs(want)));
            }
        }
    }
}

TEST_CASE("segment rules integrate monomials exactly up to their degree") {
    for (int degree : {1, 2, 3, 4, 5, 6, 8, 9, 12}) {
        const auto& rule = chfem::segment_rule(degree);
        double wsum = 0.0;
        for (const auto& q : rule) {
            wsum += q.w;
            CHECK(q.t > 0.0);
            CHECK(q.t < 1.0);
            CHECK(q.w > 0.0);
        }
        CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
        for (int k = 0; k <= degree; ++k) {
            double got = 0.0;
            for (const auto& q : rule) got += q.w * std::pow(q.t, k);
            CHECK(got == doctest::Approx(1.0 / (k + 1)).epsilon(1e-13));
        }
    }
}

TEST_CASE("rules are cached") {
    const auto* a = &chfem::triangle_rule(6);
    const auto* b = &chfem::triangle_rule(6);
    CHECK(a == b);
    const auto* c = &chfem::segment_rule(8);
    const auto* d = &chfem::segment_rule(8);
    CHECK(c == d);
}
