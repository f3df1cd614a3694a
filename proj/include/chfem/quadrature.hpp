// ============================================================================
// quadrature.hpp — Gauss rules on triangles and segments.
//
// Triangle rules are collapsed tensor products (Duffy transform): an n-point
// Gauss–Legendre rule in the first coordinate times an n-point
// Gauss–Jacobi(1,0) rule in the second.  All points are strictly interior,
// all weights positive, and the rule integrates polynomials of total degree
// <= 2n-1 exactly on the reference triangle (0,0)-(1,0)-(0,1).
// ============================================================================
#pragma once

#include <vector>

namespace chfem {

struct QPoint {
    double x, y;  // reference-triangle coordinates
    double w;     // weight; sum of weights = 1/2 (reference area)
};

// Rule exact for total degree >= `degree` on the reference triangle.
// Points are strictly inside the open triangle.
const std::vector<QPoint>& triangle_rule(int degree);

struct QPoint1D {
    double t;  // in (0,1)
    double w;  // weights sum to 1
};

// Gauss–Legendre rule on (0,1), exact for polynomial degree >= `degree`.
const std::vector<QPoint1D>& segment_rule(int degree);

}  // namespace chfem
