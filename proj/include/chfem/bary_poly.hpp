// ============================================================================
// bary_poly.hpp — polynomials in barycentric coordinates (lam0, lam1, lam2).
//
// Exact symbolic representation used to generate shape-function tables:
// coefficients over monomials lam0^a lam1^b lam2^c.  Differentiation with
// respect to a single barycentric coordinate is exact; Cartesian derivatives
// are obtained by contracting with the (element-constant) gradients of the
// barycentric coordinates.
// ============================================================================
#pragma once

#include <array>
#include <map>
#include <vector>

namespace chfem {

class BaryPoly {
public:
    BaryPoly() = default;

    static BaryPoly lam(int i);                       // the coordinate lam_i
    static BaryPoly monomial(int a, int b, int c);    // lam0^a lam1^b lam2^c
    static BaryPoly constant(double v);

    BaryPoly operator*(const BaryPoly& o) const;
    BaryPoly operator+(const BaryPoly& o) const;
    BaryPoly operator-(const BaryPoly& o) const;
    BaryPoly operator*(double s) const;
    BaryPoly& operator+=(const BaryPoly& o);

    // Derivative with respect to lam_i (formal; coordinates treated as
    // independent, which is valid when contracted with grad lam_i afterwards).
    BaryPoly dlam(int i) const;

    double eval(double l0, double l1, double l2) const;

    bool empty() const { return terms_.empty(); }

private:
    // exponent triple -> coefficient
    std::map<std::array<int, 3>, double> terms_;
};

// --- P3 Lagrange basis on the triangle --------------------------------------
//
// Node order (barycentric numerators over 3):
//   0:(3,0,0) 1:(0,3,0) 2:(0,0,3)            vertices
//   3:(0,2,1) 4:(0,1,2)                      edge 0 = (v1,v2), towards v1/v2
//   5:(2,0,1) 6:(1,0,2)                      edge 1 = (v0,v2), towards v0/v2
//   7:(2,1,0) 8:(1,2,0)                      edge 2 = (v0,v1), towards v0/v1
//   9:(1,1,1)                                interior
//
// Edge k is the edge opposite vertex k.  "towards a" means the node whose
// barycentric weight on vertex a is 2/3.
struct P3Basis {
    std::array<BaryPoly, 10> fun;
    std::array<std::array<int, 3>, 10> node;  // numerators
    // Lagrange node on edge k with weight 2/3 at local vertex a (a on edge k).
    int edge_node(int k, int a) const;
};
const P3Basis& p3_basis();

// Homogeneous barycentric monomial basis of P_deg (all |a|=deg), in
// lexicographic order of (a0,a1,a2) descending on a0 then a1.
std::vector<BaryPoly> monomial_basis(int deg);
std::vector<std::array<int, 3>> monomial_exponents(int deg);

// --- tabulation --------------------------------------------------------------
struct BaryPoint {
    double l0, l1, l2;
};

// Values and barycentric derivatives of a scalar basis at given points.
struct ScalarTab {
    int nfun = 0, npts = 0;
    std::vector<double> val;                    // [f*npts + q]
    std::vector<std::array<double, 3>> d1;      // [f*npts + q][i]     d/dlam_i
    std::vector<std::array<double, 6>> d2;      // [f*npts + q][sym i<=j: 00,01,02,11,12,22]
    double value(int f, int q) const { return val[static_cast<size_t>(f) * npts + q]; }
    const std::array<double, 3>& grad(int f, int q) const {
        return d1[static_cast<size_t>(f) * npts + q];
    }
    const std::array<double, 6>& hess(int f, int q) const {
        return d2[static_cast<size_t>(f) * npts + q];
    }
};

ScalarTab tabulate(const std::vector<BaryPoly>& basis, const std::vector<BaryPoint>& pts);

}  // namespace chfem
