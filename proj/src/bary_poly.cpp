#include "chfem/bary_poly.hpp"

#include <cmath>
#include <stdexcept>

namespace chfem {

BaryPoly BaryPoly::lam(int i) {
    BaryPoly p;
    std::array<int, 3> e{0, 0, 0};
    e[static_cast<size_t>(i)] = 1;
    p.terms_[e] = 1.0;
    return p;
}

BaryPoly BaryPoly::monomial(int a, int b, int c) {
    BaryPoly p;
    p.terms_[{a, b, c}] = 1.0;
    return p;
}

BaryPoly BaryPoly::constant(double v) {
    BaryPoly p;
    if (v != 0.0) p.terms_[{0, 0, 0}] = v;
    return p;
}

BaryPoly BaryPoly::operator*(const BaryPoly& o) const {
    BaryPoly r;
    for (const auto& [ea, ca] : terms_)
        for (const auto& [eb, cb] : o.terms_) {
            std::array<int, 3> e{ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]};
            r.terms_[e] += ca * cb;
        }
    return r;
}

BaryPoly BaryPoly::operator+(const BaryPoly& o) const {
    BaryPoly r = *this;
    r += o;
    return r;
}

BaryPoly BaryPoly::operator-(const BaryPoly& o) const {
    BaryPoly r = *this;
    for (const auto& [e, c] : o.terms_) r.terms_[e] -= c;
    return r;
}

BaryPoly BaryPoly::operator*(double s) const {
    BaryPoly r;
    for (const auto& [e, c] : terms_) r.terms_[e] = c * s;
    return r;
}

BaryPoly& BaryPoly::operator+=(const BaryPoly& o) {
    for (const auto& [e, c] : o.terms_) terms_[e] += c;
    return *this;
}

BaryPoly BaryPoly::dlam(int i) const {
    BaryPoly r;
    for (const auto& [e, c] : terms_) {
        int p = e[static_cast<size_t>(i)];
        if (p == 0) continue;
        std::array<int, 3> f = e;
        f[static_cast<size_t>(i)] = p - 1;
        r.terms_[f] += c * p;
    }
    return r;
}

double BaryPoly::eval(double l0, double l1, double l2) const {
    double s = 0.0;
    for (const auto& [e, c] : terms_)
        s += c * std::pow(l0, e[0]) * std::pow(l1, e[1]) * std::pow(l2, e[2]);
    return s;
}

// ---------------------------------------------------------------------------
// P3 Lagrange basis via the Silvester product formula: for numerators
// (a,b,c) with a+b+c = 3,
//   L_(a,b,c) = prod_{i<a} (3*lam0 - i)/(a-i) * (same for b, c).
// ---------------------------------------------------------------------------
namespace {

BaryPoly silvester_factor(int coord, int a) {
    BaryPoly f = BaryPoly::constant(1.0);
    for (int i = 0; i < a; ++i) {
        BaryPoly lin = BaryPoly::lam(coord) * 3.0 - BaryPoly::constant(static_cast<double>(i));
        f = f * (lin * (1.0 / static_cast<double>(a - i)));
    }
    return f;
}

P3Basis build_p3() {
    P3Basis b;
    b.node = {{{3, 0, 0},
               {0, 3, 0},
               {0, 0, 3},
               {0, 2, 1},
               {0, 1, 2},
               {2, 0, 1},
               {1, 0, 2},
               {2, 1, 0},
               {1, 2, 0},
               {1, 1, 1}}};
    for (int n = 0; n < 10; ++n) {
        const auto& e = b.node[static_cast<size_t>(n)];
        b.fun[static_cast<size_t>(n)] =
            silvester_factor(0, e[0]) * silvester_factor(1, e[1]) * silvester_factor(2, e[2]);
    }
    return b;
}

}  // namespace

int P3Basis::edge_node(int k, int a) const {
    // On edge k (opposite vertex k) the two non-vertex nodes have numerators
    // 2 and 1 on the edge's endpoints.  Find the node with numerator 2 at a.
    for (int n = 3; n < 9; ++n) {
        const auto& e = node[static_cast<size_t>(n)];
        if (e[static_cast<size_t>(k)] == 0 && e[static_cast<size_t>(a)] == 2) return n;
    }
    throw std::logic_error("edge_node: invalid (edge, vertex) pair");
}

const P3Basis& p3_basis() {
    static const P3Basis b = build_p3();
    return b;
}

std::vector<std::array<int, 3>> monomial_exponents(int deg) {
    std::vector<std::array<int, 3>> out;
    for (int a = deg; a >= 0; --a)
        for (int b = deg - a; b >= 0; --b) out.push_back({a, b, deg - a - b});
    return out;
}

std::vector<BaryPoly> monomial_basis(int deg) {
    std::vector<BaryPoly> out;
    for (const auto& e : monomial_exponents(deg))
        out.push_back(BaryPoly::monomial(e[0], e[1], e[2]));
    return out;
}

ScalarTab tabulate(const std::vector<BaryPoly>& basis, const std::vector<BaryPoint>& pts) {
    ScalarTab t;
    t.nfun = static_cast<int>(basis.size());
    t.npts = static_cast<int>(pts.size());
    const size_t n = static_cast<size_t>(t.nfun) * static_cast<size_t>(t.npts);
    t.val.resize(n);
    t.d1.resize(n);
    t.d2.resize(n);
    for (int f = 0; f < t.nfun; ++f) {
        const BaryPoly& p = basis[static_cast<size_t>(f)];
        std::array<BaryPoly, 3> dp{p.dlam(0), p.dlam(1), p.dlam(2)};
        // symmetric second derivatives, order 00,01,02,11,12,22
        std::array<BaryPoly, 6> ddp{dp[0].dlam(0), dp[0].dlam(1), dp[0].dlam(2),
                                    dp[1].dlam(1), dp[1].dlam(2), dp[2].dlam(2)};
        for (int q = 0; q < t.npts; ++q) {
            const auto& x = pts[static_cast<size_t>(q)];
            const size_t idx = static_cast<size_t>(f) * t.npts + q;
            t.val[idx] = p.eval(x.l0, x.l1, x.l2);
            for (int i = 0; i < 3; ++i) t.d1[idx][static_cast<size_t>(i)] = dp[static_cast<size_t>(i)].eval(x.l0, x.l1, x.l2);
            for (int i = 0; i < 6; ++i) t.d2[idx][static_cast<size_t>(i)] = ddp[static_cast<size_t>(i)].eval(x.l0, x.l1, x.l2);
        }
    }
    return t;
}

}  // namespace chfem
