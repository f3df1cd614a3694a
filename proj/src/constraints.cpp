#include "chfem/constraints.hpp"

#include "chfem/quadrature.hpp"

#include <cmath>

namespace chfem {

namespace {

constexpr int kEdgeQuadDegree = 9;

// Legendre polynomial on [-1,1]
double legendre(int n, double x) {
    switch (n) {
        case 0: return 1.0;
        case 1: return x;
        case 2: return 0.5 * (3.0 * x * x - 1.0);
        case 3: return 0.5 * x * (5.0 * x * x - 3.0);
        default: {
            double pm = 0.5 * (3.0 * x * x - 1.0), pmm = x;
            for (int k = 3; k <= n; ++k) {
                const double p = ((2 * k - 1) * x * pm - (k - 1) * pmm) / k;
                pmm = pm;
                pm = p;
            }
            return pm;
        }
    }
}

// L2(e)-orthonormal Legendre basis at edge parameter s in (0,1)
double ortho_legendre(int n, double s, double h) {
    return std::sqrt((2.0 * n + 1.0) / h) * legendre(n, 2.0 * s - 1.0);
}

}  // namespace

SigmaConstraints::SigmaConstraints(const SigmaSpace& space) : space_(&space) {
    const TriMesh& mesh = space.mesh();
    const auto& rule = segment_rule(kEdgeQuadDegree);
    std::vector<Eigen::Triplet<double>> trip;

    // count rows: 3 per interior edge, 2+3 per boundary edge, plus the corner
    // rows appended per boundary vertex below
    int nrows = 0;
    for (int e = 0; e < mesh.num_edges(); ++e) nrows += mesh.is_boundary_edge(e) ? 5 : 3;
    rows_.reserve(static_cast<size_t>(nrows) + 2 * static_cast<size_t>(mesh.num_vertices()));

    int row = 0;
    for (int e = 0; e < mesh.num_edges(); ++e) {
        const double h = mesh.edge_length(e);
        const Eigen::Vector2d ne = mesh.edge_normal(e);
        const bool bdry = mesh.is_boundary_edge(e);
        const double div_scale = std::sqrt(h);

        if (bdry) {
            // tangential trace at the interior edge nodes: at a Lagrange node
            // only that node's components contribute, and of the three only
            // the shared tn component has t'Tn != 0 (its value is exactly 1
            // for the unit frame), so each row is a single shared dof
            for (int pos = 0; pos < 2; ++pos) {
                const int g = 3 * mesh.num_vertices() + 4 * e + (pos == 0 ? 1 : 3);
                trip.emplace_back(row, g, 1.0);
                rows_.push_back({e, pos, true});
                ++row;
            }
        }

        // normal-divergence moments: [Div tau . n] (interior) or Div tau . n
        // (boundary) against q_0..q_2
        for (int c = 0; c < 3; ++c) {
            for (int side = 0; side < 2; ++side) {
                const int t = mesh.edge_tri[static_cast<size_t>(e)][static_cast<size_t>(side)];
                if (t < 0) continue;
                const double jump_sign = (side == 0) ? 1.0 : -1.0;
                int k = 0;
                while (mesh.tri_edge[static_cast<size_t>(t)][static_cast<size_t>(k)] != e) ++k;
                const int a_lo = mesh.local_vertex(t, mesh.edge_v[static_cast<size_t>(e)][0]);
                const auto& tab = SigmaSpace::p3_edge_at(k, a_lo, rule);
                const auto g = mesh.grad_lambda(t);
                for (const auto& d : space.dofs(t)) {
                    const Eigen::Vector2d Tn = d.T * ne;  // (Div tau).n = (T gradL).n = gradL.(T n)
                    double m = 0.0;
                    for (int q = 0; q < tab.npts; ++q) {
                        const auto& dl = tab.grad(d.node, q);
                        const Eigen::Vector2d gradL =
                            dl[0] * g[0] + dl[1] * g[1] + dl[2] * g[2];
                        m += rule[static_cast<size_t>(q)].w * h * gradL.dot(Tn) *
                             ortho_legendre(c, rule[static_cast<size_t>(q)].t, h);
                    }
                    if (m != 0.0) trip.emplace_back(row, d.gdof, jump_sign * div_scale * m);
                }
            }
            rows_.push_back({e, c, false});
            ++row;
        }
    }

    // tangential trace at the edge endpoints: the endpoint value of t' tau n
    // is a combination of the three shared vertex components, so two boundary
    // edges meeting at a vertex may impose the same condition (for symmetric
    // tensors the functionals of edges meeting at a right angle, or
    // collinearly, coincide up to sign).  Conditions are therefore collected
    // per boundary vertex and a greedy orthogonalisation keeps only the
    // independent ones, giving the matrix full row rank.
    std::vector<std::vector<int>> vert_bedges(static_cast<size_t>(mesh.num_vertices()));
    for (int e = 0; e < mesh.num_edges(); ++e)
        if (mesh.is_boundary_edge(e))
            for (int end = 0; end < 2; ++end)
                vert_bedges[static_cast<size_t>(mesh.edge_v[static_cast<size_t>(e)][static_cast<size_t>(end)])]
                    .push_back(e);
    for (int v = 0; v < mesh.num_vertices(); ++v) {
        std::vector<Eigen::Vector3d> kept;
        for (const int e : vert_bedges[static_cast<size_t>(v)]) {
            const Eigen::Vector2d te = mesh.edge_tangent(e);
            const Eigen::Vector2d ne = mesh.edge_normal(e);
            // t' T n for the vertex components T = e11, e12 + e21, e22
            const Eigen::Vector3d a(te.x() * ne.x(), te.x() * ne.y() + te.y() * ne.x(),
                                    te.y() * ne.y());
            Eigen::Vector3d r = a;
            for (const auto& q : kept) r -= q.dot(a) * q;
            if (r.norm() <= 1e-12 * a.norm()) continue;  // implied by an earlier edge
            kept.push_back(r.normalized());
            for (int c = 0; c < 3; ++c)
                if (a[c] != 0.0) trip.emplace_back(row, 3 * v + c, a[c]);
            rows_.push_back({e, mesh.edge_v[static_cast<size_t>(e)][0] == v ? 2 : 3, true});
            ++row;
        }
    }

    C_.resize(row, space.ndof());
    C_.setFromTriplets(trip.begin(), trip.end());
    C_.makeCompressed();
}

Eigen::VectorXd SigmaConstraints::boundary_moments(
    const std::function<double(const Eigen::Vector2d&, const Eigen::Vector2d&,
                               const Eigen::Vector2d&)>& tn_data,
    const std::function<double(const Eigen::Vector2d&, const Eigen::Vector2d&)>& dn_data) const {
    const TriMesh& mesh = space_->mesh();
    const auto& rule = segment_rule(kEdgeQuadDegree);
    Eigen::VectorXd d = Eigen::VectorXd::Zero(rows());
    for (int r = 0; r < rows(); ++r) {
        const auto& info = rows_[static_cast<size_t>(r)];
        if (!mesh.is_boundary_edge(info.edge)) continue;  // interior jump data is zero
        const Eigen::Vector2d te = mesh.edge_tangent(info.edge);
        const Eigen::Vector2d ne = mesh.edge_normal(info.edge);
        if (info.tangential) {
            // point value of t' sigma n at the row's evaluation point.  The
            // endpoint rows take the limiting trace along the edge, realised
            // by evaluating a whisker inside it: prescribed fields may be
            // singular at a corner point while their tangential trace stays
            // smooth (identically zero on a free slit) along the edge itself.
            static constexpr double kEps = 1e-9;
            static constexpr double kS[4] = {1.0 / 3.0, 2.0 / 3.0, kEps, 1.0 - kEps};
            d[r] = tn_data(mesh.edge_point(info.edge, kS[info.moment]), te, ne);
        } else {
            const double h = mesh.edge_length(info.edge);
            double m = 0.0;
            for (const auto& q : rule) {
                const Eigen::Vector2d x = mesh.edge_point(info.edge, q.t);
                m += q.w * h * dn_data(x, ne) * ortho_legendre(info.moment, q.t, h);
            }
            d[r] = std::sqrt(h) * m;
        }
    }
    return d;
}

int SigmaConstraints::dense_rank(double rel_tol) const {
    Eigen::MatrixXd D(C_);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(D);
    qr.setThreshold(rel_tol);
    return static_cast<int>(qr.rank());
}

}  // namespace chfem
