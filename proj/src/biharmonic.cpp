#include "chfem/biharmonic.hpp"

#include "chfem/assembly.hpp"
#include "chfem/eigs.hpp"
#include "chfem/errors.hpp"
#include "chfem/quadrature.hpp"

#include <Eigen/SparseLU>
#include <Eigen/UmfPackSupport>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace chfem {

namespace {

// wrap a pure (potential-free) case around the exact solution at t = 0
CHCase pure_case(const std::shared_ptr<const ExactSolution>& exact) {
    CHCase c;
    c.exact = exact;
    c.nonlinear = false;
    c.u0 = [exact](const Eigen::Vector2d& x) { return exact->u(x, 0.0); };
    return c;
}

// Exact elimination of the element-private tensor dofs from the stationary
// saddle system
//     [ Ms  -B'  C'  0 ] [ s ]   [ r_s ]
//     [ -B   0   0  -j ] [ u ] = [ r_u ]
//     [ C    0   0   0 ] [ m ]   [ r_m ]
//     [ 0   -j'  0   0 ] [ a ]   [ r_a ].
// The nine private dofs per element never couple across elements through the
// mass matrix, so their block is element-diagonal and the elimination is
// local and exact.  The reduced matrix keeps the symmetric saddle structure
// while dropping nine unknowns per element together with most of the factor
// fill they would cause; the private values are recovered elementwise
// afterwards, so callers see the full solution vector.
class CondensedStationary {
public:
    CondensedStationary(const SigmaSpace& sig, const SpMat& Ms, const SpMat& B,
                        const SpMat& C, const Eigen::VectorXd& jvec)
        : ns_(static_cast<int>(Ms.rows())),
          nu_(static_cast<int>(B.rows())),
          nc_(static_cast<int>(C.rows())),
          nt_(sig.mesh().num_tris()),
          np_(ns_ - 9 * nt_) {
        const int np = np_;
        const int n = np + nu_ + nc_ + 1;

        std::vector<Eigen::Triplet<double>> trip;
        // couplings among the public unknowns, as in the unreduced matrix
        for (int j = 0; j < np; ++j)
            for (SpMat::InnerIterator it(Ms, j); it; ++it)
                if (it.row() < np)
                    trip.emplace_back(static_cast<int>(it.row()), j, it.value());
        for (int j = 0; j < np; ++j)
            for (SpMat::InnerIterator it(B, j); it; ++it) {
                trip.emplace_back(np + static_cast<int>(it.row()), j, -it.value());
                trip.emplace_back(j, np + static_cast<int>(it.row()), -it.value());
            }
        for (int j = 0; j < np; ++j)
            for (SpMat::InnerIterator it(C, j); it; ++it) {
                trip.emplace_back(np + nu_ + static_cast<int>(it.row()), j, it.value());
                trip.emplace_back(j, np + nu_ + static_cast<int>(it.row()), it.value());
            }
        for (int i = 0; i < nu_; ++i) {
            if (jvec[i] == 0.0) continue;
            trip.emplace_back(np + i, n - 1, -jvec[i]);
            trip.emplace_back(n - 1, np + i, -jvec[i]);
        }

        // elementwise Schur corrections from eliminating the private dofs
        loc_.resize(static_cast<size_t>(nt_));
        for (int t = 0; t < nt_; ++t) {
            Local& L = loc_[static_cast<size_t>(t)];
            int k = 0;
            for (const SigmaDof& d : sig.dofs(t))
                if (d.gdof < np) L.pcol[static_cast<size_t>(k++)] = d.gdof;

            Eigen::Matrix<double, 9, 9> Mbb = Eigen::Matrix<double, 9, 9>::Zero();
            L.Mbp.setZero();
            L.Bb.setZero();
            std::vector<int>& crow = L.crow;
            for (int jb = 0; jb < 9; ++jb) {
                const int col = np + 9 * t + jb;
                for (SpMat::InnerIterator it(Ms, col); it; ++it) {
                    const int i = static_cast<int>(it.row());
                    if (i < np) {
                        L.Mbp(jb, local_p(L, i)) = it.value();
                    } else {
                        Mbb(i - np - 9 * t, jb) = it.value();
                    }
                }
                for (SpMat::InnerIterator it(B, col); it; ++it)
                    L.Bb(static_cast<int>(it.row()) - 3 * t, jb) = it.value();
                for (SpMat::InnerIterator it(C, col); it; ++it) {
                    const int r = static_cast<int>(it.row());
                    bool found = false;
                    for (const int rr : crow)
                        if (rr == r) { found = true; break; }
                    if (!found) crow.push_back(r);
                }
            }
            const int nr = static_cast<int>(crow.size());
            L.Cb = Eigen::MatrixXd::Zero(nr, 9);
            for (int jb = 0; jb < 9; ++jb) {
                const int col = np + 9 * t + jb;
                for (SpMat::InnerIterator it(C, col); it; ++it)
                    L.Cb(local_c(L, static_cast<int>(it.row())), jb) = it.value();
            }
            L.Winv = Mbb.llt().solve(Eigen::Matrix<double, 9, 9>::Identity());

            const Eigen::Matrix<double, 9, 21> WM = L.Winv * L.Mbp;
            const Eigen::Matrix<double, 21, 21> Sc = L.Mbp.transpose() * WM;
            const Eigen::Matrix<double, 3, 21> BWM = L.Bb * WM;
            const Eigen::MatrixXd CWM = L.Cb * WM;
            const Eigen::Matrix<double, 3, 3> D = L.Bb * L.Winv * L.Bb.transpose();
            const Eigen::MatrixXd F = L.Bb * L.Winv * L.Cb.transpose();
            const Eigen::MatrixXd H = L.Cb * L.Winv * L.Cb.transpose();

            for (int i = 0; i < 21; ++i)
                for (int j = 0; j < 21; ++j)
                    trip.emplace_back(L.pcol[static_cast<size_t>(i)],
                                      L.pcol[static_cast<size_t>(j)], -Sc(i, j));
            for (int a = 0; a < 3; ++a)
                for (int j = 0; j < 21; ++j) {
                    trip.emplace_back(np + 3 * t + a, L.pcol[static_cast<size_t>(j)],
                                      BWM(a, j));
                    trip.emplace_back(L.pcol[static_cast<size_t>(j)], np + 3 * t + a,
                                      BWM(a, j));
                }
            for (int i = 0; i < nr; ++i)
                for (int j = 0; j < 21; ++j) {
                    trip.emplace_back(np + nu_ + crow[static_cast<size_t>(i)],
                                      L.pcol[static_cast<size_t>(j)], -CWM(i, j));
                    trip.emplace_back(L.pcol[static_cast<size_t>(j)],
                                      np + nu_ + crow[static_cast<size_t>(i)], -CWM(i, j));
                }
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b)
                    trip.emplace_back(np + 3 * t + a, np + 3 * t + b, -D(a, b));
            for (int a = 0; a < 3; ++a)
                for (int i = 0; i < nr; ++i) {
                    trip.emplace_back(np + 3 * t + a,
                                      np + nu_ + crow[static_cast<size_t>(i)], F(a, i));
                    trip.emplace_back(np + nu_ + crow[static_cast<size_t>(i)],
                                      np + 3 * t + a, F(a, i));
                }
            for (int i = 0; i < nr; ++i)
                for (int j = 0; j < nr; ++j)
                    trip.emplace_back(np + nu_ + crow[static_cast<size_t>(i)],
                                      np + nu_ + crow[static_cast<size_t>(j)], -H(i, j));
        }

        Kred_.resize(n, n);
        Kred_.setFromTriplets(trip.begin(), trip.end());
        Kred_.makeCompressed();
        lu_.compute(Kred_);
        if (lu_.info() != Eigen::Success)
            throw std::runtime_error("CondensedStationary: factorisation failed");
    }

    // rhs in the full (s, u, m, a) layout; returns the full solution
    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const {
        const int np = np_;
        const int n = np + nu_ + nc_ + 1;
        Eigen::VectorXd red(n);
        red.segment(0, np) = rhs.segment(0, np);
        red.segment(np, nu_ + nc_ + 1) = rhs.segment(ns_, nu_ + nc_ + 1);
        for (int t = 0; t < nt_; ++t) {
            const Local& L = loc_[static_cast<size_t>(t)];
            const Eigen::Matrix<double, 9, 1> z =
                L.Winv * rhs.segment(np + 9 * t, 9);
            const Eigen::Matrix<double, 21, 1> dp = L.Mbp.transpose() * z;
            for (int j = 0; j < 21; ++j) red[L.pcol[static_cast<size_t>(j)]] -= dp[j];
            red.segment(np + 3 * t, 3) += L.Bb * z;
            const Eigen::VectorXd dm = L.Cb * z;
            for (size_t i = 0; i < L.crow.size(); ++i)
                red[np + nu_ + L.crow[i]] -= dm[static_cast<Eigen::Index>(i)];
        }

        const Eigen::VectorXd x = lu_.solve(red);

        Eigen::VectorXd full(ns_ + nu_ + nc_ + 1);
        full.segment(0, np) = x.segment(0, np);
        full.segment(ns_, nu_ + nc_ + 1) = x.segment(np, nu_ + nc_ + 1);
        for (int t = 0; t < nt_; ++t) {
            const Local& L = loc_[static_cast<size_t>(t)];
            Eigen::Matrix<double, 9, 1> r = rhs.segment(np + 9 * t, 9);
            Eigen::Matrix<double, 21, 1> p;
            for (int j = 0; j < 21; ++j) p[j] = x[L.pcol[static_cast<size_t>(j)]];
            r -= L.Mbp * p;
            r += L.Bb.transpose() * x.segment(np + 3 * t, 3);
            for (size_t i = 0; i < L.crow.size(); ++i)
                r -= L.Cb.row(static_cast<Eigen::Index>(i)).transpose() *
                     x[np + nu_ + L.crow[i]];
            full.segment(np + 9 * t, 9) = L.Winv * r;
        }
        return full;
    }

private:
    struct Local {
        std::array<int, 21> pcol;          // public tensor dofs of the element
        std::vector<int> crow;             // constraint rows touching its private dofs
        Eigen::Matrix<double, 9, 9> Winv;  // inverted private mass block
        Eigen::Matrix<double, 9, 21> Mbp;
        Eigen::Matrix<double, 3, 9> Bb;
        Eigen::MatrixXd Cb;                // crow.size() x 9
    };

    static int local_p(const Local& L, int gdof) {
        for (int j = 0; j < 21; ++j)
            if (L.pcol[static_cast<size_t>(j)] == gdof) return j;
        throw std::logic_error("CondensedStationary: dof outside its element");
    }
    static int local_c(const Local& L, int row) {
        for (size_t i = 0; i < L.crow.size(); ++i)
            if (L.crow[i] == row) return static_cast<int>(i);
        throw std::logic_error("CondensedStationary: unseen constraint row");
    }

    int ns_, nu_, nc_, nt_, np_;
    std::vector<Local> loc_;
    SpMat Kred_;
    Eigen::UmfPackLU<SpMat> lu_;
};

}  // namespace

BiharmonicErrors mixed_biharmonic_solve(const TriMesh& mesh,
                                        const std::shared_ptr<const ExactSolution>& exact) {
    const CHCase cas = pure_case(exact);
    const SigmaSpace sig(mesh);
    const VSpace vsp(mesh);
    const SigmaConstraints con(sig);

    const SpMat Ms = mass_sigma(sig, 6);
    const SpMat B = divdiv_coupling(sig, vsp);
    const Eigen::VectorXd jvec = mean_vector(vsp);
    const int ns = sig.ndof(), nu = vsp.ndof(), nc = con.rows();

    const CondensedStationary cond(sig, Ms, B, con.matrix(), jvec);

    Eigen::VectorXd rhs(ns + nu + nc + 1);
    rhs.segment(0, ns) = load_normal_trace(
        sig,
        [&](const Eigen::Vector2d& x, const Eigen::Vector2d& nout) {
            return cas.normal_deriv(x, nout, 0.0);
        },
        8);
    // -(g, psi) with g = bilap u
    rhs.segment(ns, nu) = -load_scalar(
        vsp, [&](const Eigen::Vector2d& x) { return cas.exact->bilap_u(x, 0.0); }, 10);
    rhs.segment(ns + nu, nc) = con.boundary_moments(
        [&](const Eigen::Vector2d& x, const Eigen::Vector2d& te, const Eigen::Vector2d& ne) {
            return cas.tn_trace(x, te, ne, 0.0);
        },
        [&](const Eigen::Vector2d& x, const Eigen::Vector2d& ne) {
            return cas.dn_trace(x, ne, 0.0);
        });
    // mean of the exact state
    double u_int = 0.0;
    const auto& rule = triangle_rule(12);
    for (int t = 0; t < mesh.num_tris(); ++t) {
        const double scale = 2.0 * mesh.area(t);
        for (const auto& q : rule)
            u_int += scale * q.w * cas.exact->u(mesh.point(t, 1.0 - q.x - q.y, q.x, q.y), 0.0);
    }
    rhs[ns + nu + nc] = -u_int;

    const Eigen::VectorXd sol = cond.solve(rhs);
    const Eigen::VectorXd s = sol.segment(0, ns);
    const Eigen::VectorXd w = sol.segment(ns, nu);

    BiharmonicErrors err;
    err.sigma = error_sigma(sig, s, cas, 0.0, 12);
    err.state = error_state(vsp, w, cas, 0.0, 12);
    err.n_dofs = ns + nu;
    return err;
}

std::vector<double> mixed_biharmonic_eigs(const TriMesh& mesh, int count, bool dense) {
    const SigmaSpace sig(mesh);
    const VSpace vsp(mesh);
    const SigmaConstraints con(sig);

    const SpMat Ms = mass_sigma(sig, 6);
    const SpMat B = divdiv_coupling(sig, vsp);
    const SpMat Mu = mass_v(vsp);
    const int ns = sig.ndof(), nu = vsp.ndof(), nc = con.rows();

    std::vector<double> all;
    if (dense) {
        // Eliminate the flux and the multipliers: for each scalar basis
        // vector solve
        //   [ Ms  C' ] [ s ]   [ B' e_i ]
        //   [ C   0  ] [ m ] = [ 0      ]
        // and collect W(:,i) = B s_i; the eigenvalues solve W x = lam Mu x.
        std::vector<Eigen::Triplet<double>> trip;
        for (int k = 0; k < Ms.outerSize(); ++k)
            for (SpMat::InnerIterator it(Ms, k); it; ++it)
                trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()),
                                  it.value());
        const SpMat& C = con.matrix();
        for (int k = 0; k < C.outerSize(); ++k)
            for (SpMat::InnerIterator it(C, k); it; ++it) {
                trip.emplace_back(ns + static_cast<int>(it.row()), static_cast<int>(it.col()),
                                  it.value());
                trip.emplace_back(static_cast<int>(it.col()), ns + static_cast<int>(it.row()),
                                  it.value());
            }
        SpMat Kc(ns + nc, ns + nc);
        Kc.setFromTriplets(trip.begin(), trip.end());
        Kc.makeCompressed();
        Eigen::SparseLU<SpMat> lu;
        lu.compute(Kc);
        if (lu.info() != Eigen::Success)
            throw std::runtime_error("mixed_biharmonic_eigs: factorisation failed");

        Eigen::MatrixXd W(nu, nu);
        const SpMat Bt = SpMat(B.transpose());
        const int chunk = 256;
        for (int c0 = 0; c0 < nu; c0 += chunk) {
            const int nb = std::min(chunk, nu - c0);
            Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(ns + nc, nb);
            rhs.topRows(ns) = Eigen::MatrixXd(Bt.middleCols(c0, nb));
            const Eigen::MatrixXd sol = lu.solve(rhs);
            W.middleCols(c0, nb) = B * sol.topRows(ns);
        }
        W = 0.5 * (W + W.transpose()).eval();
        all = dense_generalized_eigs(W, Eigen::MatrixXd(Mu));
    } else {
        const SpMat A = pencil_stiffness(Ms, B, con.matrix());
        const SpMat M = pencil_mass(Mu, ns, nc);
        ShiftInvertOptions opt;
        opt.shift = 1.0;
        opt.wanted = count + 3;
        opt.krylov_dim = 140;
        all = shift_invert_eigs(A, M, opt);
    }

    std::vector<double> out;
    for (const double lam : all) {
        if (lam < 1e-6) continue;  // constants (and numerically-zero modes)
        out.push_back(lam);
        if (static_cast<int>(out.size()) == count) break;
    }
    return out;
}

}  // namespace chfem
