#include "chfem/eigs.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace chfem {

std::vector<double> dense_generalized_eigs(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, B);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("dense_generalized_eigs: solver failed");
    std::vector<double> out(es.eigenvalues().data(),
                            es.eigenvalues().data() + es.eigenvalues().size());
    return out;
}

// ---------------------------------------------------------------------------
// Shift-invert Lanczos with locking.
//
// The operator T = (A - s M)^{-1} M is self-adjoint with respect to the
// semi-inner product K = k_sign*M (K T = k_sign*M (A-sM)^{-1} M is
// symmetric); k_sign is chosen so the pencil's finite eigenvectors carry
// positive K-norm.  A Krylov space built from a single start vector can only
// represent one direction of a degenerate eigenspace, so converged Ritz
// vectors are locked (kept K-orthonormal) and the iteration restarts against
// them; repeated eigenvalues then surface in later rounds.
// ---------------------------------------------------------------------------
std::vector<double> shift_invert_eigs(const Eigen::SparseMatrix<double>& A,
                                      const Eigen::SparseMatrix<double>& M,
                                      const ShiftInvertOptions& opt) {
    using Vec = Eigen::VectorXd;
    const int n = static_cast<int>(A.rows());

    Eigen::SparseMatrix<double> Ashift = A - opt.shift * M;
    Ashift.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(Ashift);
    if (lu.info() != Eigen::Success)
        throw std::runtime_error("shift_invert_eigs: shifted matrix is singular");

    const auto applyT = [&](const Vec& v) -> Vec { return lu.solve(M * v); };
    const auto applyK = [&](const Vec& v) -> Vec { return opt.k_sign * (M * v); };

    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<Vec> locked;      // K-orthonormal converged vectors
    std::vector<Vec> locked_K;    // K * locked vectors (cached)
    std::vector<double> values;

    const int rounds = 8;
    for (int round = 0; round < rounds && static_cast<int>(values.size()) < opt.wanted;
         ++round) {
        // purified start vector, K-orthogonal to everything locked
        Vec v(n);
        for (int i = 0; i < n; ++i) v[i] = gauss(rng);
        v = applyT(v);
        for (size_t l = 0; l < locked.size(); ++l) v -= locked_K[l].dot(v) * locked[l];
        double vKv = v.dot(applyK(v));
        if (vKv <= 1e-28) continue;
        v /= std::sqrt(vKv);

        const int m = std::min(opt.krylov_dim, n);
        std::vector<Vec> V;     // K-orthonormal Lanczos vectors
        std::vector<Vec> KV;    // cached K*V
        V.reserve(static_cast<size_t>(m));
        KV.reserve(static_cast<size_t>(m));
        std::vector<double> alpha, beta;  // tridiagonal entries
        V.push_back(v);
        KV.push_back(applyK(v));

        for (int j = 0; j < m; ++j) {
            Vec w = applyT(V[static_cast<size_t>(j)]);
            // full K-reorthogonalisation against locked and Lanczos vectors
            for (int pass = 0; pass < 2; ++pass) {
                for (size_t l = 0; l < locked.size(); ++l)
                    w -= locked_K[l].dot(w) * locked[l];
                for (size_t i = 0; i < V.size(); ++i) {
                    const double c = KV[i].dot(w);
                    if (pass == 0 && i == static_cast<size_t>(j)) {
                        if (static_cast<int>(alpha.size()) == j) alpha.push_back(c);
                    }
                    w -= c * V[i];
                }
            }
            const Vec Kw = applyK(w);
            const double wKw = w.dot(Kw);
            if (wKw <= 1e-24) break;  // invariant subspace (or drift) — stop this round
            const double b = std::sqrt(wKw);
            beta.push_back(b);
            if (static_cast<int>(V.size()) == m) break;
            V.push_back(w / b);
            KV.push_back(Kw / b);
        }

        const int mm = static_cast<int>(alpha.size());
        if (mm == 0) continue;
        Eigen::MatrixXd Tm = Eigen::MatrixXd::Zero(mm, mm);
        for (int i = 0; i < mm; ++i) {
            Tm(i, i) = alpha[static_cast<size_t>(i)];
            if (i + 1 < mm) {
                Tm(i, i + 1) = beta[static_cast<size_t>(i)];
                Tm(i + 1, i) = beta[static_cast<size_t>(i)];
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Tm);

        for (int k = 0; k < mm; ++k) {
            const double mu = es.eigenvalues()[k];
            if (std::abs(mu) < 1e-13) continue;  // maps to |lambda| = infinity
            const double lam = opt.shift + 1.0 / mu;
            Vec x = Vec::Zero(n);
            for (int i = 0; i < mm; ++i) x += es.eigenvectors()(i, k) * V[static_cast<size_t>(i)];
            const Vec Ax = A * x;
            const Vec Mx = M * x;
            const double res = (Ax - lam * Mx).norm() /
                               (Ax.norm() + std::abs(lam) * Mx.norm() + 1e-30);
            if (res > opt.tol) continue;
            // lock if genuinely new (K-orthogonalise against locked set)
            Vec r = x;
            for (size_t l = 0; l < locked.size(); ++l) r -= locked_K[l].dot(r) * locked[l];
            const double rKr = r.dot(applyK(r));
            if (rKr < 0.25)  // same direction as an existing locked vector
                continue;
            r /= std::sqrt(rKr);
            locked.push_back(r);
            locked_K.push_back(applyK(r));
            values.push_back(lam);
        }
    }

    std::sort(values.begin(), values.end());
    return values;
}

}  // namespace chfem
