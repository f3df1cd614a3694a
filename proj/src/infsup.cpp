#include "chfem/infsup.hpp"

#include "chfem/assembly.hpp"
#include "chfem/seminorm.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace chfem {

double infsup_constant(const TriMesh& mesh) {
    const SigmaSpace sig(mesh);
    const VSpace vsp(mesh);
    const SigmaConstraints con(sig);

    const Eigen::MatrixXd Ms(mass_sigma(sig, 6));
    const Eigen::MatrixXd B(divdiv_coupling(sig, vsp));
    const Eigen::MatrixXd G(seminorm_gram(vsp));
    const Eigen::VectorXd j = mean_vector(vsp);

    // basis of the admissible tensor subspace: kernel of the constraint rows
    const Eigen::MatrixXd C(con.matrix());
    Eigen::FullPivLU<Eigen::MatrixXd> lu(C);
    lu.setThreshold(1e-10);
    const Eigen::MatrixXd Z = lu.kernel();  // ndof x dim(ker)
    if (Z.cols() == 0) throw std::runtime_error("infsup: empty admissible space");

    // Schur complement on the admissible subspace
    const Eigen::MatrixXd MsZ = Z.transpose() * Ms * Z;
    const Eigen::MatrixXd BZ = B * Z;  // nu x nz
    const Eigen::LLT<Eigen::MatrixXd> llt(MsZ);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("infsup: tensor Gram matrix not positive definite");
    const Eigen::MatrixXd S = BZ * llt.solve(BZ.transpose());  // nu x nu

    // orthonormal basis of the mean-zero subspace: columns 1.. of a full QR
    // of the mean vector
    const int nu = static_cast<int>(S.rows());
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(j);
    const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(nu, nu);
    const Eigen::MatrixXd Y = Q.rightCols(nu - 1);

    const Eigen::MatrixXd Sr = Y.transpose() * S * Y;
    const Eigen::MatrixXd Gr = Y.transpose() * G * Y;

    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Sr, Gr);
    if (es.info() != Eigen::Success) throw std::runtime_error("infsup: eigensolve failed");
    const double lam_min = es.eigenvalues().minCoeff();
    if (lam_min < 0.0 && lam_min > -1e-12) return 0.0;
    return std::sqrt(lam_min);
}

}  // namespace chfem
