// ============================================================================
// solver.hpp — the mixed evolution solver: a constrained tensor flux coupled
// to an elementwise-linear state, advanced by backward Euler with the cubic
// potential term lagged one step.
//
// Per time step the saddle system
//   [ Ms   -B'   C' ] [ s^n ]   [ N(t^n) - eps^{-2} (f(u^{n-1}) I, phi) ]
//   [ -B  -Mu/tau 0 ] [ w^n ] = [ -(1/tau) Mu w^{n-1} - (g(t^n), psi)   ]
//   [ C    0     0  ] [ m^n ]   [ d(t^n)                               ]
// is solved with a factorisation computed once per run (the matrix does not
// depend on time).  N is the natural boundary load from the prescribed
// normal derivative of the state.
// ============================================================================
#pragma once

#include "chfem/assembly.hpp"
#include "chfem/manufactured.hpp"

#include <Eigen/SparseLU>
#include <memory>
#include <optional>

namespace chfem {

struct QuadOptions {
    int mass = 6;      // tensor Gram matrix and lagged potential load
    int source = 10;   // volume source (g, psi)
    int edge = 8;      // natural boundary load
    int project = 12;  // projection right-hand sides and initial data
    int final_potential = 18;  // potential load evaluated on a reconstruction
};

class MixedCH {
public:
    struct Pair {
        Eigen::VectorXd s, w;
    };

    MixedCH(TriMesh mesh, CHCase cas, QuadOptions quad = {});

    const TriMesh& mesh() const { return mesh_; }
    const SigmaSpace& sigma_space() const { return *sig_; }
    const VSpace& v_space() const { return *vsp_; }
    const SigmaConstraints& constraints() const { return *con_; }
    const CHCase& problem() const { return case_; }
    const QuadOptions& quad() const { return quad_; }

    const SpMat& Ms() const { return Ms_; }
    const SpMat& B() const { return B_; }
    const SpMat& Mu() const { return Mu_; }
    const SpMat& C() const { return con_->matrix(); }
    const Eigen::VectorXd& mean() const { return jvec_; }

    // Constrained projection of the exact pair (flux, state) at time t:
    //   (s,phi) - (divDiv phi, w) = (sigma,phi) - sum_K (divDiv phi, u)_K
    //   (divDiv s, psi) + rho (1,psi) = (divDiv sigma, psi)
    //   C s = d(t),   integral(w) = integral(u)
    // The slack rho vanishes for consistent data; its size is reported back.
    Pair project_exact(double t, double* rho_out = nullptr) const;

    // Initialisation without an exact flux: w0 is the elementwise projection
    // of u0 and s0 solves the flux equation with the state frozen at w0.
    Pair init_from_u0() const;

    void prepare_stepping(double tau);
    double tau() const { return tau_; }

    // one backward-Euler step to time t_new (potential lagged on prev.w)
    Pair step(const Pair& prev, double t_new) const;
    // same step, but the potential is evaluated through a caller-supplied
    // field u_at(element, l0, l1, l2) with its own quadrature degree
    Pair step_custom_potential(const Pair& prev, double t_new,
                               const std::function<double(int, double, double, double)>& u_at,
                               int quad_degree) const;

    double state_integral(const Eigen::VectorXd& w) const { return jvec_.dot(w); }

private:
    Pair solve_step_rhs(const Eigen::VectorXd& s_rhs, const Eigen::VectorXd& u_rhs,
                        const Eigen::VectorXd& c_rhs) const;
    Eigen::VectorXd natural_load(double t) const;
    Eigen::VectorXd constraint_data(double t) const;

    TriMesh mesh_;
    CHCase case_;
    QuadOptions quad_;
    std::unique_ptr<SigmaSpace> sig_;
    std::unique_ptr<VSpace> vsp_;
    std::unique_ptr<SigmaConstraints> con_;
    SpMat Ms_, B_, Mu_;
    Eigen::VectorXd jvec_;
    double tau_ = 0.0;
    std::unique_ptr<Eigen::SparseLU<SpMat>> step_lu_;
};

// Number of uniform steps covering [0,T]; tau is adjusted to T/N when it does
// not divide T exactly.
int step_count(double T, double tau);

}  // namespace chfem
