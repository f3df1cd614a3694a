// ============================================================================
// manufactured.hpp — closed-form solutions used to drive and verify the
// solver, together with every derived field the scheme needs (fluxes,
// boundary traces, forcing).
//
// The corner-singular solution on the L-shaped domain is handled through an
// exact calculus on sums of separable polar terms  r^p cos(q*theta) and
// r^p sin(q*theta): each Cartesian derivative of such a term is again a sum
// of two such terms, so arbitrary derivative orders stay in closed form.
// The polar angle uses the branch theta in [0, 2*pi) so it is continuous on
// the slit complement covering the L-shape.
// ============================================================================
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <vector>

namespace chfem {

// --- exact polar-term calculus ----------------------------------------------
class PolarSum {
public:
    // coef * r^p * cos(q theta)  /  coef * r^p * sin(q theta)
    static PolarSum cosine(double coef, double p, double q);
    static PolarSum sine(double coef, double p, double q);

    PolarSum dx() const;
    PolarSum dy() const;
    PolarSum operator+(const PolarSum& o) const;
    PolarSum operator*(double s) const;

    double eval(double x, double y) const;
    size_t size() const { return terms_.size(); }

private:
    struct Term {
        bool is_sin;
        double coef, p, q;
    };
    std::vector<Term> terms_;
    void push(const Term& t);
};

// --- exact space-time solutions ----------------------------------------------
class ExactSolution {
public:
    virtual ~ExactSolution() = default;
    virtual double u(const Eigen::Vector2d& x, double t) const = 0;
    virtual Eigen::Vector2d grad_u(const Eigen::Vector2d& x, double t) const = 0;
    virtual Eigen::Matrix2d hess_u(const Eigen::Vector2d& x, double t) const = 0;
    virtual double lap_u(const Eigen::Vector2d& x, double t) const = 0;
    virtual Eigen::Vector2d grad_lap_u(const Eigen::Vector2d& x, double t) const = 0;
    virtual double bilap_u(const Eigen::Vector2d& x, double t) const = 0;
    virtual double dudt(const Eigen::Vector2d& x, double t) const = 0;
};

// u = exp(-t) cos(pi x) cos(pi y) on the unit square
std::shared_ptr<const ExactSolution> exact_square_trig();
// u = exp(-t) r^{4/3} cos(2 theta / 3) on the L-shape
std::shared_ptr<const ExactSolution> exact_lshape_singular();
// u identically the constant c
std::shared_ptr<const ExactSolution> exact_constant(double c);

// --- problem case: solution plus every derived field --------------------------
struct CHCase {
    std::shared_ptr<const ExactSolution> exact;  // null when only u0 is known
    double eps = 1.0;
    bool nonlinear = true;  // false: potential term switched off entirely
    std::function<double(const Eigen::Vector2d&)> u0;  // initial state

    double eps_inv2() const { return nonlinear ? 1.0 / (eps * eps) : 0.0; }
    double f(double u) const { return nonlinear ? u * u * u - u : 0.0; }
    double fprime(double u) const { return nonlinear ? 3.0 * u * u - 1.0 : 0.0; }

    // flux tensor hess(u) - eps^{-2} f(u) I
    Eigen::Matrix2d sigma(const Eigen::Vector2d& x, double t) const;
    // row-wise divergence of the flux
    Eigen::Vector2d div_sigma(const Eigen::Vector2d& x, double t) const;
    // divDiv of the flux (= source - du/dt)
    double divdiv_sigma(const Eigen::Vector2d& x, double t) const;
    // right-hand side of the evolution equation
    double source(const Eigen::Vector2d& x, double t) const;
    // traces in a prescribed edge frame
    double tn_trace(const Eigen::Vector2d& x, const Eigen::Vector2d& te,
                    const Eigen::Vector2d& ne, double t) const;
    double dn_trace(const Eigen::Vector2d& x, const Eigen::Vector2d& ne, double t) const;
    // normal derivative of u (natural boundary data)
    double normal_deriv(const Eigen::Vector2d& x, const Eigen::Vector2d& nout, double t) const;
};

CHCase case_square_trig(double eps);
CHCase case_lshape_singular(double eps);
CHCase case_constant(double c, double eps);
// two circular interfaces of radius r0 centred at (0.3,0.5) and (0.7,0.5),
// profile width set by eps
CHCase case_two_drops(double eps, double r0 = 0.19);

}  // namespace chfem
