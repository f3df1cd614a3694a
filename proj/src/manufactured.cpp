#include "chfem/manufactured.hpp"

#include <cmath>

namespace chfem {

// ---------------------------------------------------------------------------
// PolarSum: exact differentiation of r^p cos(q theta), r^p sin(q theta).
// With W(p,q) = r^p cos(q theta) and V(p,q) = r^p sin(q theta):
//   dx W(p,q) =  (p+q)/2 W(p-1,q-1) + (p-q)/2 W(p-1,q+1)
//   dy W(p,q) =  (p-q)/2 V(p-1,q+1) - (p+q)/2 V(p-1,q-1)
//   dx V(p,q) =  (p+q)/2 V(p-1,q-1) + (p-q)/2 V(p-1,q+1)
//   dy V(p,q) =  (p+q)/2 W(p-1,q-1) + (q-p)/2 W(p-1,q+1)
// (product-to-sum identities applied to the polar chain rule).
// ---------------------------------------------------------------------------

void PolarSum::push(const Term& t) {
    if (t.coef == 0.0) return;
    for (auto& s : terms_)
        if (s.is_sin == t.is_sin && s.p == t.p && s.q == t.q) {
            s.coef += t.coef;
            return;
        }
    terms_.push_back(t);
}

PolarSum PolarSum::cosine(double coef, double p, double q) {
    PolarSum s;
    s.push({false, coef, p, q});
    return s;
}

PolarSum PolarSum::sine(double coef, double p, double q) {
    PolarSum s;
    s.push({true, coef, p, q});
    return s;
}

PolarSum PolarSum::dx() const {
    PolarSum r;
    for (const auto& t : terms_) {
        const double a = 0.5 * (t.p + t.q), b = 0.5 * (t.p - t.q);
        if (!t.is_sin) {
            r.push({false, t.coef * a, t.p - 1, t.q - 1});
            r.push({false, t.coef * b, t.p - 1, t.q + 1});
        } else {
            r.push({true, t.coef * a, t.p - 1, t.q - 1});
            r.push({true, t.coef * b, t.p - 1, t.q + 1});
        }
    }
    return r;
}

PolarSum PolarSum::dy() const {
    PolarSum r;
    for (const auto& t : terms_) {
        const double a = 0.5 * (t.p + t.q), b = 0.5 * (t.p - t.q);
        if (!t.is_sin) {
            r.push({true, t.coef * b, t.p - 1, t.q + 1});
            r.push({true, -t.coef * a, t.p - 1, t.q - 1});
        } else {
            r.push({false, t.coef * a, t.p - 1, t.q - 1});
            r.push({false, -t.coef * b, t.p - 1, t.q + 1});
        }
    }
    return r;
}

PolarSum PolarSum::operator+(const PolarSum& o) const {
    PolarSum r = *this;
    for (const auto& t : o.terms_) r.push(t);
    return r;
}

PolarSum PolarSum::operator*(double s) const {
    PolarSum r;
    for (auto t : terms_) {
        t.coef *= s;
        r.push(t);
    }
    return r;
}

double PolarSum::eval(double x, double y) const {
    const double r = std::hypot(x, y);
    double th = std::atan2(y, x);
    if (th < 0.0) th += 2.0 * M_PI;
    double s = 0.0;
    for (const auto& t : terms_) {
        const double radial = std::pow(r, t.p);
        s += t.coef * radial * (t.is_sin ? std::sin(t.q * th) : std::cos(t.q * th));
    }
    return s;
}

// ---------------------------------------------------------------------------
// concrete solutions
// ---------------------------------------------------------------------------
namespace {

class SquareTrig final : public ExactSolution {
public:
    double u(const Eigen::Vector2d& x, double t) const override {
        return std::exp(-t) * std::cos(M_PI * x.x()) * std::cos(M_PI * x.y());
    }
    Eigen::Vector2d grad_u(const Eigen::Vector2d& x, double t) const override {
        const double e = std::exp(-t);
        return {-M_PI * e * std::sin(M_PI * x.x()) * std::cos(M_PI * x.y()),
                -M_PI * e * std::cos(M_PI * x.x()) * std::sin(M_PI * x.y())};
    }
    Eigen::Matrix2d hess_u(const Eigen::Vector2d& x, double t) const override {
        const double e = std::exp(-t);
        const double cc = std::cos(M_PI * x.x()) * std::cos(M_PI * x.y());
        const double ss = std::sin(M_PI * x.x()) * std::sin(M_PI * x.y());
        Eigen::Matrix2d H;
        H << -M_PI * M_PI * e * cc, M_PI * M_PI * e * ss, M_PI * M_PI * e * ss,
            -M_PI * M_PI * e * cc;
        return H;
    }
    double lap_u(const Eigen::Vector2d& x, double t) const override {
        return -2.0 * M_PI * M_PI * u(x, t);
    }
    Eigen::Vector2d grad_lap_u(const Eigen::Vector2d& x, double t) const override {
        return -2.0 * M_PI * M_PI * grad_u(x, t);
    }
    double bilap_u(const Eigen::Vector2d& x, double t) const override {
        return 4.0 * std::pow(M_PI, 4) * u(x, t);
    }
    double dudt(const Eigen::Vector2d& x, double t) const override { return -u(x, t); }
};

class LShapeSingular final : public ExactSolution {
public:
    LShapeSingular()
        : u_(PolarSum::cosine(1.0, 4.0 / 3.0, 2.0 / 3.0)),
          ux_(u_.dx()),
          uy_(u_.dy()),
          uxx_(ux_.dx()),
          uxy_(ux_.dy()),
          uyy_(uy_.dy()),
          lap_(uxx_ + uyy_),
          lapx_(lap_.dx()),
          lapy_(lap_.dy()) {}

    double u(const Eigen::Vector2d& x, double t) const override {
        return std::exp(-t) * u_.eval(x.x(), x.y());
    }
    Eigen::Vector2d grad_u(const Eigen::Vector2d& x, double t) const override {
        const double e = std::exp(-t);
        return {e * ux_.eval(x.x(), x.y()), e * uy_.eval(x.x(), x.y())};
    }
    Eigen::Matrix2d hess_u(const Eigen::Vector2d& x, double t) const override {
        const double e = std::exp(-t);
        Eigen::Matrix2d H;
        const double hxy = uxy_.eval(x.x(), x.y());
        H << uxx_.eval(x.x(), x.y()), hxy, hxy, uyy_.eval(x.x(), x.y());
        return e * H;
    }
    double lap_u(const Eigen::Vector2d& x, double t) const override {
        return std::exp(-t) * lap_.eval(x.x(), x.y());
    }
    Eigen::Vector2d grad_lap_u(const Eigen::Vector2d& x, double t) const override {
        const double e = std::exp(-t);
        return {e * lapx_.eval(x.x(), x.y()), e * lapy_.eval(x.x(), x.y())};
    }
    double bilap_u(const Eigen::Vector2d&, double) const override { return 0.0; }
    double dudt(const Eigen::Vector2d& x, double t) const override { return -u(x, t); }

private:
    PolarSum u_, ux_, uy_, uxx_, uxy_, uyy_, lap_, lapx_, lapy_;
};

class ConstantSolution final : public ExactSolution {
public:
    explicit ConstantSolution(double c) : c_(c) {}
    double u(const Eigen::Vector2d&, double) const override { return c_; }
    Eigen::Vector2d grad_u(const Eigen::Vector2d&, double) const override {
        return Eigen::Vector2d::Zero();
    }
    Eigen::Matrix2d hess_u(const Eigen::Vector2d&, double) const override {
        return Eigen::Matrix2d::Zero();
    }
    double lap_u(const Eigen::Vector2d&, double) const override { return 0.0; }
    Eigen::Vector2d grad_lap_u(const Eigen::Vector2d&, double) const override {
        return Eigen::Vector2d::Zero();
    }
    double bilap_u(const Eigen::Vector2d&, double) const override { return 0.0; }
    double dudt(const Eigen::Vector2d&, double) const override { return 0.0; }

private:
    double c_;
};

}  // namespace

std::shared_ptr<const ExactSolution> exact_square_trig() {
    static const auto s = std::make_shared<const SquareTrig>();
    return s;
}

std::shared_ptr<const ExactSolution> exact_lshape_singular() {
    static const auto s = std::make_shared<const LShapeSingular>();
    return s;
}

std::shared_ptr<const ExactSolution> exact_constant(double c) {
    return std::make_shared<const ConstantSolution>(c);
}

// ---------------------------------------------------------------------------
// derived fields
// ---------------------------------------------------------------------------

Eigen::Matrix2d CHCase::sigma(const Eigen::Vector2d& x, double t) const {
    Eigen::Matrix2d s = exact->hess_u(x, t);
    const double fw = eps_inv2() * f(exact->u(x, t));
    s(0, 0) -= fw;
    s(1, 1) -= fw;
    return s;
}

Eigen::Vector2d CHCase::div_sigma(const Eigen::Vector2d& x, double t) const {
    return exact->grad_lap_u(x, t) -
           eps_inv2() * fprime(exact->u(x, t)) * exact->grad_u(x, t);
}

double CHCase::source(const Eigen::Vector2d& x, double t) const {
    // du/dt + bilap u - eps^{-2} lap f(u), with
    // lap f(u) = (3u^2 - 1) lap u + 6 u |grad u|^2
    const double uv = exact->u(x, t);
    const double lap = exact->lap_u(x, t);
    const Eigen::Vector2d gr = exact->grad_u(x, t);
    const double lap_f = nonlinear ? (3.0 * uv * uv - 1.0) * lap + 6.0 * uv * gr.squaredNorm()
                                   : 0.0;
    return exact->dudt(x, t) + exact->bilap_u(x, t) - eps_inv2() * lap_f;
}

double CHCase::divdiv_sigma(const Eigen::Vector2d& x, double t) const {
    return source(x, t) - exact->dudt(x, t);
}

double CHCase::tn_trace(const Eigen::Vector2d& x, const Eigen::Vector2d& te,
                        const Eigen::Vector2d& ne, double t) const {
    return te.dot(sigma(x, t) * ne);
}

double CHCase::dn_trace(const Eigen::Vector2d& x, const Eigen::Vector2d& ne, double t) const {
    return div_sigma(x, t).dot(ne);
}

double CHCase::normal_deriv(const Eigen::Vector2d& x, const Eigen::Vector2d& nout,
                            double t) const {
    return exact->grad_u(x, t).dot(nout);
}

CHCase case_square_trig(double eps) {
    CHCase c;
    c.exact = exact_square_trig();
    c.eps = eps;
    c.u0 = [e = c.exact](const Eigen::Vector2d& x) { return e->u(x, 0.0); };
    return c;
}

CHCase case_lshape_singular(double eps) {
    CHCase c;
    c.exact = exact_lshape_singular();
    c.eps = eps;
    c.u0 = [e = c.exact](const Eigen::Vector2d& x) { return e->u(x, 0.0); };
    return c;
}

CHCase case_constant(double cval, double eps) {
    CHCase c;
    c.exact = exact_constant(cval);
    c.eps = eps;
    c.u0 = [cval](const Eigen::Vector2d&) { return cval; };
    return c;
}

CHCase case_two_drops(double eps, double r0) {
    CHCase c;
    c.exact = nullptr;
    c.eps = eps;
    const Eigen::Vector2d c1(0.3, 0.5), c2(0.7, 0.5);
    const double w = std::sqrt(2.0) * eps;
    c.u0 = [=](const Eigen::Vector2d& x) {
        return 1.0 - std::tanh(((x - c1).norm() - r0) / w) -
               std::tanh(((x - c2).norm() - r0) / w);
    };
    return c;
}

}  // namespace chfem
