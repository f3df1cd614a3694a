#include "chfem/quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace chfem {
namespace {

// Golub–Welsch: nodes/weights of the Gauss rule attached to a symmetric
// three-term recurrence (diag a_k, off-diag b_k), with mu0 = integral of the
// weight function.  Nodes are the eigenvalues of the Jacobi matrix; the weight
// of node i is mu0 * (first eigenvector component)^2.
void golub_welsch(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double mu0,
                  std::vector<double>& nodes, std::vector<double>& weights) {
    const int n = static_cast<int>(a.size());
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        J(i, i) = a[i];
        if (i + 1 < n) J(i, i + 1) = J(i + 1, i) = b[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    if (es.info() != Eigen::Success) throw std::runtime_error("golub_welsch: eigensolver failed");
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < n; ++i) {
        nodes[i] = es.eigenvalues()[i];
        const double v0 = es.eigenvectors()(0, i);
        weights[i] = mu0 * v0 * v0;
    }
}

// Gauss–Legendre on [-1,1]: a_k = 0, b_k = k/sqrt(4k^2-1), mu0 = 2.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd b(n > 1 ? n - 1 : 0);
    for (int k = 1; k < n; ++k) b[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
    golub_welsch(a, b, 2.0, x, w);
}

// Gauss–Jacobi(alpha,beta) on [-1,1] with weight (1-x)^alpha (1+x)^beta.
void gauss_jacobi(int n, double alpha, double beta, std::vector<double>& x,
                  std::vector<double>& w) {
    Eigen::VectorXd a(n), b(n > 1 ? n - 1 : 0);
    const double ab = alpha + beta;
    a[0] = (beta - alpha) / (ab + 2.0);
    for (int k = 1; k < n; ++k) {
        const double den = (2.0 * k + ab) * (2.0 * k + ab + 2.0);
        a[k] = (beta * beta - alpha * alpha) / den;
    }
    for (int k = 1; k < n; ++k) {
        const double num = 4.0 * k * (k + alpha) * (k + beta) * (k + ab);
        const double den = (2.0 * k + ab) * (2.0 * k + ab) * (2.0 * k + ab + 1.0) *
                           (2.0 * k + ab - 1.0);
        b[k - 1] = std::sqrt(num / den);
    }
    // mu0 = int_{-1}^{1} (1-x)^a (1+x)^b dx = 2^{a+b+1} B(a+1, b+1)
    const double mu0 = std::pow(2.0, ab + 1.0) * std::tgamma(alpha + 1.0) *
                       std::tgamma(beta + 1.0) / std::tgamma(ab + 2.0);
    golub_welsch(a, b, mu0, x, w);
}

std::vector<QPoint> make_triangle_rule(int degree) {
    const int n = degree / 2 + 1;  // 2n-1 >= degree
    std::vector<double> xg, wg, xj, wj;
    gauss_legendre(n, xg, wg);
    gauss_jacobi(n, 1.0, 0.0, xj, wj);
    // Map both to [0,1].  Jacobi weight (1-x) on [-1,1] becomes 2(1-t); the
    // Duffy transform x = s(1-t), y = t has Jacobian (1-t), so
    //   int_T f = int_0^1 int_0^1 f(s(1-t), t) (1-t) ds dt.
    std::vector<QPoint> rule;
    rule.reserve(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        const double s = 0.5 * (xg[i] + 1.0), ws = 0.5 * wg[i];
        for (int j = 0; j < n; ++j) {
            const double t = 0.5 * (xj[j] + 1.0), wt = 0.25 * wj[j];
            rule.push_back({s * (1.0 - t), t, ws * wt});
        }
    }
    return rule;
}

}  // namespace

const std::vector<QPoint>& triangle_rule(int degree) {
    if (degree < 1) degree = 1;
    static std::map<int, std::vector<QPoint>> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(degree);
    if (it == cache.end()) it = cache.emplace(degree, make_triangle_rule(degree)).first;
    return it->second;
}

const std::vector<QPoint1D>& segment_rule(int degree) {
    if (degree < 1) degree = 1;
    static std::map<int, std::vector<QPoint1D>> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(degree);
    if (it == cache.end()) {
        const int n = degree / 2 + 1;
        std::vector<double> x, w;
        gauss_legendre(n, x, w);
        std::vector<QPoint1D> rule(n);
        for (int i = 0; i < n; ++i) rule[i] = {0.5 * (x[i] + 1.0), 0.5 * w[i]};
        it = cache.emplace(degree, std::move(rule)).first;
    }
    return it->second;
}

}  // namespace chfem
