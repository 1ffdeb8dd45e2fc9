#include "eigenscope/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace eigenscope {

namespace {

// Newton iteration on P_n with the classic Chebyshev initial guess;
// nodes come out symmetric and accurate to machine precision.
GaussRule compute_gauss(int n) {
    GaussRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            // P_n(x) and P_n'(x) by the three-term recurrence
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.nodes[n - 1 - i] = x;
        r.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
    if (order < 1 || order > 512) throw std::invalid_argument("gauss_legendre: order out of range");
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, compute_gauss(order)).first;
    return it->second;
}

GaussRule composite_gauss(double a, double b, int panels, int order) {
    const GaussRule& base = gauss_legendre(order);
    GaussRule r;
    r.nodes.resize(panels * order);
    r.weights.resize(panels * order);
    double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        double lo = a + p * h;
        for (int i = 0; i < order; ++i) {
            r.nodes[p * order + i] = lo + 0.5 * h * (base.nodes[i] + 1.0);
            r.weights[p * order + i] = 0.5 * h * base.weights[i];
        }
    }
    return r;
}

GaussRule periodic_trapezoid(double a, double b, int n) {
    GaussRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    double h = (b - a) / n;
    for (int i = 0; i < n; ++i) {
        r.nodes[i] = a + i * h;
        r.weights[i] = h;
    }
    return r;
}

double smooth_step(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    double f = std::exp(-1.0 / u);
    double g = std::exp(-1.0 / (1.0 - u));
    return f / (f + g);
}

double plateau_bump(double t, double a, double b, double edge) {
    if (t <= a || t >= b) return 0.0;
    double w = (b - a) * edge;
    double up = smooth_step((t - a) / w);
    double down = smooth_step((b - t) / w);
    return up * down;
}

double radial_bump(const Eigen::VectorXd& y, double inner, double outer) {
    double r = y.norm();
    if (r <= inner) return 1.0;
    if (r >= outer) return 0.0;
    return smooth_step((outer - r) / (outer - inner));
}

}  // namespace eigenscope
