#include "eigenscope/stationary_phase.hpp"

#include <cmath>

#include "eigenscope/errors.hpp"
#include "eigenscope/quadrature.hpp"
#include "eigenscope/util.hpp"

namespace eigenscope {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 6.28318530717958647692;
}  // namespace

Eigen::VectorXd phase_gradient(const OscillatoryProblem& prob, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& y) {
    if (prob.grad_y) return prob.grad_y(x, y);
    int n = prob.inner_dim;
    double h = prob.fd_step;
    Eigen::VectorXd g(n);
    Eigen::VectorXd ya = y, yb = y;
    for (int i = 0; i < n; ++i) {
        ya[i] = y[i] + h;
        yb[i] = y[i] - h;
        g[i] = (prob.phase(x, ya) - prob.phase(x, yb)) / (2 * h);
        ya[i] = y[i];
        yb[i] = y[i];
    }
    return g;
}

Eigen::MatrixXd phase_hessian(const OscillatoryProblem& prob, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& y) {
    if (prob.hess_y) return prob.hess_y(x, y);
    int n = prob.inner_dim;
    double h = prob.fd_step;
    Eigen::MatrixXd H(n, n);
    if (prob.grad_y) {
        // differences of the analytic gradient keep the rounding floor
        // far below the spec'd Hessian tolerances
        Eigen::VectorXd ya = y, yb = y;
        for (int i = 0; i < n; ++i) {
            ya[i] = y[i] + h;
            yb[i] = y[i] - h;
            H.col(i) = (prob.grad_y(x, ya) - prob.grad_y(x, yb)) / (2 * h);
            ya[i] = y[i];
            yb[i] = y[i];
        }
        return Eigen::MatrixXd(0.5 * (H + H.transpose()));
    }
    double f0 = prob.phase(x, y);
    Eigen::VectorXd yp = y;
    for (int i = 0; i < n; ++i) {
        yp[i] = y[i] + h;
        double fpi = prob.phase(x, yp);
        yp[i] = y[i] - h;
        double fmi = prob.phase(x, yp);
        yp[i] = y[i];
        H(i, i) = (fpi - 2 * f0 + fmi) / (h * h);
        for (int j = i + 1; j < n; ++j) {
            yp[i] = y[i] + h;
            yp[j] = y[j] + h;
            double fpp = prob.phase(x, yp);
            yp[j] = y[j] - h;
            double fpm = prob.phase(x, yp);
            yp[i] = y[i] - h;
            double fmm = prob.phase(x, yp);
            yp[j] = y[j] + h;
            double fmp = prob.phase(x, yp);
            yp[i] = y[i];
            yp[j] = y[j];
            H(i, j) = H(j, i) = (fpp - fpm - fmp + fmm) / (4 * h * h);
        }
    }
    return H;
}

CriticalPointData find_critical_point(const OscillatoryProblem& prob, const Eigen::VectorXd& x,
                                      const Eigen::VectorXd& guess) {
    Eigen::VectorXd y = guess;
    Eigen::VectorXd g;
    bool converged = false;
    for (int it = 0; it < 50; ++it) {
        g = phase_gradient(prob, x, y);
        if (!g.allFinite()) throw NumericError("find_critical_point: gradient not finite");
        if (g.norm() < 1e-12) {
            converged = true;
            break;
        }
        Eigen::MatrixXd H = phase_hessian(prob, x, y);
        Eigen::VectorXd step = H.fullPivLu().solve(g);
        if (!step.allFinite()) throw NumericError("find_critical_point: singular Newton step");
        y -= step;
    }
    g = phase_gradient(prob, x, y);
    if (!converged && g.norm() >= 1e-12)
        throw NumericError("find_critical_point: no convergence in 50 Newton iterations");

    CriticalPointData cp;
    cp.y = y;
    cp.grad_norm = g.norm();
    cp.hessian = phase_hessian(prob, x, y);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cp.hessian);
    double max_abs = es.eigenvalues().cwiseAbs().maxCoeff();
    double min_abs = es.eigenvalues().cwiseAbs().minCoeff();
    if (max_abs < 1e-8 || min_abs <= 1e-6 * max_abs)
        throw NumericError("find_critical_point: degenerate Hessian at the critical point");
    cp.det = es.eigenvalues().prod();
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        (es.eigenvalues()[i] > 0 ? cp.n_pos : cp.n_neg)++;
    cp.phase_value = prob.phase(x, y);
    return cp;
}

std::complex<double> leading_term(const OscillatoryProblem& prob, const CriticalPointData& cp,
                                  double lambda, const Eigen::VectorXd& x) {
    if (!(lambda >= 1.0)) throw DomainError("leading_term: lambda must be >= 1");
    int n = prob.inner_dim;
    double amp = prob.amplitude ? prob.amplitude(lambda, x, cp.y) : 1.0;
    double mag = std::pow(lambda / kTwoPi, -0.5 * n) / std::sqrt(std::abs(cp.det));
    double arg = 0.25 * kPi * (cp.n_pos - cp.n_neg) + lambda * cp.phase_value;
    return std::polar(mag * amp, arg);
}

namespace {

std::complex<double> tensor_quadrature(const OscillatoryProblem& prob, double lambda,
                                       const Eigen::VectorXd& x, const std::vector<int>& panels) {
    int n = prob.inner_dim;
    const int order = 16;
    std::vector<GaussRule> axes;
    for (int a = 0; a < n; ++a)
        axes.push_back(composite_gauss(prob.box_lo[a], prob.box_hi[a], panels[static_cast<std::size_t>(a)], order));
    if (n == 1) {
        std::complex<double> acc = 0.0;
        Eigen::VectorXd y(1);
        for (long i = 0; i < axes[0].nodes.size(); ++i) {
            y[0] = axes[0].nodes[i];
            double a = prob.amplitude(lambda, x, y);
            if (a == 0.0) continue;
            acc += axes[0].weights[i] * a * std::polar(1.0, lambda * prob.phase(x, y));
        }
        return acc;
    }
    // rows along the first axis are independent; partial sums land in a
    // slot per row and reduce in index order, so the result does not
    // depend on the thread count
    std::vector<std::complex<double>> row_sums(static_cast<std::size_t>(axes[0].nodes.size()), 0.0);
    parallel_for(row_sums.size(), [&](std::size_t i) {
        Eigen::VectorXd y(n);
        y[0] = axes[0].nodes[static_cast<long>(i)];
        double wi = axes[0].weights[static_cast<long>(i)];
        std::complex<double> acc = 0.0;
        if (n == 2) {
            for (long j = 0; j < axes[1].nodes.size(); ++j) {
                y[1] = axes[1].nodes[j];
                double a = prob.amplitude(lambda, x, y);
                if (a == 0.0) continue;
                acc += wi * axes[1].weights[j] * a * std::polar(1.0, lambda * prob.phase(x, y));
            }
        } else {
            for (long j = 0; j < axes[1].nodes.size(); ++j) {
                y[1] = axes[1].nodes[j];
                double wij = wi * axes[1].weights[j];
                for (long k = 0; k < axes[2].nodes.size(); ++k) {
                    y[2] = axes[2].nodes[k];
                    double a = prob.amplitude(lambda, x, y);
                    if (a == 0.0) continue;
                    acc += wij * axes[2].weights[k] * a * std::polar(1.0, lambda * prob.phase(x, y));
                }
            }
        }
        row_sums[i] = acc;
    });
    std::complex<double> total = 0.0;
    for (const auto& v : row_sums) total += v;
    return total;
}

}  // namespace

QuadResult oscillatory_quadrature(const OscillatoryProblem& prob, double lambda,
                                  const Eigen::VectorXd& x) {
    int n = prob.inner_dim;
    if (n > 3) throw ResourceError("oscillatory_quadrature: inner dimension capped at 3");
    if (!prob.amplitude) throw DomainError("oscillatory_quadrature: amplitude required");
    // ten points per wavelength along each axis, wavelengths counted
    // with the axis extent and the per-axis derivative bound
    const int order = 16;
    std::vector<int> panels(static_cast<std::size_t>(n));
    double total_fine = 1.0;
    long max_nodes = 0;
    for (int a = 0; a < n; ++a) {
        double extent = prob.box_hi[a] - prob.box_lo[a];
        long need = static_cast<long>(std::ceil(10.0 * lambda * prob.grad_bound * extent / kTwoPi));
        need = std::max(need, 32l);
        panels[static_cast<std::size_t>(a)] = static_cast<int>((need + order - 1) / order);
        total_fine *= 2.0 * panels[static_cast<std::size_t>(a)] * order;
        max_nodes = std::max(max_nodes, 2l * panels[static_cast<std::size_t>(a)] * order);
    }
    if (total_fine > 1.2e9)
        throw ResourceError("oscillatory_quadrature: grid too large; reduce lambda or the dimension");

    std::complex<double> coarse = tensor_quadrature(prob, lambda, x, panels);
    std::vector<int> doubled = panels;
    for (int& p : doubled) p *= 2;
    std::complex<double> fine = tensor_quadrature(prob, lambda, x, doubled);
    QuadResult r;
    r.value = fine;
    r.est_error = std::abs(fine - coarse);
    r.nodes = max_nodes;
    return r;
}

RemainderSweep remainder_decay_fit(const OscillatoryProblem& prob, const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& guess, const std::vector<double>& lambdas) {
    if (lambdas.size() < 5) throw NumericError("remainder_decay_fit: need at least 5 lambdas");
    double lo = lambdas.front(), hi = lambdas.front();
    for (double l : lambdas) {
        lo = std::min(lo, l);
        hi = std::max(hi, l);
    }
    if (hi < 10.0 * lo * (1.0 - 1e-9))
        throw NumericError("remainder_decay_fit: lambdas must span a decade");

    CriticalPointData cp = find_critical_point(prob, x, guess);
    RemainderSweep sweep;
    int floored = 0;
    std::vector<std::pair<double, double>> samples;
    for (double lambda : lambdas) {
        RemainderRow row;
        row.lambda = lambda;
        QuadResult q = oscillatory_quadrature(prob, lambda, x);
        row.quadrature = q.value;
        row.est_error = q.est_error;
        row.leading = leading_term(prob, cp, lambda, x);
        row.remainder_abs = std::abs(row.quadrature - row.leading);
        if (row.remainder_abs <= 50.0 * std::max(q.est_error, 1e-15)) ++floored;
        samples.emplace_back(lambda, row.remainder_abs);
        sweep.rows.push_back(row);
    }
    sweep.floor_limited = 2 * floored >= static_cast<int>(lambdas.size());
    if (!sweep.floor_limited) {
        sweep.fit = fit_exponent(samples);
        sweep.fitted = true;
    }
    return sweep;
}

// ---------------------------------------------------------------------------
// shipped phase problems
// ---------------------------------------------------------------------------

OscillatoryProblem test_phase_problem(const std::string& name) {
    OscillatoryProblem prob;
    prob.outer_dim = 0;
    // The 1d phases take a wide taper (plateau 0.5, support 2.0): the
    // cutoff's non-stationary tail then sits below the true remainder
    // already at lambda = 50. The 2d phases keep support 1.0 so the
    // tensor grids stay affordable, with a stronger cubic term for the
    // same reason.
    double plateau = 0.5, support = 2.0;
    if (name == "fresnel" || name == "fresnel_neg") {
        double sign = name == "fresnel" ? 1.0 : -1.0;
        prob.inner_dim = 1;
        prob.phase = [sign](const Eigen::VectorXd&, const Eigen::VectorXd& y) {
            return sign * 0.5 * y[0] * y[0];
        };
        prob.grad_y = [sign](const Eigen::VectorXd&, const Eigen::VectorXd& y) {
            return Eigen::VectorXd(sign * y);
        };
        prob.grad_bound = 2.0;
    } else if (name == "cubic") {
        prob.inner_dim = 1;
        prob.phase = [](const Eigen::VectorXd&, const Eigen::VectorXd& y) {
            return 0.5 * y[0] * y[0] + 0.1 * y[0] * y[0] * y[0];
        };
        prob.grad_y = [](const Eigen::VectorXd&, const Eigen::VectorXd& y) {
            Eigen::VectorXd g(1);
            g[0] = y[0] + 0.3 * y[0] * y[0];
            return g;
        };
        prob.grad_bound = 3.2;
    } else if (name == "hyperbolic") {
        prob.inner_dim = 2;
        plateau = 0.35;
        support = 1.0;
        prob.phase = [](const Eigen::VectorXd&, const Eigen::VectorXd& y) {
            return 0.5 * (y[0] * y[0] - y[1] * y[1]);
        };
        prob.grad_y = [](const Eigen::VectorXd&, const Eigen::VectorXd& y) {
            Eigen::VectorXd g(2);
            g << y[0], -y[1];
            return g;
        };
        prob.grad_bound = 1.0;
    } else if (name == "product") {
        prob.inner_dim = 2;
        plateau = 0.4;
        support = 1.6;
        auto axis = [](double u) { return 0.5 * u * u + 0.15 * u * u * u; };
        prob.phase = [axis](const Eigen::VectorXd&, const Eigen::VectorXd& y) {
            return axis(y[0]) + axis(y[1]);
        };
        prob.grad_y = [](const Eigen::VectorXd&, const Eigen::VectorXd& y) {
            Eigen::VectorXd g(2);
            g << y[0] + 0.45 * y[0] * y[0], y[1] + 0.45 * y[1] * y[1];
            return g;
        };
        prob.grad_bound = 2.76;
    } else {
        throw ConfigError("unknown test phase '" + name +
                          "' (catalog: fresnel, fresnel_neg, cubic, hyperbolic, product)");
    }
    prob.amplitude = [plateau, support](double, const Eigen::VectorXd&, const Eigen::VectorXd& y) {
        return radial_bump(y, plateau, support);
    };
    prob.box_lo = Eigen::VectorXd::Constant(prob.inner_dim, -support);
    prob.box_hi = Eigen::VectorXd::Constant(prob.inner_dim, support);
    return prob;
}

OscillatoryProblem wave_phase_problem(int d, int n) {
    if (!(1 <= d && d < n && n <= 3)) throw DomainError("wave_phase_problem: need 1 <= d < n <= 3");
    OscillatoryProblem prob;
    prob.outer_dim = d;
    prob.inner_dim = 2 * d + 2;
    int nd = prob.inner_dim;
    // inner variable layout: z = (t, x' [d], xi' [d], r)
    auto split = [d](const Eigen::VectorXd& z) {
        struct Parts {
            double t;
            Eigen::VectorXd xp, xip;
            double r;
        } parts;
        parts.t = z[0];
        parts.xp = z.segment(1, d);
        parts.xip = z.segment(1 + d, d);
        parts.r = z[1 + 2 * d];
        return parts;
    };
    prob.phase = [split](const Eigen::VectorXd& yp, const Eigen::VectorXd& z) {
        auto [t, xp, xip, r] = split(z);
        double p = std::sqrt(xip.squaredNorm() + r * r);
        return (xp - yp).dot(xip) + t * (p - 1.0);
    };
    prob.grad_y = [split, d](const Eigen::VectorXd& yp, const Eigen::VectorXd& z) {
        auto [t, xp, xip, r] = split(z);
        double p = std::sqrt(xip.squaredNorm() + r * r);
        Eigen::VectorXd g(2 * d + 2);
        g[0] = p - 1.0;
        g.segment(1, d) = xip;
        g.segment(1 + d, d) = (xp - yp) + (t / p) * xip;
        g[1 + 2 * d] = t * r / p;
        return g;
    };
    // Hessian by differences of the analytic gradient (default path)
    prob.box_lo = Eigen::VectorXd::Constant(nd, -0.45);
    prob.box_hi = Eigen::VectorXd::Constant(nd, 0.45);
    prob.box_lo[1 + 2 * d] = 1.0 - 0.45;
    prob.box_hi[1 + 2 * d] = 1.0 + 0.45;
    prob.grad_bound = 2.5;
    prob.amplitude = [d, nd](double, const Eigen::VectorXd& yp, const Eigen::VectorXd& z) {
        Eigen::VectorXd center = Eigen::VectorXd::Zero(nd);
        center.segment(1, d) = yp;
        center[1 + 2 * d] = 1.0;
        return radial_bump(z - center, 0.2, 0.44);
    };
    return prob;
}

Eigen::VectorXd wave_phase_critical_point(int d, int n, const Eigen::VectorXd& y_prime) {
    if (!(1 <= d && d < n && n <= 3)) throw DomainError("wave_phase_critical_point: bad dims");
    if (y_prime.size() != d) throw DomainError("wave_phase_critical_point: y' has wrong dimension");
    Eigen::VectorXd z = Eigen::VectorXd::Zero(2 * d + 2);
    z.segment(1, d) = y_prime;
    z[1 + 2 * d] = 1.0;
    return z;
}

HessianCheck composition_hessian_check(int d, int n) {
    if (!(1 <= d && d < n && n <= 3)) throw DomainError("composition_hessian_check: need 1 <= d < n <= 3");
    // fixed frozen parameters: x', y' embedded as (x', 0) in R^n, a
    // generic nonzero frequency xi, and a nonzero time t
    Eigen::VectorXd xp = Eigen::VectorXd::Zero(n), yp = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < d; ++i) {
        xp[i] = 0.2 + 0.1 * i;
        yp[i] = -0.15 + 0.05 * i;
    }
    Eigen::VectorXd xi(n);
    for (int i = 0; i < n; ++i) xi[i] = 0.7 - 0.2 * i;
    double t = 0.4;

    OscillatoryProblem prob;
    prob.outer_dim = 0;
    prob.inner_dim = 4 * n;
    auto split = [n](const Eigen::VectorXd& v) {
        struct Parts {
            Eigen::VectorXd w, z, eta, zeta;
        } parts;
        parts.w = v.segment(0, n);
        parts.z = v.segment(n, n);
        parts.eta = v.segment(2 * n, n);
        parts.zeta = v.segment(3 * n, n);
        return parts;
    };
    prob.phase = [split, xp, yp, xi, t](const Eigen::VectorXd&, const Eigen::VectorXd& v) {
        auto [w, z, eta, zeta] = split(v);
        return (xp - w).dot(eta) + (w - z).dot(xi) + t * (xi.norm() - 1.0) + (z - yp).dot(zeta);
    };
    prob.grad_y = [split, xp, yp, xi, n](const Eigen::VectorXd&, const Eigen::VectorXd& v) {
        auto [w, z, eta, zeta] = split(v);
        Eigen::VectorXd g(4 * n);
        g.segment(0, n) = -eta + xi;
        g.segment(n, n) = -xi + zeta;
        g.segment(2 * n, n) = xp - w;
        g.segment(3 * n, n) = z - yp;
        return g;
    };

    Eigen::VectorXd v_star(4 * n);
    v_star.segment(0, n) = xp;
    v_star.segment(n, n) = yp;
    v_star.segment(2 * n, n) = xi;
    v_star.segment(3 * n, n) = xi;

    HessianCheck chk;
    chk.critical_point = v_star;
    Eigen::VectorXd zero_outer(0);
    chk.grad_residual = prob.grad_y(zero_outer, v_star).norm();
    chk.hessian = phase_hessian(prob, zero_outer, v_star);
    chk.det = chk.hessian.determinant();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(chk.hessian);
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        (es.eigenvalues()[i] > 0 ? chk.n_pos : chk.n_neg)++;
    return chk;
}

}  // namespace eigenscope
