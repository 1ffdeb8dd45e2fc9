#include "eigenscope/flow.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "eigenscope/errors.hpp"
#include "eigenscope/rng.hpp"
#include "eigenscope/util.hpp"

namespace eigenscope {

namespace {

constexpr double kUnitTol = 1e-9;

Eigen::VectorXd sphere_tangent_project(const Eigen::VectorXd& x, const Eigen::VectorXd& v) {
    return v - v.dot(x) * x;
}

// geodesic equations in ambient coordinates:
// sphere: x' = xi, xi' = -|xi|^2 x (Hamilton's equations of p^2/2
// restricted to the unit sphere); torus: x' = xi, xi' = 0
void ode_rhs(const Manifold& m, const Eigen::VectorXd& x, const Eigen::VectorXd& xi,
             Eigen::VectorXd& dx, Eigen::VectorXd& dxi) {
    dx = xi;
    if (m.is_sphere()) {
        dxi = -xi.squaredNorm() * x;
    } else {
        dxi = Eigen::VectorXd::Zero(xi.size());
    }
}

PhasePoint flow_closed_form(const Manifold& m, const PhasePoint& p, double t) {
    PhasePoint q;
    if (m.is_sphere()) {
        // rotate in the plane spanned by x and the unit tangent
        q.x.x = p.x.x * std::cos(t) + p.xi.xi * std::sin(t);
        q.xi.xi = -p.x.x * std::sin(t) + p.xi.xi * std::cos(t);
    } else {
        q.x = m.canonical(Point{p.x.x + t * p.xi.xi});
        q.xi = p.xi;
    }
    return q;
}

PhasePoint flow_ode(const Manifold& m, const PhasePoint& p, double t, const FlowSettings& s) {
    if (s.order != 1 && s.order != 2 && s.order != 4)
        throw ConfigError("flow: one-step order must be 1, 2, or 4");
    if (!(s.dt > 0)) throw ConfigError("flow: dt must be positive");
    double remaining = std::abs(t);
    double dir = t >= 0 ? 1.0 : -1.0;
    Eigen::VectorXd x = p.x.x, xi = p.xi.xi;
    Eigen::VectorXd k1x, k1v, k2x, k2v, k3x, k3v, k4x, k4v;
    while (remaining > 0) {
        double h = dir * std::min(s.dt, remaining);
        remaining -= std::abs(h);
        switch (s.order) {
            case 1:
                ode_rhs(m, x, xi, k1x, k1v);
                x += h * k1x;
                xi += h * k1v;
                break;
            case 2:
                ode_rhs(m, x, xi, k1x, k1v);
                ode_rhs(m, x + 0.5 * h * k1x, xi + 0.5 * h * k1v, k2x, k2v);
                x += h * k2x;
                xi += h * k2v;
                break;
            default:
                ode_rhs(m, x, xi, k1x, k1v);
                ode_rhs(m, x + 0.5 * h * k1x, xi + 0.5 * h * k1v, k2x, k2v);
                ode_rhs(m, x + 0.5 * h * k2x, xi + 0.5 * h * k2v, k3x, k3v);
                ode_rhs(m, x + h * k3x, xi + h * k3v, k4x, k4v);
                x += h / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x);
                xi += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
                break;
        }
        if (s.renormalize && m.is_sphere()) {
            x.normalize();
            xi = sphere_tangent_project(x, xi);
            xi.normalize();
        } else if (s.renormalize) {
            xi.normalize();
        }
    }
    PhasePoint q;
    q.x = m.canonical(Point{x});
    q.xi.xi = xi;
    return q;
}

}  // namespace

double cosphere_defect(const Manifold& m, const PhasePoint& p) {
    if (m.is_sphere()) {
        Eigen::VectorXd tang = sphere_tangent_project(p.x.x, p.xi.xi);
        return std::abs(tang.norm() - 1.0) + std::abs(p.x.x.norm() - 1.0) +
               std::abs(p.xi.xi.dot(p.x.x));
    }
    return std::abs(p.xi.xi.norm() - 1.0);
}

PhasePoint flow(const Manifold& m, const PhasePoint& p, double t, const FlowSettings& s) {
    if (cosphere_defect(m, p) > kUnitTol)
        throw DomainError("flow: phase point is not on the unit cosphere");
    return s.mode == FlowMode::ClosedForm ? flow_closed_form(m, p, t) : flow_ode(m, p, t, s);
}

std::vector<PhasePoint> conormal_sample(const Submanifold& sigma, int count, std::uint64_t seed) {
    if (count < 1) throw DomainError("conormal_sample: count must be >= 1");
    const Manifold& m = sigma.manifold();
    int d = sigma.dim();
    int fiber_dim = m.dim() - d;  // unit sphere S^{fiber_dim - 1} in the normal space

    // envelope for rejection sampling against the surface density
    double jac_max = 1.0;
    if (d == 1) {
        double lo = sigma.param_lo()[0], hi = sigma.param_hi()[0];
        for (int i = 0; i <= 1024; ++i) {
            Eigen::VectorXd t(1);
            t[0] = lo + (hi - lo) * i / 1024.0;
            jac_max = std::max(jac_max, sigma.surface_jacobian(t));
        }
        jac_max *= 1.0 + 1e-9;
    }

    std::vector<PhasePoint> out(static_cast<std::size_t>(count));
    parallel_for(static_cast<std::size_t>(count), [&](std::size_t i) {
        RngStream rng(seed, i);
        // base point from dsigma restricted to the parameter box
        Eigen::VectorXd t(d);
        if (d == 1) {
            double lo = sigma.param_lo()[0], hi = sigma.param_hi()[0];
            for (;;) {
                t[0] = rng.uniform(lo, hi);
                if (rng.uniform() * jac_max <= sigma.surface_jacobian(t)) break;
            }
        }
        Point p = sigma.embed(t);
        // uniform direction on the unit sphere of the normal space
        Eigen::MatrixXd frame = sigma.normal_frame(t);
        Eigen::VectorXd coeff(fiber_dim);
        for (;;) {
            for (int a = 0; a < fiber_dim; ++a) coeff[a] = rng.normal();
            double nn = coeff.norm();
            if (nn > 1e-12) {
                coeff /= nn;
                break;
            }
        }
        PhasePoint pp;
        pp.x = p;
        pp.xi.xi = frame * coeff;
        out[i] = pp;
    });
    return out;
}

ConormalGap conormal_gap(const Manifold& m, const PhasePoint& p, const Submanifold& sigma) {
    ConormalGap gap;
    Projection pr = sigma.project(p.x);
    gap.position = pr.dist;
    if (sigma.dim() == 0) return gap;
    // tangential pairing at the foot; on the sphere first project xi
    // into the foot's tangent plane
    Eigen::VectorXd xi = p.xi.xi;
    if (m.is_sphere()) xi = xi - xi.dot(pr.foot.x) * pr.foot.x;
    Eigen::MatrixXd J = sigma.tangent(pr.param);
    Eigen::VectorXd tang(J.cols());
    for (int c = 0; c < J.cols(); ++c) tang[c] = xi.dot(J.col(c) / J.col(c).norm());
    gap.tangential = tang.norm();
    return gap;
}

namespace {

// bisect the bracket of a unimodal dip of g to width 1e-10
double refine_minimum(const std::function<double(double)>& g, double a, double b) {
    const double phi = 0.5 * (3.0 - std::sqrt(5.0));  // golden section
    double x1 = a + phi * (b - a), x2 = b - phi * (b - a);
    double f1 = g(x1), f2 = g(x2);
    while (b - a > 1e-10) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = a + phi * (b - a);
            f1 = g(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = b - phi * (b - a);
            f2 = g(x2);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

std::optional<LoopHit> detect_loop(const Manifold& m, const PhasePoint& p, const Submanifold& sigma,
                                   double T, double tol, const LoopSettings& s) {
    if (!(tol > 0)) throw ConfigError("detect_loop: tol must be positive");
    if (s.dt > std::sqrt(tol))
        throw ConfigError("detect_loop: dt too coarse relative to tol (need dt <= sqrt(tol))");
    if (!(T > s.t_min)) throw DomainError("detect_loop: T must exceed t_min");
    {
        ConormalGap g0 = conormal_gap(m, p, sigma);
        if (g0.position + g0.tangential > std::max(10.0 * tol, 1e-6))
            throw DomainError("detect_loop: start point is not on the unit conormal bundle");
    }

    auto gap_total = [&](double t) {
        PhasePoint q = flow(m, p, t, s.flow);
        return conormal_gap(m, q, sigma).total();
    };

    // scan the trajectory; a dip of the sampled gap below tol + O(dt)
    // may hide a sub-tol minimum, so every such local minimum is
    // refined before testing membership; earliest hit wins. The gap
    // slope is bounded by the unit speed plus the foot's turning rate,
    // so the promotion margin scales with the curvature bound.
    double slope_bound = 3.0;
    if (sigma.dim() == 1) {
        double lo = sigma.param_lo()[0], hi = sigma.param_hi()[0];
        double kmax = 0.0;
        for (int i = 0; i <= 128; ++i)
            kmax = std::max(kmax, std::abs(sigma.curvature(lo + (hi - lo) * i / 128.0)));
        slope_bound = 3.0 + 2.0 * kmax;
    }
    double promote = tol + slope_bound * s.dt;
    long nsteps = static_cast<long>(std::ceil((T - s.t_min) / s.dt));
    std::vector<double> ts(static_cast<std::size_t>(nsteps) + 1);
    std::vector<double> gs(static_cast<std::size_t>(nsteps) + 1);
    for (long i = 0; i <= nsteps; ++i) {
        ts[static_cast<std::size_t>(i)] = std::min(s.t_min + i * s.dt, T);
        gs[static_cast<std::size_t>(i)] = gap_total(ts[static_cast<std::size_t>(i)]);
    }
    for (long i = 0; i <= nsteps; ++i) {
        std::size_t k = static_cast<std::size_t>(i);
        double left = i > 0 ? gs[k - 1] : std::numeric_limits<double>::infinity();
        double right = i < nsteps ? gs[k + 1] : std::numeric_limits<double>::infinity();
        if (gs[k] > left || gs[k] > right || gs[k] >= promote) continue;
        double lo = i > 0 ? ts[k - 1] : ts[k];
        double hi = i < nsteps ? ts[k + 1] : ts[k];
        double t_star = lo < hi ? refine_minimum(gap_total, lo, hi) : ts[k];
        PhasePoint q = flow(m, p, t_star, s.flow);
        ConormalGap g = conormal_gap(m, q, sigma);
        if (g.position < tol && g.tangential < tol) return LoopHit{t_star, q};
    }
    return std::nullopt;
}

LoopingEstimate looping_fraction(const Manifold& m, const Submanifold& sigma, double T, int samples,
                                 double tol, std::uint64_t seed, const LoopSettings& s) {
    if (samples < 100) throw DomainError("looping_fraction: need at least 100 samples");
    std::vector<PhasePoint> starts = conormal_sample(sigma, samples, seed);
    LoopingEstimate est;
    est.samples = samples;
    est.T = T;
    est.tol = tol;
    est.seed = seed;
    est.t_returns.assign(static_cast<std::size_t>(samples),
                         std::numeric_limits<double>::quiet_NaN());
    parallel_for(static_cast<std::size_t>(samples), [&](std::size_t i) {
        auto hit = detect_loop(m, starts[i], sigma, T, tol, s);
        if (hit) est.t_returns[i] = hit->t_return;
    });
    for (double t : est.t_returns)
        if (std::isfinite(t)) ++est.loops;
    est.fraction = static_cast<double>(est.loops) / samples;
    est.std_error = std::sqrt(est.fraction * (1.0 - est.fraction) / samples);
    return est;
}

}  // namespace eigenscope
