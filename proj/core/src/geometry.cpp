#include "eigenscope/geometry.hpp"

#include <cmath>

#include "eigenscope/errors.hpp"
#include "eigenscope/submanifold.hpp"

namespace eigenscope {

namespace {

constexpr double kPi = 3.14159265358979323846;

// stereographic chart centered at (0,...,0,+-1), i.e. projected from
// the opposite pole; conformal metric 4/(1+|u|^2)^2 I; chart radius
// capped at geodesic distance pi/2 from the center (|u| <= 1)
Chart stereographic_chart(int n, bool north) {
    Chart c;
    c.name = north ? "stereo_north" : "stereo_south";
    c.dim = n;
    double sign = north ? 1.0 : -1.0;
    c.to_manifold = [n, sign](const Eigen::VectorXd& u) {
        double s = u.squaredNorm();
        Point p;
        p.x.resize(n + 1);
        p.x.head(n) = 2.0 * u / (1.0 + s);
        p.x[n] = sign * (1.0 - s) / (1.0 + s);
        return p;
    };
    c.from_manifold = [n, sign](const Point& p) {
        return Eigen::VectorXd(p.x.head(n) / (1.0 + sign * p.x[n]));
    };
    c.metric = [n](const Eigen::VectorXd& u) {
        double f = 2.0 / (1.0 + u.squaredNorm());
        return Eigen::MatrixXd(f * f * Eigen::MatrixXd::Identity(n, n));
    };
    c.valid = [](const Eigen::VectorXd& u) { return u.norm() <= 1.0 + 1e-12; };
    return c;
}

Chart torus_chart(const std::vector<double>& periods) {
    Chart c;
    int n = static_cast<int>(periods.size());
    c.name = "torus_identity";
    c.dim = n;
    c.to_manifold = [periods](const Eigen::VectorXd& u) {
        Point p;
        p.x = u;
        for (int i = 0; i < u.size(); ++i) {
            p.x[i] = std::fmod(p.x[i], periods[i]);
            if (p.x[i] < 0) p.x[i] += periods[i];
        }
        return p;
    };
    c.from_manifold = [](const Point& p) { return p.x; };
    c.metric = [n](const Eigen::VectorXd&) { return Eigen::MatrixXd(Eigen::MatrixXd::Identity(n, n)); };
    c.valid = [](const Eigen::VectorXd& u) { return u.allFinite(); };
    return c;
}

}  // namespace

Manifold Manifold::sphere(int dim) {
    if (dim < 1) throw DomainError("sphere: dim must be >= 1");
    Manifold m;
    m.kind_ = ManifoldKind::Sphere;
    m.dim_ = dim;
    m.charts_.push_back(stereographic_chart(dim, true));
    m.charts_.push_back(stereographic_chart(dim, false));
    return m;
}

Manifold Manifold::torus(std::vector<double> periods) {
    if (periods.empty()) throw DomainError("torus: need at least one period");
    for (double p : periods)
        if (!(p > 0)) throw DomainError("torus: periods must be positive");
    Manifold m;
    m.kind_ = ManifoldKind::FlatTorus;
    m.dim_ = static_cast<int>(periods.size());
    m.periods_ = std::move(periods);
    m.charts_.push_back(torus_chart(m.periods_));
    return m;
}

Manifold Manifold::torus(int dim) {
    if (dim < 1) throw DomainError("torus: dim must be >= 1");
    return torus(std::vector<double>(dim, 1.0));
}

double Manifold::volume() const {
    if (kind_ == ManifoldKind::FlatTorus) {
        double v = 1.0;
        for (double p : periods_) v *= p;
        return v;
    }
    // vol(S^n) = 2 pi^{(n+1)/2} / Gamma((n+1)/2)
    int n = dim_;
    return 2.0 * std::pow(kPi, 0.5 * (n + 1)) / std::tgamma(0.5 * (n + 1));
}

double Manifold::distance(const Point& a, const Point& b) const {
    if (kind_ == ManifoldKind::Sphere) {
        double c = a.x.dot(b.x);
        return std::acos(std::clamp(c, -1.0, 1.0));
    }
    return wrap_difference(a.x - b.x).norm();
}

Point Manifold::canonical(const Point& p) const {
    Point q = p;
    if (kind_ == ManifoldKind::Sphere) {
        q.x.normalize();
    } else {
        for (int i = 0; i < dim_; ++i) {
            q.x[i] = std::fmod(q.x[i], periods_[i]);
            if (q.x[i] < 0) q.x[i] += periods_[i];
        }
    }
    return q;
}

Eigen::VectorXd Manifold::wrap_difference(const Eigen::VectorXd& d) const {
    if (kind_ == ManifoldKind::Sphere) return d;
    Eigen::VectorXd w = d;
    for (int i = 0; i < dim_; ++i) w[i] -= periods_[i] * std::round(w[i] / periods_[i]);
    return w;
}

const Chart& Manifold::chart(int id) const {
    if (id < 0 || id >= static_cast<int>(charts_.size()))
        throw DomainError("unknown chart id " + std::to_string(id));
    return charts_[static_cast<std::size_t>(id)];
}

Manifold Manifold::with_chart(const FermiChart& fermi) const {
    Manifold m = *this;
    m.charts_.push_back(fermi.chart);
    return m;
}

Eigen::MatrixXd Manifold::metric_at(const ChartPoint& p) const {
    const Chart& c = chart(p.chart);
    if (p.u.size() != c.dim) throw DomainError("chart point has wrong dimension");
    if (!c.valid(p.u)) throw DomainError("point outside chart validity domain");
    return c.metric(p.u);
}

Point Manifold::point(const ChartPoint& p) const {
    const Chart& c = chart(p.chart);
    if (!c.valid(p.u)) throw DomainError("point outside chart validity domain");
    return c.to_manifold(p.u);
}

ChartPoint Manifold::chart_point(const Point& p) const {
    ChartPoint cp;
    if (kind_ == ManifoldKind::Sphere) {
        cp.chart = p.x[dim_] >= 0.0 ? 0 : 1;
    } else {
        cp.chart = 0;
    }
    cp.u = charts_[static_cast<std::size_t>(cp.chart)].from_manifold(canonical(p));
    return cp;
}

double sphere_eigenvalue(int j, int n) {
    if (j < 0) throw DomainError("sphere_eigenvalue: j must be >= 0");
    if (n < 1) throw DomainError("sphere_eigenvalue: n must be >= 1");
    return std::sqrt(static_cast<double>(j) * (j + n - 1));
}

long sphere_multiplicity(int j, int n) {
    if (j < 0) throw DomainError("sphere_multiplicity: j must be >= 0");
    // harmonics of degree j on S^n = homogeneous polynomials in R^{n+1}
    // of degree j minus those divisible by |x|^2:
    // C(j + n, n) - C(j - 2 + n, n)
    auto binom = [](long a, long b) {
        long r = 1;
        for (long i = 1; i <= b; ++i) r = r * (a - b + i) / i;  // exact stepwise
        return r;
    };
    long total = binom(j + n, n);
    if (j >= 2) total -= binom(j - 2 + n, n);
    return total;
}

double principal_symbol(const Chart& chart, const Eigen::VectorXd& u, const Eigen::VectorXd& xi) {
    if (!xi.allFinite()) throw DomainError("principal_symbol: covector must be finite");
    if (!chart.valid(u)) throw DomainError("principal_symbol: point outside chart domain");
    Eigen::MatrixXd g = chart.metric(u);
    Eigen::VectorXd y = g.ldlt().solve(xi);
    double p2 = xi.dot(y);
    return p2 > 0 ? std::sqrt(p2) : 0.0;
}

double principal_symbol(const Manifold& m, const ChartPoint& x, const Eigen::VectorXd& xi) {
    return principal_symbol(m.chart(x.chart), x.u, xi);
}

// ---------------------------------------------------------------------------
// Fermi charts for the catalog submanifolds. In each chart (u', ubar),
// (u', 0) parametrizes Sigma by surface measure and the metric there has
// the block form [[*, 0], [0, I]].
// ---------------------------------------------------------------------------

namespace {

FermiChart fermi_sphere_equator(const Manifold& m) {
    if (m.dim() != 2) throw DomainError("equator Fermi chart shipped for S^2 only");
    FermiChart f;
    f.dim_tangent = 1;
    f.dim_normal = 1;
    f.normal_radius = kPi / 2;  // focal points at the poles
    Chart c;
    c.name = "fermi_equator";
    c.dim = 2;
    c.to_manifold = [](const Eigen::VectorXd& w) {
        double u = w[0], v = w[1];
        Point p;
        p.x.resize(3);
        p.x << std::cos(v) * std::cos(u), std::cos(v) * std::sin(u), std::sin(v);
        return p;
    };
    c.from_manifold = [](const Point& p) {
        Eigen::VectorXd w(2);
        w[0] = std::atan2(p.x[1], p.x[0]);
        if (w[0] < 0) w[0] += 2 * kPi;
        w[1] = std::asin(std::clamp(p.x[2], -1.0, 1.0));
        return w;
    };
    c.metric = [](const Eigen::VectorXd& w) {
        Eigen::MatrixXd g = Eigen::MatrixXd::Identity(2, 2);
        g(0, 0) = std::cos(w[1]) * std::cos(w[1]);
        return g;
    };
    c.valid = [](const Eigen::VectorXd& w) { return std::abs(w[1]) < kPi / 2; };
    f.chart = c;
    return f;
}

FermiChart fermi_sphere_latitude(const Manifold& m, double colat) {
    if (m.dim() != 2) throw DomainError("latitude Fermi chart shipped for S^2 only");
    if (!(colat > 0 && colat < kPi)) throw DomainError("colatitude must lie in (0, pi)");
    FermiChart f;
    f.dim_tangent = 1;
    f.dim_normal = 1;
    f.normal_radius = std::min(colat, kPi - colat);
    double s0 = std::sin(colat);
    Chart c;
    c.name = "fermi_latitude";
    c.dim = 2;
    // u is arc length along the circle, +v moves toward the north pole
    c.to_manifold = [colat, s0](const Eigen::VectorXd& w) {
        double phi = w[0] / s0;
        double theta = colat - w[1];
        Point p;
        p.x.resize(3);
        p.x << std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta);
        return p;
    };
    c.from_manifold = [colat, s0](const Point& p) {
        Eigen::VectorXd w(2);
        double phi = std::atan2(p.x[1], p.x[0]);
        if (phi < 0) phi += 2 * kPi;
        w[0] = s0 * phi;
        w[1] = colat - std::acos(std::clamp(p.x[2], -1.0, 1.0));
        return w;
    };
    c.metric = [colat, s0](const Eigen::VectorXd& w) {
        double st = std::sin(colat - w[1]);
        Eigen::MatrixXd g = Eigen::MatrixXd::Identity(2, 2);
        g(0, 0) = (st * st) / (s0 * s0);
        return g;
    };
    c.valid = [colat](const Eigen::VectorXd& w) {
        double theta = colat - w[1];
        return theta > 0 && theta < kPi;
    };
    f.chart = c;
    return f;
}

FermiChart fermi_sphere_point(const Manifold& m) {
    int n = m.dim();
    FermiChart f;
    f.dim_tangent = 0;
    f.dim_normal = n;
    f.normal_radius = kPi / 2;
    Chart c;
    c.name = "fermi_point";
    c.dim = n;
    // geodesic normal coordinates at the north pole
    c.to_manifold = [n](const Eigen::VectorXd& v) {
        double r = v.norm();
        Point p;
        p.x = Eigen::VectorXd::Zero(n + 1);
        double sinc = r < 1e-8 ? 1.0 - r * r / 6.0 : std::sin(r) / r;
        p.x.head(n) = sinc * v;
        p.x[n] = std::cos(r);
        return p;
    };
    c.from_manifold = [n](const Point& p) {
        double r = std::acos(std::clamp(p.x[n], -1.0, 1.0));
        double tn = p.x.head(n).norm();
        if (tn < 1e-300) return Eigen::VectorXd(Eigen::VectorXd::Zero(n));
        return Eigen::VectorXd((r / tn) * p.x.head(n));
    };
    c.metric = [n](const Eigen::VectorXd& v) {
        double r = v.norm();
        double s = r < 1e-6 ? 1.0 - r * r / 3.0 : (std::sin(r) / r) * (std::sin(r) / r);
        Eigen::MatrixXd g = s * Eigen::MatrixXd::Identity(n, n);
        if (r > 1e-300) {
            Eigen::VectorXd vhat = v / r;
            g += (1.0 - s) * vhat * vhat.transpose();
        }
        return g;
    };
    c.valid = [](const Eigen::VectorXd& v) { return v.norm() <= kPi / 2; };
    f.chart = c;
    return f;
}

FermiChart fermi_torus_line(const Manifold& m) {
    int n = m.dim();
    auto periods = m.periods();
    FermiChart f;
    f.dim_tangent = 1;
    f.dim_normal = n - 1;
    double rad = periods[1] / 2;
    for (int i = 2; i < n; ++i) rad = std::min(rad, periods[i] / 2);
    f.normal_radius = rad;
    Chart c;
    c.name = "fermi_line";
    c.dim = n;
    c.to_manifold = [m](const Eigen::VectorXd& w) { return m.canonical(Point{w}); };
    c.from_manifold = [m](const Point& p) {
        Eigen::VectorXd w = p.x;
        auto per = m.periods();
        for (int i = 1; i < w.size(); ++i) {
            w[i] = std::fmod(w[i], per[i]);
            if (w[i] < 0) w[i] += per[i];
            if (w[i] > per[i] / 2) w[i] -= per[i];
        }
        return w;
    };
    c.metric = [n](const Eigen::VectorXd&) { return Eigen::MatrixXd(Eigen::MatrixXd::Identity(n, n)); };
    c.valid = [rad](const Eigen::VectorXd& w) { return w.tail(w.size() - 1).lpNorm<Eigen::Infinity>() < rad; };
    f.chart = c;
    return f;
}

FermiChart fermi_torus_point(const Manifold& m, const Eigen::VectorXd& base) {
    int n = m.dim();
    auto periods = m.periods();
    FermiChart f;
    f.dim_tangent = 0;
    f.dim_normal = n;
    double rad = periods[0] / 2;
    for (int i = 1; i < n; ++i) rad = std::min(rad, periods[i] / 2);
    f.normal_radius = rad;
    Chart c;
    c.name = "fermi_torus_point";
    c.dim = n;
    c.to_manifold = [m, base](const Eigen::VectorXd& v) { return m.canonical(Point{base + v}); };
    c.from_manifold = [m, base](const Point& p) { return m.wrap_difference(p.x - base); };
    c.metric = [n](const Eigen::VectorXd&) { return Eigen::MatrixXd(Eigen::MatrixXd::Identity(n, n)); };
    c.valid = [rad](const Eigen::VectorXd& v) { return v.lpNorm<Eigen::Infinity>() < rad; };
    f.chart = c;
    return f;
}

// Fermi coordinates along a plane curve in the flat torus:
// (u, v) -> gamma(t(u)) + v N(t(u)) where u is arc length and N the
// unit normal; the metric is diag((1 - kappa(u) v)^2, 1).
FermiChart fermi_sine_arc(const Manifold& m, const Submanifold& sigma) {
    if (m.dim() != 2) throw DomainError("sine arc Fermi chart shipped for T^2 only");
    double t_lo = sigma.param_lo()[0], t_hi = sigma.param_hi()[0];

    // cumulative arc length on a fine grid, Newton-refined inverse
    const int kGrid = 4096;
    auto table = std::make_shared<std::vector<double>>(kGrid + 1, 0.0);
    auto speed = [sigma](double t) {
        Eigen::VectorXd tv(1);
        tv[0] = t;
        return sigma.tangent(tv).col(0).norm();
    };
    double h = (t_hi - t_lo) / kGrid;
    for (int i = 1; i <= kGrid; ++i) {
        double a = t_lo + (i - 1) * h;
        // Simpson on each subinterval
        (*table)[i] = (*table)[i - 1] + h / 6.0 * (speed(a) + 4.0 * speed(a + h / 2) + speed(a + h));
    }
    double total_len = table->back();
    auto t_of_u = [table, speed, t_lo, t_hi, h](double u) {
        auto it = std::lower_bound(table->begin(), table->end(), u);
        std::size_t i = it == table->begin() ? 0 : static_cast<std::size_t>(it - table->begin()) - 1;
        double t = t_lo + (static_cast<double>(i) + 0.5) * h;
        for (int k = 0; k < 30; ++k) {
            // s(t) - u via local Simpson from the table anchor
            double a = t_lo + static_cast<double>(i) * h;
            double seg = (t - a) / 6.0 * (speed(a) + 4.0 * speed(0.5 * (a + t)) + speed(t));
            double resid = (*table)[i] + seg - u;
            double dt = resid / speed(t);
            t -= dt;
            t = std::clamp(t, t_lo, t_hi);
            if (std::abs(dt) < 1e-14) break;
        }
        return t;
    };

    double kmax = 0.0;
    for (int i = 0; i <= 256; ++i)
        kmax = std::max(kmax, std::abs(sigma.curvature(t_lo + (t_hi - t_lo) * i / 256.0)));
    FermiChart f;
    f.dim_tangent = 1;
    f.dim_normal = 1;
    f.normal_radius = kmax > 0 ? 0.8 / kmax : 0.25;

    auto curve_point = [sigma](double t) {
        Eigen::VectorXd tv(1);
        tv[0] = t;
        return sigma.embed(tv);
    };
    auto unit_normal = [sigma](double t) {
        Eigen::VectorXd tv(1);
        tv[0] = t;
        Eigen::VectorXd d = sigma.tangent(tv).col(0);
        Eigen::VectorXd nrm(2);
        nrm << -d[1], d[0];
        return Eigen::VectorXd(nrm / nrm.norm());
    };

    Chart c;
    c.name = "fermi_sine_arc";
    c.dim = 2;
    double rad = f.normal_radius;
    c.to_manifold = [m, t_of_u, curve_point, unit_normal](const Eigen::VectorXd& w) {
        double t = t_of_u(w[0]);
        Point p = curve_point(t);
        p.x += w[1] * unit_normal(t);
        return m.canonical(p);
    };
    c.from_manifold = [sigma, table, t_lo, h, unit_normal](const Point& p) {
        Projection pr = sigma.project(p);
        double t = pr.param[0];
        std::size_t i = static_cast<std::size_t>(std::clamp((t - t_lo) / h, 0.0, double(kGrid)));
        double a = t_lo + static_cast<double>(i) * h;
        auto spd = [&sigma](double s) {
            Eigen::VectorXd q(1);
            q[0] = s;
            return sigma.tangent(q).col(0).norm();
        };
        double u = (*table)[i] + (t - a) / 6.0 * (spd(a) + 4.0 * spd(0.5 * (a + t)) + spd(t));
        Eigen::VectorXd diff = sigma.manifold().wrap_difference(p.x - pr.foot.x);
        double v = diff.dot(unit_normal(t));
        Eigen::VectorXd w(2);
        w << u, v;
        return w;
    };
    c.metric = [sigma, t_of_u](const Eigen::VectorXd& w) {
        double kap = sigma.curvature(t_of_u(w[0]));
        Eigen::MatrixXd g = Eigen::MatrixXd::Identity(2, 2);
        double a = 1.0 - kap * w[1];
        g(0, 0) = a * a;
        return g;
    };
    c.valid = [rad, total_len](const Eigen::VectorXd& w) {
        return w[0] >= 0 && w[0] <= total_len && std::abs(w[1]) < rad;
    };
    f.chart = c;
    return f;
}

}  // namespace

FermiChart fermi_chart(const Manifold& m, const Submanifold& sigma) {
    if (sigma.manifold().kind() != m.kind() || sigma.manifold().dim() != m.dim())
        throw DomainError("fermi_chart: submanifold does not live on this manifold");
    FermiChart f;
    switch (sigma.catalog_kind()) {
        case Submanifold::Kind::SphereEquator: f = fermi_sphere_equator(m); break;
        case Submanifold::Kind::SphereLatitude: {
            Eigen::VectorXd t0(1);
            t0[0] = sigma.param_lo()[0];
            double colat = std::acos(std::clamp(sigma.embed(t0).x[2], -1.0, 1.0));
            f = fermi_sphere_latitude(m, colat);
            break;
        }
        case Submanifold::Kind::SpherePoint: f = fermi_sphere_point(m); break;
        case Submanifold::Kind::TorusLine: f = fermi_torus_line(m); break;
        case Submanifold::Kind::TorusSineArc: f = fermi_sine_arc(m, sigma); break;
        case Submanifold::Kind::TorusPoint: {
            Eigen::VectorXd none(0);
            f = fermi_torus_point(m, sigma.embed(none).x);
            break;
        }
    }
    f.base = std::make_shared<Submanifold>(sigma);
    return f;
}

}  // namespace eigenscope
