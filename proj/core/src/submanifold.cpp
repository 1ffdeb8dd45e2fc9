#include "eigenscope/submanifold.hpp"

#include <cmath>

#include "eigenscope/errors.hpp"

namespace eigenscope {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 6.28318530717958647692;
}  // namespace

int required_nodes_per_dim(double lambda, double domain_diameter) {
    double per_wave = 12.0 * lambda * domain_diameter / kTwoPi;
    int n = static_cast<int>(std::ceil(per_wave));
    return std::max(64, n);
}

double Submanifold::surface_jacobian(const Eigen::VectorXd& t) const {
    if (d_ == 0) return 1.0;
    Eigen::MatrixXd J = tangent_(t);
    if (d_ == 1) return J.col(0).norm();
    Eigen::MatrixXd G = J.transpose() * J;
    return std::sqrt(G.determinant());
}

Eigen::MatrixXd Submanifold::normal_frame(const Eigen::VectorXd& t) const {
    Point p = embed_(t);
    int na = manifold_.ambient_dim();
    // basis of T_p M in ambient components
    Eigen::MatrixXd tangent_space;
    if (manifold_.is_sphere()) {
        // complement of p inside R^{n+1}
        Eigen::FullPivHouseholderQR<Eigen::MatrixXd> qr(p.x);
        Eigen::MatrixXd Q = qr.matrixQ();
        tangent_space = Q.rightCols(na - 1);
    } else {
        tangent_space = Eigen::MatrixXd::Identity(na, na);
    }
    if (d_ == 0) return tangent_space;

    // Gram-Schmidt the Sigma-tangents away from the T_p M basis
    Eigen::MatrixXd J = tangent_(t);
    Eigen::MatrixXd T(na, d_);
    for (int i = 0; i < d_; ++i) {
        Eigen::VectorXd v = J.col(i);
        for (int k = 0; k < i; ++k) v -= T.col(k).dot(v) * T.col(k);
        T.col(i) = v / v.norm();
    }
    int nn = manifold_.dim() - d_;
    Eigen::MatrixXd N(na, nn);
    int filled = 0;
    for (int c = 0; c < tangent_space.cols() && filled < nn; ++c) {
        Eigen::VectorXd v = tangent_space.col(c);
        for (int k = 0; k < d_; ++k) v -= T.col(k).dot(v) * T.col(k);
        for (int k = 0; k < filled; ++k) v -= N.col(k).dot(v) * N.col(k);
        double nv = v.norm();
        if (nv > 1e-8) {
            N.col(filled++) = v / nv;
        }
    }
    if (filled != nn) throw NumericError("normal_frame: frame construction failed");
    return N;
}

void Submanifold::build_rule() {
    if (d_ == 0) {
        rule_.nodes.resize(0, 1);
        rule_.weights.resize(1);
        rule_.weights[0] = 1.0;
        nodes_per_dim_ = 1;
        return;
    }
    // coarse grid for projection seeding (embedded once, reused per query)
    {
        const int kScan = 96;
        scan_params_.resize(kScan);
        scan_points_.resize(manifold_.ambient_dim(), kScan);
        double width = hi_[0] - lo_[0];
        for (int i = 0; i < kScan; ++i) {
            double t = lo_[0] + width * (closed_ ? (i + 0.0) / kScan : (i + 0.5) / kScan);
            scan_params_[i] = t;
            Eigen::VectorXd tv(1);
            tv[0] = t;
            scan_points_.col(i) = embed_(tv).x;
        }
    }
    nodes_per_dim_ = std::max(nodes_per_dim_, required_nodes_per_dim(lambda_cap_, param_diameter()));
    GaussRule g;
    if (closed_) {
        g = periodic_trapezoid(lo_[0], hi_[0], nodes_per_dim_);
    } else {
        int order = 16;
        int panels = (nodes_per_dim_ + order - 1) / order;
        g = composite_gauss(lo_[0], hi_[0], panels, order);
    }
    int n = static_cast<int>(g.nodes.size());
    rule_.nodes.resize(1, n);
    rule_.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        rule_.nodes(0, i) = g.nodes[i];
        Eigen::VectorXd t(1);
        t[0] = g.nodes[i];
        rule_.weights[i] = g.weights[i] * surface_jacobian(t);
    }
}

Submanifold Submanifold::with_node_factor(double factor) const {
    Submanifold s = *this;
    s.nodes_per_dim_ = std::max(1, static_cast<int>(std::ceil(nodes_per_dim_ * factor)));
    if (s.d_ > 0) {
        GaussRule g;
        if (s.closed_) {
            g = periodic_trapezoid(s.lo_[0], s.hi_[0], s.nodes_per_dim_);
        } else {
            int order = 16;
            int panels = (s.nodes_per_dim_ + order - 1) / order;
            g = composite_gauss(s.lo_[0], s.hi_[0], panels, order);
        }
        int n = static_cast<int>(g.nodes.size());
        s.rule_.nodes.resize(1, n);
        s.rule_.weights.resize(n);
        for (int i = 0; i < n; ++i) {
            s.rule_.nodes(0, i) = g.nodes[i];
            Eigen::VectorXd t(1);
            t[0] = g.nodes[i];
            s.rule_.weights[i] = g.weights[i] * s.surface_jacobian(t);
        }
    }
    return s;
}

double Submanifold::measure() const {
    double total = 0.0;
    for (int i = 0; i < rule_.weights.size(); ++i)
        total += rule_.weights[i] * density_(rule_.nodes.col(i));
    return total;
}

double Submanifold::curvature(double t) const {
    if (kind_ != Kind::TorusSineArc) return 0.0;
    // gamma(t) = (t, eps sin 2 pi t):
    // kappa = -4 pi^2 eps sin(2 pi t) / (1 + (2 pi eps cos 2 pi t)^2)^{3/2}
    double c = std::cos(kTwoPi * t), s = std::sin(kTwoPi * t);
    double yp = kTwoPi * epsilon_ * c;
    double ypp = -kTwoPi * kTwoPi * epsilon_ * s;
    double speed2 = 1.0 + yp * yp;
    return ypp / std::pow(speed2, 1.5);
}

Projection Submanifold::project(const Point& q) const {
    Projection pr;
    if (d_ == 0) {
        Eigen::VectorXd none(0);
        pr.param = none;
        pr.foot = embed_(none);
        pr.dist = manifold_.distance(q, pr.foot);
        return pr;
    }
    if (analytic_project_) {
        Eigen::VectorXd tv(1);
        tv[0] = analytic_project_(q);
        pr.param = tv;
        pr.foot = embed_(tv);
        pr.dist = manifold_.distance(q, pr.foot);
        return pr;
    }
    // cached coarse scan, then Newton on f(t) = |wrap(gamma(t) - q)|^2 / 2
    auto diff_at = [&](double t) {
        Eigen::VectorXd tv(1);
        tv[0] = t;
        return manifold_.wrap_difference(embed_(tv).x - q.x);
    };
    double best_t = lo_[0], best_f = std::numeric_limits<double>::infinity();
    double width = hi_[0] - lo_[0];
    for (int i = 0; i < scan_params_.size(); ++i) {
        double f = manifold_.wrap_difference(scan_points_.col(i) - q.x).squaredNorm();
        if (f < best_f) {
            best_f = f;
            best_t = scan_params_[i];
        }
    }
    double t = best_t;
    for (int it = 0; it < 40; ++it) {
        Eigen::VectorXd tv(1);
        tv[0] = t;
        Eigen::VectorXd d = diff_at(t);
        Eigen::VectorXd g1 = tangent_(tv).col(0);
        double fp = g1.dot(d);
        // second derivative of the embedding by small central difference
        double hstep = 1e-6 * std::max(1.0, width);
        Eigen::VectorXd ta(1), tb(1);
        ta[0] = t + hstep;
        tb[0] = t - hstep;
        Eigen::VectorXd g2 = (tangent_(ta).col(0) - tangent_(tb).col(0)) / (2 * hstep);
        double fpp = g2.dot(d) + g1.squaredNorm();
        if (fpp <= 0) break;
        double step = fp / fpp;
        t -= step;
        if (closed_) {
            t = lo_[0] + std::fmod(t - lo_[0], width);
            if (t < lo_[0]) t += width;
        } else {
            t = std::clamp(t, lo_[0], hi_[0]);
        }
        if (std::abs(step) < 1e-14 * std::max(1.0, width)) break;
    }
    Eigen::VectorXd tv(1);
    tv[0] = t;
    pr.param = tv;
    pr.foot = embed_(tv);
    pr.dist = manifold_.distance(q, pr.foot);
    return pr;
}

// ---------------------------------------------------------------------------
// catalog
// ---------------------------------------------------------------------------

Submanifold Submanifold::sphere_equator(const Manifold& m, double lambda_cap) {
    if (!m.is_sphere() || m.dim() != 2) throw DomainError("equator: needs the S^2 model");
    Submanifold s(m);
    s.kind_ = Kind::SphereEquator;
    s.name_ = "equator";
    s.d_ = 1;
    s.closed_ = true;
    s.lambda_cap_ = lambda_cap;
    s.lo_.resize(1);
    s.hi_.resize(1);
    s.lo_[0] = 0.0;
    s.hi_[0] = kTwoPi;
    s.embed_ = [](const Eigen::VectorXd& t) {
        Point p;
        p.x.resize(3);
        p.x << std::cos(t[0]), std::sin(t[0]), 0.0;
        return p;
    };
    s.tangent_ = [](const Eigen::VectorXd& t) {
        Eigen::MatrixXd J(3, 1);
        J << -std::sin(t[0]), std::cos(t[0]), 0.0;
        return J;
    };
    s.density_ = [](const Eigen::VectorXd&) { return 1.0; };
    s.analytic_project_ = [](const Point& q) {
        double t = std::atan2(q.x[1], q.x[0]);
        return t < 0 ? t + kTwoPi : t;
    };
    s.build_rule();
    return s;
}

Submanifold Submanifold::sphere_latitude(const Manifold& m, double colatitude, double lambda_cap) {
    if (!m.is_sphere() || m.dim() != 2) throw DomainError("latitude: needs the S^2 model");
    if (!(colatitude > 0 && colatitude < kPi)) throw DomainError("latitude: colatitude must lie in (0, pi)");
    Submanifold s(m);
    s.kind_ = Kind::SphereLatitude;
    s.name_ = "latitude";
    s.d_ = 1;
    s.closed_ = true;
    s.lambda_cap_ = lambda_cap;
    s.colatitude_ = colatitude;
    double s0 = std::sin(colatitude), c0 = std::cos(colatitude);
    s.lo_.resize(1);
    s.hi_.resize(1);
    s.lo_[0] = 0.0;
    s.hi_[0] = kTwoPi * s0;  // parametrized by arc length
    s.embed_ = [s0, c0](const Eigen::VectorXd& t) {
        double phi = t[0] / s0;
        Point p;
        p.x.resize(3);
        p.x << s0 * std::cos(phi), s0 * std::sin(phi), c0;
        return p;
    };
    s.tangent_ = [s0](const Eigen::VectorXd& t) {
        double phi = t[0] / s0;
        Eigen::MatrixXd J(3, 1);
        J << -std::sin(phi), std::cos(phi), 0.0;
        return J;
    };
    s.density_ = [](const Eigen::VectorXd&) { return 1.0; };
    s.analytic_project_ = [s0](const Point& q) {
        double phi = std::atan2(q.x[1], q.x[0]);
        if (phi < 0) phi += kTwoPi;
        return s0 * phi;
    };
    s.build_rule();
    return s;
}

Submanifold Submanifold::sphere_point(const Manifold& m) {
    if (!m.is_sphere()) throw DomainError("sphere point: needs a sphere model");
    Submanifold s(m);
    s.kind_ = Kind::SpherePoint;
    s.name_ = "point";
    s.d_ = 0;
    s.closed_ = false;
    int na = m.ambient_dim();
    s.lo_.resize(0);
    s.hi_.resize(0);
    s.embed_ = [na](const Eigen::VectorXd&) {
        Point p;
        p.x = Eigen::VectorXd::Zero(na);
        p.x[na - 1] = 1.0;  // north pole
        return p;
    };
    s.tangent_ = [na](const Eigen::VectorXd&) { return Eigen::MatrixXd(na, 0); };
    s.density_ = [](const Eigen::VectorXd&) { return 1.0; };
    s.build_rule();
    return s;
}

Submanifold Submanifold::torus_line(const Manifold& m, double lambda_cap) {
    if (m.is_sphere()) throw DomainError("line: needs a torus model");
    Submanifold s(m);
    s.kind_ = Kind::TorusLine;
    s.name_ = "line";
    s.d_ = 1;
    s.closed_ = true;
    s.lambda_cap_ = lambda_cap;
    int n = m.dim();
    double p0 = m.periods()[0];
    s.lo_.resize(1);
    s.hi_.resize(1);
    s.lo_[0] = 0.0;
    s.hi_[0] = p0;
    s.embed_ = [n](const Eigen::VectorXd& t) {
        Point p;
        p.x = Eigen::VectorXd::Zero(n);
        p.x[0] = t[0];
        return p;
    };
    s.tangent_ = [n](const Eigen::VectorXd&) {
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, 1);
        J(0, 0) = 1.0;
        return J;
    };
    s.density_ = [](const Eigen::VectorXd&) { return 1.0; };
    s.analytic_project_ = [p0](const Point& q) {
        double t = std::fmod(q.x[0], p0);
        return t < 0 ? t + p0 : t;
    };
    s.build_rule();
    return s;
}

Submanifold Submanifold::torus_sine_arc(const Manifold& m, double epsilon, double lambda_cap) {
    if (m.is_sphere() || m.dim() != 2) throw DomainError("sine arc: needs the T^2 model");
    Submanifold s(m);
    s.kind_ = Kind::TorusSineArc;
    s.name_ = "sine_arc";
    s.d_ = 1;
    s.closed_ = false;
    s.lambda_cap_ = lambda_cap;
    s.epsilon_ = epsilon;
    s.lo_.resize(1);
    s.hi_.resize(1);
    s.lo_[0] = 0.1;
    s.hi_[0] = 0.9;
    s.embed_ = [epsilon](const Eigen::VectorXd& t) {
        Point p;
        p.x.resize(2);
        p.x << t[0], epsilon * std::sin(kTwoPi * t[0]);
        return p;
    };
    s.tangent_ = [epsilon](const Eigen::VectorXd& t) {
        Eigen::MatrixXd J(2, 1);
        J << 1.0, kTwoPi * epsilon * std::cos(kTwoPi * t[0]);
        return J;
    };
    double lo = s.lo_[0], hi = s.hi_[0];
    s.density_ = [lo, hi](const Eigen::VectorXd& t) { return plateau_bump(t[0], lo, hi); };
    s.build_rule();
    return s;
}

Submanifold Submanifold::torus_point(const Manifold& m, const Eigen::VectorXd& base) {
    if (m.is_sphere()) throw DomainError("torus point: needs a torus model");
    if (base.size() != m.dim()) throw DomainError("torus point: base has wrong dimension");
    Submanifold s(m);
    s.kind_ = Kind::TorusPoint;
    s.name_ = "point";
    s.d_ = 0;
    s.closed_ = false;
    s.lo_.resize(0);
    s.hi_.resize(0);
    Eigen::VectorXd b = m.canonical(Point{base}).x;
    s.embed_ = [b](const Eigen::VectorXd&) { return Point{b}; };
    int n = m.dim();
    s.tangent_ = [n](const Eigen::VectorXd&) { return Eigen::MatrixXd(n, 0); };
    s.density_ = [](const Eigen::VectorXd&) { return 1.0; };
    s.build_rule();
    return s;
}

Submanifold Submanifold::torus_point(const Manifold& m) {
    Eigen::VectorXd base(m.dim());
    for (int i = 0; i < m.dim(); ++i) base[i] = 0.5 * m.periods()[static_cast<std::size_t>(i)];
    return torus_point(m, base);
}

Submanifold Submanifold::by_name(const Manifold& m, const std::string& name, double lambda_cap,
                                 std::optional<double> colatitude, std::optional<double> epsilon) {
    if (name == "equator") return sphere_equator(m, lambda_cap);
    if (name == "latitude") return sphere_latitude(m, colatitude.value_or(kPi / 3), lambda_cap);
    if (name == "point") return m.is_sphere() ? sphere_point(m) : torus_point(m);
    if (name == "line") return torus_line(m, lambda_cap);
    if (name == "sine_arc") return torus_sine_arc(m, epsilon.value_or(0.15), lambda_cap);
    throw ConfigError("unknown submanifold '" + name +
                      "' (catalog: equator, latitude, point, line, sine_arc)");
}

}  // namespace eigenscope
