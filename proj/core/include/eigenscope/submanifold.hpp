#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>

#include "eigenscope/geometry.hpp"
#include "eigenscope/quadrature.hpp"

namespace eigenscope {

// Parameter-space quadrature for d mu = h dsigma: weights already
// include the surface Jacobian, so sum_i w_i h(t_i) f(emb(t_i))
// approximates the integral of f against d mu.
struct SurfaceRule {
    Eigen::MatrixXd nodes;    // d x N parameter coordinates (0 x 1 for a point)
    Eigen::VectorXd weights;  // N surface weights
};

struct Projection {
    Eigen::VectorXd param;  // nearest parameter
    Point foot;             // embedded nearest point
    double dist;            // geodesic distance from query to foot
};

// Parametrized d-dimensional submanifold of a model manifold with a
// smooth density h (compactly supported on the parameter box) and a
// quadrature rule honoring the surface measure.
//
// Catalog: sphere equator, latitude circle, point; torus closed
// geodesic {x2 = 0}, sine arc {(t, eps sin 2 pi t)}, point.
class Submanifold {
public:
    enum class Kind { SphereEquator, SphereLatitude, SpherePoint, TorusLine, TorusSineArc, TorusPoint };

    static Submanifold sphere_equator(const Manifold& m, double lambda_cap = 100.0);
    static Submanifold sphere_latitude(const Manifold& m, double colatitude, double lambda_cap = 100.0);
    static Submanifold sphere_point(const Manifold& m);  // north pole
    static Submanifold torus_line(const Manifold& m, double lambda_cap = 100.0);
    static Submanifold torus_sine_arc(const Manifold& m, double epsilon = 0.15, double lambda_cap = 100.0);
    static Submanifold torus_point(const Manifold& m, const Eigen::VectorXd& base);
    static Submanifold torus_point(const Manifold& m);  // center of the fundamental domain

    // catalog lookup used by the experiment driver; params are the
    // knobs above ("colatitude", "epsilon", "base")
    static Submanifold by_name(const Manifold& m, const std::string& name,
                               double lambda_cap = 100.0,
                               std::optional<double> colatitude = std::nullopt,
                               std::optional<double> epsilon = std::nullopt);

    Kind catalog_kind() const { return kind_; }
    const std::string& name() const { return name_; }
    const Manifold& manifold() const { return manifold_; }
    int dim() const { return d_; }
    int codim() const { return manifold_.dim() - d_; }
    bool closed() const { return closed_; }
    const Eigen::VectorXd& param_lo() const { return lo_; }
    const Eigen::VectorXd& param_hi() const { return hi_; }
    double param_diameter() const { return d_ == 0 ? 0.0 : (hi_ - lo_).norm(); }

    Point embed(const Eigen::VectorXd& t) const { return embed_(t); }
    // columns are d(embed)/dt_i in ambient components
    Eigen::MatrixXd tangent(const Eigen::VectorXd& t) const { return tangent_(t); }
    // surface Jacobian sqrt(det(J^T J)) restricted to the tangent space
    double surface_jacobian(const Eigen::VectorXd& t) const;
    // orthonormal basis of the normal space inside T_p M, ambient components
    Eigen::MatrixXd normal_frame(const Eigen::VectorXd& t) const;

    // the density h (1 for closed catalog members, plateau bump on
    // open arcs); support equals the closed parameter box
    double density(const Eigen::VectorXd& t) const { return density_(t); }

    const SurfaceRule& rule() const { return rule_; }
    int nodes_per_dim() const { return nodes_per_dim_; }
    double lambda_cap() const { return lambda_cap_; }
    // copy with the node count per dimension scaled by the given factor
    Submanifold with_node_factor(double factor) const;

    // total measure mu(Sigma) = integral of h dsigma
    double measure() const;

    // nearest-point projection by parameter-space Newton seeded from a
    // coarse grid scan; distances are geodesic in M
    Projection project(const Point& q) const;

    // signed curvature for the plane-curve catalog entries (sine arc)
    double curvature(double t) const;

private:
    Submanifold(const Manifold& m) : manifold_(m) {}
    void build_rule();

    Manifold manifold_;
    Kind kind_ = Kind::SphereEquator;
    std::string name_;
    int d_ = 1;
    bool closed_ = true;
    double lambda_cap_ = 100.0;
    int nodes_per_dim_ = 64;
    Eigen::VectorXd lo_, hi_;
    std::function<Point(const Eigen::VectorXd&)> embed_;
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> tangent_;
    std::function<double(const Eigen::VectorXd&)> density_;
    // closed-form nearest parameter, set for the catalog entries that
    // have one; the generic path falls back to a cached grid scan
    std::function<double(const Point&)> analytic_project_;
    SurfaceRule rule_;
    Eigen::VectorXd scan_params_;   // coarse projection grid (d = 1)
    Eigen::MatrixXd scan_points_;   // embedded grid, ambient columns
    double epsilon_ = 0.15;      // sine arc amplitude
    double colatitude_ = M_PI / 2;
};

// Minimum admissible nodes per parameter dimension for resolving
// frequency lambda on a domain of the given diameter:
// 12 nodes per unit of lambda * diameter / (2 pi), at least 64.
int required_nodes_per_dim(double lambda, double domain_diameter);

}  // namespace eigenscope
