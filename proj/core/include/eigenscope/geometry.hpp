#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace eigenscope {

class Submanifold;

enum class ManifoldKind { Sphere, FlatTorus };

// Point on the model manifold in its canonical representation:
// unit vector in R^{n+1} for the round sphere S^n, fundamental-domain
// coordinates in R^n for the flat torus.
struct Point {
    Eigen::VectorXd x;
};

// Covector in the same ambient components. On the sphere the round
// metric identifies covectors with tangent vectors (<x, xi> = 0); on
// the torus the flat metric is the identity.
struct Covector {
    Eigen::VectorXd xi;
};

// Chart coordinates: an id into the manifold's chart table plus
// coordinates in that chart.
struct ChartPoint {
    int chart = 0;
    Eigen::VectorXd u;
};

// A coordinate chart as a bundle of closures: forward/inverse maps,
// the metric tensor in chart coordinates, and a validity predicate.
struct Chart {
    std::string name;
    int dim = 0;
    std::function<Point(const Eigen::VectorXd&)> to_manifold;
    std::function<Eigen::VectorXd(const Point&)> from_manifold;
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> metric;
    std::function<bool(const Eigen::VectorXd&)> valid;
};

// Coordinates adapted to a submanifold: (u', ubar) with (u', 0)
// parametrizing Sigma by surface measure and the normal metric block
// equal to the identity along Sigma.
struct FermiChart {
    Chart chart;
    int dim_tangent = 0;
    int dim_normal = 0;
    double normal_radius = 0.0;        // |ubar| validity bound
    std::shared_ptr<const Submanifold> base;
};

// Closed-form model manifold: round sphere S^n (radius 1) or flat
// rectangular torus R^n / (p_1 Z x ... x p_n Z). Immutable after
// construction; all member queries are reentrant.
class Manifold {
public:
    static Manifold sphere(int dim);
    static Manifold torus(std::vector<double> periods);
    static Manifold torus(int dim);  // unit periods

    ManifoldKind kind() const { return kind_; }
    int dim() const { return dim_; }
    int ambient_dim() const { return kind_ == ManifoldKind::Sphere ? dim_ + 1 : dim_; }
    const std::vector<double>& periods() const { return periods_; }
    bool is_sphere() const { return kind_ == ManifoldKind::Sphere; }

    // Riemannian volume of M (sphere surface measure / torus area)
    double volume() const;

    // geodesic distance between canonical points
    double distance(const Point& a, const Point& b) const;

    // torus: wrap ambient coordinates into [0, p_i); sphere: normalize
    Point canonical(const Point& p) const;

    // difference vector wrapped to the nearest representative
    // (torus only; identity difference on the sphere's ambient space)
    Eigen::VectorXd wrap_difference(const Eigen::VectorXd& d) const;

    // chart table: two stereographic charts for the sphere, the
    // identity chart for the torus, plus any attached Fermi charts
    const std::vector<Chart>& charts() const { return charts_; }
    const Chart& chart(int id) const;
    Manifold with_chart(const FermiChart& fermi) const;  // value copy with one more chart

    // metric tensor in chart coordinates; throws DomainError outside
    // the chart's validity domain
    Eigen::MatrixXd metric_at(const ChartPoint& p) const;

    Point point(const ChartPoint& p) const;
    // chart point in the chart whose center is nearest (builtin charts only)
    ChartPoint chart_point(const Point& p) const;

private:
    Manifold() = default;
    ManifoldKind kind_ = ManifoldKind::Sphere;
    int dim_ = 2;
    std::vector<double> periods_;
    std::vector<Chart> charts_;
};

// sqrt(j (j + n - 1)): frequency of the degree-j eigenspace on S^n
double sphere_eigenvalue(int j, int n);

// dimension of the degree-j spherical-harmonic space on S^n
long sphere_multiplicity(int j, int n);

// p(x, xi) = sqrt(xi^T g^{-1}(x) xi) in chart components;
// the Hamiltonian of the geodesic flow and the symbol of sqrt(-Lap).
double principal_symbol(const Manifold& m, const ChartPoint& x, const Eigen::VectorXd& xi);
double principal_symbol(const Chart& chart, const Eigen::VectorXd& u, const Eigen::VectorXd& xi);

// Build the adapted chart for one of the shipped catalog submanifolds.
// Throws DomainError if Sigma does not live on m.
FermiChart fermi_chart(const Manifold& m, const Submanifold& sigma);

}  // namespace eigenscope
