#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "eigenscope/geometry.hpp"

namespace eigenscope {

// Index of one orthonormal basis eigenfunction.
//   Sphere n = 2: real harmonic of degree j, order m in [-j, j]
//                 (cos convention for m > 0, sin for m < 0).
//   Sphere n >= 3: zonal harmonic of degree j about the north pole
//                  (the basis shipped at higher dimension).
//   Torus: exponential indexed by the integer lattice vector k.
struct SpectralIndex {
    enum class Kind { SphereReal, SphereZonal, TorusLattice };
    Kind kind = Kind::SphereReal;
    int degree = 0;
    int order = 0;
    Eigen::VectorXi k;
    std::string repr() const;
};

struct EigenLevel {
    double lambda = 0.0;
    std::vector<SpectralIndex> indices;
    int multiplicity = 0;  // equals indices.size()
};

// Evaluable L^2-normalized eigenfunction: -Lap e = lambda^2 e,
// ||e||_{L^2(M)} = 1.
class Eigenfunction {
public:
    Eigenfunction(const Manifold& m, const SpectralIndex& idx);
    const Manifold& manifold() const { return manifold_; }
    const SpectralIndex& index() const { return index_; }
    double lambda() const { return lambda_; }
    std::complex<double> operator()(const Point& p) const;

private:
    Manifold manifold_;
    SpectralIndex index_;
    double lambda_ = 0.0;
};

inline std::complex<double> evaluate(const Eigenfunction& e, const Point& p) { return e(p); }

// frequency of the torus exponential: 2 pi |k / periods|
double torus_frequency(const Manifold& m, const Eigen::VectorXi& k);

// All eigenlevels with lambda <= lambda_max, ascending, with full
// multiplicity (sphere n >= 3 carries the zonal representative only).
// Throws ResourceError when the enumeration exceeds index_cap.
std::vector<EigenLevel> enumerate_levels(const Manifold& m, double lambda_max,
                                         std::size_t index_cap = 4'000'000);

// Value at its own base point of the degree-j zonal harmonic;
// sqrt(multiplicity / vol(S^n)) by the reproducing-kernel identity,
// sqrt((2j+1)/(4 pi)) on S^2.
double zonal_at_base(const Manifold& sphere, int degree, const Point& base);

// Fully normalized associated Legendre values at cos(theta):
// returns row P[m], m = 0..j, for fixed degree j, with the sin/cos real
// convention's normalization (no Condon-Shortley phase):
// integral over S^2 of (P[0])^2 = 1 for m = 0 and of 2 (P[m] cos m phi)^2 = 1.
// Stable ascending-degree three-term recurrence, safe past j = 200.
void normalized_legendre_row(int j, double cos_theta, double sin_theta, std::vector<double>& out);

// All 2j+1 real harmonics of degree j at the given point, order
// m = -j..j (index m + j).
Eigen::VectorXd real_harmonics_row(int j, const Point& p);

// Gegenbauer polynomial C_j^alpha(t) normalized so the value at t = 1
// is 1; the angular profile of the zonal harmonic on S^n, alpha = (n-1)/2.
double normalized_gegenbauer(int j, double alpha, double t);

}  // namespace eigenscope
