#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "eigenscope/fit.hpp"
#include "eigenscope/spectrum.hpp"
#include "eigenscope/submanifold.hpp"

namespace eigenscope {

// Quadrature value of the integral of e against d mu = h dsigma.
// Refuses (ResolutionError) if Sigma's rule is coarser than the
// per-wavelength requirement for e's frequency.
std::complex<double> integrate_eigenfunction(const Eigenfunction& e, const Submanifold& sigma);

// One moment per basis index of the level: mu_m = integral of e_m d mu.
std::vector<std::complex<double>> eigenspace_moments(const EigenLevel& level, const Submanifold& sigma);

// The unit coefficient vector maximizing |sum_m c_m mu_m| over the
// eigenspace; by Cauchy-Schwarz the value is the l2 norm of the moment
// vector and c is proportional to the conjugated moments.
struct MaximizerResult {
    Eigen::VectorXcd coeffs;
    double value = 0.0;
    bool degenerate = false;  // all moments vanish; c is an arbitrary unit vector
};
MaximizerResult maximizer_from_moments(const Eigen::VectorXcd& moments);
MaximizerResult eigenspace_maximizer(const EigenLevel& level, const Submanifold& sigma);

// sum over lambda_j in [lambda, lambda + width] of sum_m |mu_m|^2;
// basis independent (the norm of a spectral projection).
struct BandLevel {
    double lambda = 0.0;
    int multiplicity = 0;
    double value = 0.0;  // sum of squared moment moduli for this level
};
struct BandSum {
    double lambda = 0.0;
    double width = 0.0;
    double value = 0.0;
    std::vector<BandLevel> contributing;
};
BandSum band_sum(const Manifold& m, const Submanifold& sigma, double lambda, double width);

// cumulative variant: sum over lambda_j <= lambda
double weyl_sum(const Manifold& m, const Submanifold& sigma, double lambda);

// Workhorse shared by the band/weyl/scaling experiments: moments of
// every level with lambda_j <= lambda_max, computed in parallel with a
// deterministic ordered reduction.
struct LevelMoments {
    double lambda = 0.0;
    int multiplicity = 0;
    Eigen::VectorXcd moments;
    double sum_sq = 0.0;     // sum |mu_m|^2
    double max_value = 0.0;  // eigenspace maximizer value = sqrt(sum_sq)
};
std::vector<LevelMoments> level_moment_table(const Manifold& m, const Submanifold& sigma,
                                             double lambda_max);

}  // namespace eigenscope
