#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

#include "eigenscope/fit.hpp"

namespace eigenscope {

// Oscillatory integral I(lambda; x) = integral over y of
// e^{i lambda phase(x, y)} amplitude(lambda; x, y) dy, with outer
// parameters x in R^m and inner variables y in R^n. The amplitude is
// smooth with compact support inside [box_lo, box_hi] and
// lambda-uniform derivative bounds; grad_y / hess_y may be left empty,
// in which case central finite differences at fd_step are used.
struct OscillatoryProblem {
    int outer_dim = 0;
    int inner_dim = 1;
    std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)> phase;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)> grad_y;
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&, const Eigen::VectorXd&)> hess_y;
    std::function<double(double, const Eigen::VectorXd&, const Eigen::VectorXd&)> amplitude;
    Eigen::VectorXd box_lo, box_hi;
    double grad_bound = 1.0;  // sup of |grad_y phase| over the box
    double fd_step = 1e-5;
};

Eigen::VectorXd phase_gradient(const OscillatoryProblem& prob, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& y);
Eigen::MatrixXd phase_hessian(const OscillatoryProblem& prob, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& y);

// Nondegenerate critical point of the phase in y with its Hessian data;
// (n_pos, n_neg) counts eigenvalues by sign.
struct CriticalPointData {
    Eigen::VectorXd y;
    Eigen::MatrixXd hessian;
    double det = 0.0;
    int n_pos = 0;
    int n_neg = 0;
    double grad_norm = 0.0;
    double phase_value = 0.0;  // phase(x, y(x))
};

// Newton on grad_y phase from the given guess to |grad| < 1e-12.
// Throws NumericError on non-convergence within 50 iterations or when
// the Hessian at the located point is degenerate (an eigenvalue below
// 1e-6 of the spectral norm, or spectral norm below 1e-8).
CriticalPointData find_critical_point(const OscillatoryProblem& prob, const Eigen::VectorXd& x,
                                      const Eigen::VectorXd& guess);

// (lambda/2pi)^{-n/2} |det H|^{-1/2} e^{i pi (p - q)/4}
//   e^{i lambda phase(x, y(x))} amplitude(lambda; x, y(x))
std::complex<double> leading_term(const OscillatoryProblem& prob, const CriticalPointData& cp,
                                  double lambda, const Eigen::VectorXd& x);

// Brute-force tensor Gauss-Legendre quadrature of the oscillatory
// integral with grid-doubling error estimate. Node rule: at least
// 10 * lambda * grad_bound * boxdiam / (2 pi) points per axis.
// Throws ResourceError for inner_dim > 3 or oversized grids.
struct QuadResult {
    std::complex<double> value;
    double est_error = 0.0;
    long nodes = 0;  // nodes per axis on the fine grid
};
QuadResult oscillatory_quadrature(const OscillatoryProblem& prob, double lambda,
                                  const Eigen::VectorXd& x);

// Slope of log |quadrature - leading| against log lambda; the expected
// decay rate is -(n/2 + 1). Requires at least 5 lambdas spanning a
// decade. When the remainder sits at the quadrature error floor
// (exact expansions) the sweep is flagged instead of fitted.
struct RemainderRow {
    double lambda = 0.0;
    std::complex<double> quadrature;
    std::complex<double> leading;
    double remainder_abs = 0.0;
    double est_error = 0.0;
};
struct RemainderSweep {
    std::vector<RemainderRow> rows;
    ExponentFit fit;
    bool floor_limited = false;
    bool fitted = false;
};
RemainderSweep remainder_decay_fit(const OscillatoryProblem& prob, const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& guess, const std::vector<double>& lambdas);

// Catalog of smooth test phases driving the oracle experiments, all
// with plateau amplitudes supported in [-0.7, 0.7]^n and identically 1
// for |y| <= 0.35:
//   "fresnel"        n = 1, y^2/2 (expansion exact, remainder at the floor)
//   "fresnel_neg"    n = 1, -y^2/2 (signature -pi/4)
//   "cubic"          n = 1, y^2/2 + y^3/10
//   "hyperbolic"     n = 2, (y1^2 - y2^2)/2
//   "product"        n = 2, per-axis cubic-perturbed quadratics
OscillatoryProblem test_phase_problem(const std::string& name);

// The flat-model phase of the band-restricted wave kernel paired across
// a d-dimensional submanifold of R^n, after the polar split of the
// normal frequency: inner variables (t, x', xi', r), outer parameter y',
// phase <x' - y', xi'> + t (sqrt(|xi'|^2 + r^2) - 1).
// Critical point at (0, y', 0, 1); the unit normal direction drops out
// of the flat symbol. Analytic gradient attached; 1 <= d < n <= 3.
OscillatoryProblem wave_phase_problem(int d, int n);
// the critical point (0, y', 0, 1) as a vector in the inner variables
Eigen::VectorXd wave_phase_critical_point(int d, int n, const Eigen::VectorXd& y_prime);

// Hessian of the two-operator composition phase
// <x' - w, eta> + <w - z, xi> + t (|xi| - 1) + <z - y', zeta>
// in the linking variables (w, z, eta, zeta) in R^{4n}, evaluated at its
// unique critical point (w, z, eta, zeta) = (x', y', xi, xi).
struct HessianCheck {
    Eigen::MatrixXd hessian;
    double det = 0.0;
    int n_pos = 0;
    int n_neg = 0;
    double grad_residual = 0.0;       // |grad| at the critical point
    Eigen::VectorXd critical_point;
};
HessianCheck composition_hessian_check(int d, int n);

}  // namespace eigenscope
