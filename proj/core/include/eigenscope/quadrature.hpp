#pragma once

#include <Eigen/Dense>
#include <functional>

namespace eigenscope {

// Gauss-Legendre nodes and weights on [-1, 1]; memoized per order,
// thread-safe after first construction.
struct GaussRule {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
};
const GaussRule& gauss_legendre(int order);

// Composite rule on [a, b] built from `panels` panels of the given
// Gauss order. Total node count = panels * order.
GaussRule composite_gauss(double a, double b, int panels, int order = 16);

// Periodic trapezoid rule on [a, b) with n equispaced nodes.
// Spectrally accurate for smooth periodic integrands.
GaussRule periodic_trapezoid(double a, double b, int n);

// C-infinity step: 0 for u <= 0, 1 for u >= 1, built from exp(-1/u).
double smooth_step(double u);

// Plateau bump on [a, b]: identically 1 on the middle (1 - 2*edge)
// fraction of the interval, smoothly vanishing at both endpoints,
// support exactly [a, b].
double plateau_bump(double t, double a, double b, double edge = 0.2);

// Same profile radially in n dimensions: 1 for |y| <= inner, 0 for
// |y| >= outer.
double radial_bump(const Eigen::VectorXd& y, double inner, double outer);

}  // namespace eigenscope
