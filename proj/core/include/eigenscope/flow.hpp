#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "eigenscope/geometry.hpp"
#include "eigenscope/submanifold.hpp"

namespace eigenscope {

// Unit-cosphere point (x, xi) with p(x, xi) = 1; on the sphere xi is
// additionally tangent (<x, xi> = 0).
struct PhasePoint {
    Point x;
    Covector xi;
};

enum class FlowMode { ClosedForm, Ode };

struct FlowSettings {
    FlowMode mode = FlowMode::ClosedForm;
    double dt = 1e-3;          // ode step
    int order = 4;             // one-step method order: 1, 2, or 4
    bool renormalize = true;   // per-step projection back onto S*M
};

// Geodesic flow Phi_t on S*M. Closed form is exact (sphere: rotation
// in the plane of the great circle; torus: straight-line translation);
// ode mode integrates the geodesic equations with per-step covector
// renormalization. Throws DomainError if p is off the unit cosphere
// by more than 1e-9.
PhasePoint flow(const Manifold& m, const PhasePoint& p, double t, const FlowSettings& s = {});

// |p(x, xi) - 1| for diagnostics (ambient representation)
double cosphere_defect(const Manifold& m, const PhasePoint& p);

// i.i.d. samples from dsigma x (uniform on the unit normal fiber),
// restricted to the support of Sigma's density; deterministic given
// the seed via per-sample counter streams.
std::vector<PhasePoint> conormal_sample(const Submanifold& sigma, int count, std::uint64_t seed);

struct LoopSettings {
    double t_min = 0.1;   // excludes the trivial t = 0 self-intersection
    double dt = 0.01;     // trajectory sampling step; must satisfy dt <= sqrt(tol)
    FlowSettings flow;
};

struct LoopHit {
    double t_return = 0.0;
    PhasePoint landing;
};

// Earliest t in [t_min, T] with Phi_t(p) within tol of the unit
// conormal bundle over Sigma (position distance and tangential covector
// component both below tol). Near-approaches of the sampled trajectory
// are refined by bisection to width 1e-10 in t.
std::optional<LoopHit> detect_loop(const Manifold& m, const PhasePoint& p, const Submanifold& sigma,
                                   double T, double tol, const LoopSettings& s = {});

struct LoopingEstimate {
    double fraction = 0.0;
    int samples = 0;
    int loops = 0;
    double T = 0.0;
    double tol = 0.0;
    std::uint64_t seed = 0;
    double std_error = 0.0;               // binomial
    std::vector<double> t_returns;        // per sample; NaN when no loop
};

// Monte Carlo measure of the looping set over the conormal bundle.
LoopingEstimate looping_fraction(const Manifold& m, const Submanifold& sigma, double T, int samples,
                                 double tol, std::uint64_t seed, const LoopSettings& s = {});

// distance of a phase point to the unit conormal bundle, split into
// position and covector parts (both must be < tol for membership)
struct ConormalGap {
    double position = 0.0;    // geodesic distance from x to Sigma
    double tangential = 0.0;  // norm of the tangential component of xi at the foot
    double total() const { return position + tangential; }
};
ConormalGap conormal_gap(const Manifold& m, const PhasePoint& p, const Submanifold& sigma);

}  // namespace eigenscope
