#pragma once

#include <vector>

#include <Eigen/Dense>

#include "bbnf/domain.hpp"

namespace bbnf {

/// Footpoint parameter and tangential momentum of the outgoing unit direction.
struct BilliardState {
    double t = 0.0;
    double p = 0.0;
};

enum class Axis { Vertical, Horizontal };

struct PeriodicOrbit {
    Axis axis = Axis::Vertical;
    std::vector<double> params;            ///< base (lower / left) point first
    std::vector<Eigen::Vector2d> points;
    double length = 0.0;                   ///< total length of the closed orbit
    int period = 2;
    double reflection_residual = 0.0;
};

/// Outgoing unit direction of a state.
Eigen::Vector2d direction(const BoundaryCurve& curve, const BilliardState& s);

/// One reflection: next boundary hit and the reflected direction there.
BilliardState billiard_map(const BoundaryCurve& curve, const BilliardState& s);

PeriodicOrbit find_bouncing_ball(const BoundaryCurve& curve, Axis axis = Axis::Vertical);

/// Signed arc length from t0 to t along the orientation (|t - t0| < 1/2).
double arc_offset(const BoundaryCurve& curve, double t0, double t);
/// Parameter at signed arc length sigma from t0.
double param_at_arc(const BoundaryCurve& curve, double t0, double sigma);

/**
 * Symmetry-reduced return map of a bouncing-ball orbit: one bounce followed
 * by the reflection exchanging the two endpoints, written in (arc-length
 * offset, tangential momentum) at the base point.
 */
class ReducedMap {
public:
    ReducedMap(const BoundaryCurve& curve, const PeriodicOrbit& orbit);
    Eigen::Vector2d operator()(const Eigen::Vector2d& x) const;

private:
    const BoundaryCurve& curve_;
    Axis axis_;
    double base_;
};

struct PoincareEstimate {
    Eigen::Matrix2d matrix;
    double richardson_error = 0.0;  ///< |J(h) - J(h/2)|, a proxy for truncation plus noise
};

/// Central-difference Jacobian of the reduced map, Richardson-extrapolated.
PoincareEstimate numeric_poincare(const BoundaryCurve& curve, const PeriodicOrbit& orbit, double h = 1e-4);

struct InvariantCircle {
    double radius = 0.0;    ///< initial arc-length offset
    double action = 0.0;    ///< enclosed area / 2 pi
    double rotation = 0.0;  ///< weighted Birkhoff average of the angle advance
    double drift = 0.0;     ///< disagreement between half-length averages
};

struct BirkhoffFit {
    double alpha = 0.0;
    std::vector<double> b;  ///< b1, b2, ...
    double residual = 0.0;  ///< rms misfit of the rotation numbers
    std::vector<InvariantCircle> circles;
};

InvariantCircle measure_circle(const BoundaryCurve& curve, const PeriodicOrbit& orbit, const Eigen::Matrix2d& linear,
                               double radius, int iterations = 10000);

/**
 * Rotation numbers on invariant circles launched at the given arc-length
 * offsets, fitted as alpha + b1 I + ... + b_order I^order.
 */
BirkhoffFit fit_birkhoff(const BoundaryCurve& curve, const PeriodicOrbit& orbit, const std::vector<double>& radii,
                         int order = 2, int iterations = 10000);

}  // namespace bbnf
