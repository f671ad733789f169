#include "bbnf/billiard.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>

#include "bbnf/errors.hpp"

namespace bbnf {

namespace {

constexpr int intersection_samples = 512;

double wrap(double t) {
    t -= std::floor(t);
    return t >= 1.0 ? 0.0 : t;
}

double cross(const Eigen::Vector2d& a, const Eigen::Vector2d& b) { return a.x() * b.y() - a.y() * b.x(); }

template <class F>
double bracket_root(F f, double lo, double hi) {
    boost::uintmax_t iters = 200;
    auto r = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(52), iters);
    return 0.5 * (r.first + r.second);
}

}  // namespace

Eigen::Vector2d direction(const BoundaryCurve& curve, const BilliardState& s) {
    if (!(std::abs(s.p) < 1.0)) throw ValidationError("tangential momentum must lie in (-1, 1)");
    return s.p * curve.unit_tangent(s.t) + std::sqrt(1.0 - s.p * s.p) * curve.inward_normal(s.t);
}

BilliardState billiard_map(const BoundaryCurve& curve, const BilliardState& s) {
    const Eigen::Vector2d x0 = curve.position(s.t);
    const Eigen::Vector2d d = direction(curve, s);
    auto g = [&](double tau) { return cross(curve.position(tau) - x0, d); };

    double best_dist = std::numeric_limits<double>::infinity(), best_tau = 0.0;
    const double step = 1.0 / intersection_samples;
    double g_prev = g(s.t + step);
    for (int i = 1; i < intersection_samples - 1; ++i) {
        const double lo = s.t + i * step, hi = lo + step;
        const double g_next = g(hi);
        if (g_prev * g_next <= 0.0) {
            const double tau = g_prev == 0.0 ? lo : (g_next == 0.0 ? hi : bracket_root(g, lo, hi));
            const double dist = (curve.position(tau) - x0).dot(d);
            if (dist > 0.0 && dist < best_dist) {
                best_dist = dist;
                best_tau = tau;
            }
        }
        g_prev = g_next;
    }
    if (!std::isfinite(best_dist)) throw IntersectionFailure("billiard_map: ray does not meet the boundary");

    const double t1 = wrap(best_tau);
    const double dn = d.dot(curve.inward_normal(t1));
    if (dn > -1e-14) throw IntersectionFailure("billiard_map: tangential hit");
    return {t1, d.dot(curve.unit_tangent(t1))};
}

PeriodicOrbit find_bouncing_ball(const BoundaryCurve& curve, Axis axis) {
    PeriodicOrbit orbit;
    orbit.axis = axis;
    const bool vertical = axis == Axis::Vertical;
    if (vertical ? !curve.left_right_symmetric() : !curve.up_down_symmetric())
        throw ValidationError("find_bouncing_ball: curve lacks the required symmetry");

    auto coord = [&](double t) { return vertical ? curve.position(t).x() : curve.position(t).y(); };
    const std::array<double, 2> guesses = vertical ? std::array<double, 2>{curve.bottom_parameter(), curve.top_parameter()}
                                                   : std::array<double, 2>{0.5, 1.0};
    for (double c : guesses) {
        double t = c;
        if (std::abs(coord(c)) > 0.0) {
            try {
                t = bracket_root(coord, c - 0.2, c + 0.2);
            } catch (const std::exception& e) {
                throw NumericalError(std::string("find_bouncing_ball: root finder failed: ") + e.what());
            }
        }
        orbit.params.push_back(wrap(t));
        orbit.points.push_back(curve.position(t));
    }
    const Eigen::Vector2d chord = orbit.points[1] - orbit.points[0];
    orbit.length = 2.0 * chord.norm();
    const Eigen::Vector2d u = chord.normalized();
    for (double t : orbit.params)
        orbit.reflection_residual = std::max(orbit.reflection_residual, std::abs(cross(curve.inward_normal(t), u)));
    if (orbit.reflection_residual > 1e-10)
        throw NumericalError("find_bouncing_ball: reflection law violated by " + std::to_string(orbit.reflection_residual));
    return orbit;
}

double arc_offset(const BoundaryCurve& curve, double t0, double t) {
    double dt = t - t0;
    dt -= std::round(dt);
    if (dt == 0.0) return 0.0;
    auto speed = [&](double u) { return curve.speed(u); };
    const int pieces = 1 + static_cast<int>(std::abs(dt) / 0.02);
    double sum = 0.0;
    for (int i = 0; i < pieces; ++i)
        sum += boost::math::quadrature::gauss<double, 20>::integrate(speed, t0 + dt * i / pieces, t0 + dt * (i + 1) / pieces);
    return sum;
}

double param_at_arc(const BoundaryCurve& curve, double t0, double sigma) {
    double t = t0 + sigma / curve.speed(t0);
    for (int it = 0; it < 50; ++it) {
        const double delta = (arc_offset(curve, t0, t) - sigma) / curve.speed(t);
        t -= delta;
        if (std::abs(delta) < 1e-16) break;
    }
    return wrap(t);
}

ReducedMap::ReducedMap(const BoundaryCurve& curve, const PeriodicOrbit& orbit)
    : curve_(curve), axis_(orbit.axis), base_(orbit.params.at(0)) {}

Eigen::Vector2d ReducedMap::operator()(const Eigen::Vector2d& x) const {
    const BilliardState next = billiard_map(curve_, {param_at_arc(curve_, base_, x(0)), x(1)});
    const double t = axis_ == Axis::Vertical ? curve_.mirror_y(next.t) : curve_.mirror_x(next.t);
    return {arc_offset(curve_, base_, t), -next.p};
}

PoincareEstimate numeric_poincare(const BoundaryCurve& curve, const PeriodicOrbit& orbit, double h) {
    const ReducedMap T(curve, orbit);
    const double hs = h * 0.5 * orbit.length / orbit.period;
    auto jac = [&](double k) {
        Eigen::Matrix2d J;
        const Eigen::Vector2d es(k * hs, 0.0), ep(0.0, k * h);
        J.col(0) = (T(es) - T(-es)) / (2.0 * k * hs);
        J.col(1) = (T(ep) - T(-ep)) / (2.0 * k * h);
        return J;
    };
    const Eigen::Matrix2d J1 = jac(1.0), J2 = jac(0.5);
    PoincareEstimate est;
    est.matrix = (4.0 * J2 - J1) / 3.0;
    est.richardson_error = (J1 - J2).norm();
    if (est.richardson_error > 1e-3 * (1.0 + est.matrix.norm()))
        throw NumericalError("numeric_poincare: Richardson disagreement " + std::to_string(est.richardson_error) +
                             ", step too small or too large");
    return est;
}

InvariantCircle measure_circle(const BoundaryCurve& curve, const PeriodicOrbit& orbit, const Eigen::Matrix2d& linear,
                               double radius, int iterations) {
    Eigen::EigenSolver<Eigen::Matrix2d> es(linear.transpose());
    int idx = es.eigenvalues()(0).imag() > 0.0 ? 0 : 1;
    const std::complex<double> lambda = es.eigenvalues()(idx);
    if (!(lambda.imag() > 1e-12)) throw ValidationError("measure_circle: orbit is not elliptic");
    const Eigen::Vector2cd ell = es.eigenvectors().col(idx);
    const double alpha = std::arg(lambda);

    const ReducedMap T(curve, orbit);
    std::vector<Eigen::Vector2d> pts;
    pts.reserve(iterations + 1);
    pts.emplace_back(radius, 0.0);
    for (int k = 0; k < iterations; ++k) pts.push_back(T(pts.back()));

    auto zeta = [&](const Eigen::Vector2d& x) { return ell(0) * x(0) + ell(1) * x(1); };
    auto weight = [](double u) { return std::exp(-1.0 / (u * (1.0 - u))); };
    auto average = [&](int from, int to) {
        double num = 0.0, den = 0.0;
        const int n = to - from;
        for (int k = from; k < to; ++k) {
            const double w = weight((k - from + 0.5) / n);
            const double dtheta = std::arg(zeta(pts[k + 1]) / zeta(pts[k]) * std::polar(1.0, -alpha)) + alpha;
            num += w * dtheta;
            den += w;
        }
        return num / den;
    };

    InvariantCircle c;
    c.radius = radius;
    c.rotation = average(0, iterations);
    c.drift = std::abs(average(0, iterations / 2) - average(iterations / 2, iterations));

    std::vector<std::pair<double, Eigen::Vector2d>> ordered;
    ordered.reserve(pts.size());
    for (const auto& x : pts) ordered.emplace_back(std::arg(zeta(x)), x);
    std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    double area = 0.0;
    for (std::size_t i = 0; i < ordered.size(); ++i)
        area += cross(ordered[i].second, ordered[(i + 1) % ordered.size()].second);
    c.action = std::abs(area) / (4.0 * std::numbers::pi);
    return c;
}

BirkhoffFit fit_birkhoff(const BoundaryCurve& curve, const PeriodicOrbit& orbit, const std::vector<double>& radii,
                         int order, int iterations) {
    if (static_cast<int>(radii.size()) < order + 1) throw ValidationError("fit_birkhoff: need at least order + 1 radii");
    const Eigen::Matrix2d J = numeric_poincare(curve, orbit).matrix;
    const OrbitClass cls = classify_trace(J.trace());
    if (cls.tag != OrbitTag::Elliptic) throw ValidationError(std::string("fit_birkhoff: orbit is ") + tag_name(cls.tag));

    BirkhoffFit fit;
    for (double r : radii) {
        auto c = measure_circle(curve, orbit, J, r, iterations);
        if (c.drift > 1e-7)
            throw NumericalError("fit_birkhoff: rotation number not converged at radius " + std::to_string(r) +
                                 " (chaotic or resonant layer)");
        fit.circles.push_back(c);
    }
    const int m = static_cast<int>(radii.size());
    Eigen::MatrixXd V(m, order + 1);
    Eigen::VectorXd w(m);
    for (int i = 0; i < m; ++i) {
        for (int k = 0; k <= order; ++k) V(i, k) = std::pow(fit.circles[i].action, k);
        w(i) = fit.circles[i].rotation;
    }
    const Eigen::VectorXd coef = V.colPivHouseholderQr().solve(w);
    fit.alpha = coef(0);
    for (int k = 1; k <= order; ++k) fit.b.push_back(coef(k));
    fit.residual = std::sqrt((V * coef - w).squaredNorm() / m);
    return fit;
}

}  // namespace bbnf
