#include <cmath>
#include <numbers>

#include "bbnf/domain.hpp"
#include "bbnf/errors.hpp"

namespace bbnf {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double wrap(double t) {
    t -= std::floor(t);
    return t >= 1.0 ? 0.0 : t;
}

// degree-7 smoothstep S(u) with its first two derivatives
std::array<double, 3> smoothstep7(double u) {
    if (u <= 0.0) return {0.0, 0.0, 0.0};
    if (u >= 1.0) return {1.0, 0.0, 0.0};
    const double u2 = u * u, u3 = u2 * u, u4 = u3 * u;
    return {u4 * (35.0 - 84.0 * u + 70.0 * u2 - 20.0 * u3),
            u3 * (140.0 - 420.0 * u + 420.0 * u2 - 140.0 * u3),
            u2 * (420.0 - 1680.0 * u + 2100.0 * u2 - 840.0 * u3)};
}

}  // namespace

double BoundaryCurve::mirror_y(double t) const { return wrap(1.0 - t); }
double BoundaryCurve::mirror_x(double t) const { return wrap(0.5 - t); }

Eigen::Vector2d BoundaryCurve::inward_normal(double t) const {
    Eigen::Vector2d T = unit_tangent(t);
    return {-T.y(), T.x()};
}

double BoundaryCurve::curvature(double t) const {
    Eigen::Vector2d v = velocity(t), a = acceleration(t);
    return (v.x() * a.y() - v.y() * a.x()) / std::pow(v.norm(), 3);
}

EllipseCurve::EllipseCurve(double semi_x, double semi_y) : a_(semi_x), b_(semi_y) {
    if (!(a_ > 0.0 && b_ > 0.0)) throw ValidationError("ellipse semi-axes must be positive");
}

Eigen::Vector2d EllipseCurve::position(double t) const {
    const double tau = two_pi * t;
    return {a_ * std::cos(tau), b_ * std::sin(tau)};
}

Eigen::Vector2d EllipseCurve::velocity(double t) const {
    const double tau = two_pi * t;
    return two_pi * Eigen::Vector2d(-a_ * std::sin(tau), b_ * std::cos(tau));
}

Eigen::Vector2d EllipseCurve::acceleration(double t) const {
    return -two_pi * two_pi * position(t);
}

JetCurve::JetCurve(DomainJet jet) : jet_(std::move(jet)) {
    jet_.validate();
    const double a0 = jet_.a(0);
    if (a0 < 0.0) {
        ae_ = 1.0 / std::sqrt(-2.0 * a0);
        be_ = 1.0;
    } else {
        ae_ = 2.0;
        be_ = 1.5;
    }
    x2_ = std::min(1.0, 0.8 * ae_);
    x1_ = std::min(0.3, 0.4 * x2_);
    const int samples = 2000;
    for (int i = 0; i <= samples; ++i) {
        const double x = x2_ * i / samples;
        if (!(F(x)[0] > 1e-12) || !(jet_.f(x) > 0.0))
            throw ValidationError("jet closure self-intersects near x = " + std::to_string(x));
    }
}

std::array<double, 3> JetCurve::F(double x) const {
    const double f = jet_.f(x), df = jet_.df(x), d2f = jet_.d2f(x);
    const double b2 = be_ * be_, ia2 = 1.0 / (ae_ * ae_);
    const double E = b2 * (1.0 - x * x * ia2), dE = -2.0 * b2 * x * ia2, d2E = -2.0 * b2 * ia2;
    const double G = f * f, dG = 2.0 * f * df, d2G = 2.0 * (df * df + f * d2f);

    const double width = x2_ - x1_;
    const auto S = smoothstep7((std::abs(x) - x1_) / width);
    const double sgn = x < 0.0 ? -1.0 : 1.0;
    const double chi = 1.0 - S[0], dchi = -S[1] * sgn / width, d2chi = -S[2] / (width * width);

    return {chi * G + (1.0 - chi) * E,
            dchi * (G - E) + chi * dG + (1.0 - chi) * dE,
            d2chi * (G - E) + 2.0 * dchi * (dG - dE) + chi * d2G + (1.0 - chi) * d2E};
}

// position and tau-derivatives in normalized units
std::array<Eigen::Vector2d, 3> JetCurve::local(double t) const {
    const double tau = two_pi * wrap(t);
    const double c = std::cos(tau), s = std::sin(tau);
    const double x = ae_ * c, dx = -ae_ * s, d2x = -ae_ * c;
    if (std::abs(x) >= x2_) {
        return {Eigen::Vector2d(x, be_ * s), Eigen::Vector2d(dx, be_ * c), Eigen::Vector2d(d2x, -be_ * s)};
    }
    const double sigma = s < 0.0 ? -1.0 : 1.0;
    const auto [F0, F1, F2] = F(x);
    const double r = std::sqrt(F0);
    const double y = sigma * r;
    const double dy = sigma * F1 * dx / (2.0 * r);
    const double d2y = sigma * ((F2 * dx * dx + F1 * d2x) / (2.0 * r) - F1 * F1 * dx * dx / (4.0 * F0 * r));
    return {Eigen::Vector2d(x, y), Eigen::Vector2d(dx, dy), Eigen::Vector2d(d2x, d2y)};
}

Eigen::Vector2d JetCurve::position(double t) const { return jet_.scale * local(t)[0]; }
Eigen::Vector2d JetCurve::velocity(double t) const { return jet_.scale * two_pi * local(t)[1]; }
Eigen::Vector2d JetCurve::acceleration(double t) const {
    return jet_.scale * two_pi * two_pi * local(t)[2];
}

std::unique_ptr<BoundaryCurve> to_curve(const DomainJet& jet) { return std::make_unique<JetCurve>(jet); }

std::unique_ptr<BoundaryCurve> to_curve_ellipse(double semi_x, double semi_y) {
    return std::make_unique<EllipseCurve>(semi_x, semi_y);
}

}  // namespace bbnf
