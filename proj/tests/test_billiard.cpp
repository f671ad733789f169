#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bbnf/billiard.hpp"
#include "bbnf/classical.hpp"
#include "bbnf/errors.hpp"

using namespace bbnf;

namespace {

// Two concave mirrors of radius R a chord Lc apart, written in (x, tangential momentum)
// at the lower mirror after one reflection and the identification of the mirrors.
Eigen::Matrix2d abcd_oracle(double R, double Lc) {
    Eigen::Matrix2d flight, mirror, to_p;
    flight << 1.0, Lc, 0.0, 1.0;
    mirror << 1.0, 0.0, -2.0 / R, 1.0;
    to_p << 1.0, 0.0, 1.0 / R, 1.0;
    return to_p * mirror * flight * to_p.inverse();
}

}  // namespace

TEST_CASE("billiard_map on the unit circle") {
    auto circle = to_curve_ellipse(1.0, 1.0);
    for (double theta : {0.3, 1.1, 2.0, 2.9}) {
        BilliardState s{0.1, std::cos(theta / 2.0)};
        for (int k = 0; k < 20; ++k) {
            BilliardState n = billiard_map(*circle, s);
            double dt = n.t - s.t - theta / (2.0 * std::numbers::pi);
            dt -= std::round(dt);
            CHECK(std::abs(dt) < 1e-12);
            CHECK(std::abs(n.p - s.p) < 1e-12);
            s = n;
        }
    }
    const BilliardState axis = billiard_map(*circle, {0.75, 0.0});
    CHECK(std::abs(axis.t - 0.25) < 1e-13);
    CHECK(std::abs(axis.p) < 1e-13);
}

TEST_CASE("ellipse billiard conserves the focal angular-momentum product") {
    const double a = 1.0, b = 0.75, f = std::sqrt(a * a - b * b);
    EllipseCurve e(a, b);
    const Eigen::Vector2d F1(f, 0.0), F2(-f, 0.0);
    auto invariant = [&](const BilliardState& s) {
        const Eigen::Vector2d x = e.position(s.t), v = direction(e, s);
        auto L = [&](const Eigen::Vector2d& F) { return (x - F).x() * v.y() - (x - F).y() * v.x(); };
        return L(F1) * L(F2);
    };
    BilliardState s{0.137, 0.41};
    const double J0 = invariant(s);
    for (int k = 0; k < 100; ++k) {
        s = billiard_map(e, s);
        CHECK(std::abs(invariant(s) - J0) < 1e-9);
        CHECK(std::abs(s.p) <= 1.0);
    }
}

TEST_CASE("tangential momentum stays in [-1, 1]") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ut(0.0, 1.0), up(-0.95, 0.95);
    auto c = to_curve(DomainJet{{-0.2, 0.01}, 1.0});
    for (int i = 0; i < 50; ++i) {
        BilliardState s{ut(rng), up(rng)};
        for (int k = 0; k < 10; ++k) {
            s = billiard_map(*c, s);
            CHECK(std::abs(s.p) <= 1.0);
            CHECK(s.t >= 0.0);
            CHECK(s.t < 1.0);
        }
    }
}

TEST_CASE("find_bouncing_ball") {
    auto circle = to_curve_ellipse(1.0, 1.0);
    auto o = find_bouncing_ball(*circle);
    CHECK((o.points[0] - Eigen::Vector2d(0.0, -1.0)).norm() < 1e-14);
    CHECK((o.points[1] - Eigen::Vector2d(0.0, 1.0)).norm() < 1e-14);
    CHECK(std::abs((o.points[1] - o.points[0]).norm() - 2.0) < 1e-14);

    auto e = to_curve_ellipse(1.0, 0.75);
    o = find_bouncing_ball(*e);
    CHECK(std::abs((o.points[1] - o.points[0]).norm() - 1.5) < 1e-14);
    CHECK(std::abs(o.points[1].y() - 0.75) < 1e-14);

    auto q = to_curve(DomainJet{{-0.2, 0.03, -0.004}, 1.3});
    o = find_bouncing_ball(*q);
    CHECK(std::abs((o.points[1] - o.points[0]).norm() - 2.6) < 1e-10);
    CHECK(o.reflection_residual < 1e-10);
    CHECK(o.length == doctest::Approx(5.2));

    o = find_bouncing_ball(*e, Axis::Horizontal);
    CHECK(std::abs((o.points[1] - o.points[0]).norm() - 2.0) < 1e-14);
}

TEST_CASE("axis orbit returns after 2k reflections") {
    auto c = to_curve(DomainJet{{-0.15, 0.02}, 1.0});
    const auto o = find_bouncing_ball(*c);
    BilliardState s{o.params[0], 0.0};
    for (int k = 1; k <= 20; ++k) {
        s = billiard_map(*c, billiard_map(*c, s));
        double dt = s.t - o.params[0];
        dt -= std::round(dt);
        CHECK(std::abs(dt) < 1e-9 * k);
        CHECK(std::abs(s.p) < 1e-9 * k);
    }
}

TEST_CASE("numeric_poincare matches the printed matrix trace and the resonator oracle") {
    for (double a0 : {-0.25, -0.1, -0.4, 0.1, 0.25}) {
        const DomainJet jet{{a0}, 1.0};
        auto c = to_curve(jet);
        const auto P = numeric_poincare(*c, find_bouncing_ball(*c));
        CHECK(std::abs(P.matrix.trace() - linear_poincare(jet).trace()) < 1e-6);
        CHECK(std::abs(P.matrix.determinant() - 1.0) < 1e-6);
        if (a0 < 0.0) {
            const Eigen::Matrix2d M = abcd_oracle(curvature_radius(jet), 2.0);
            CHECK((P.matrix - M).norm() < 1e-6);
        }
    }
    // similarity: a scaled domain has the same trace, lengths rescaled
    const DomainJet big{{-0.1, 0.01}, 2.5};
    auto c = to_curve(big);
    const auto P = numeric_poincare(*c, find_bouncing_ball(*c));
    CHECK(std::abs(P.matrix.trace() - 1.2) < 1e-6);
    CHECK((P.matrix - abcd_oracle(curvature_radius(big), 5.0)).norm() < 1e-6);

    auto circle = to_curve_ellipse(1.0, 1.0);
    CHECK(std::abs(std::abs(numeric_poincare(*circle, find_bouncing_ball(*circle)).matrix.trace()) - 2.0) < 1e-6);
}

TEST_CASE("minor-axis bounces are elliptic, major-axis bounces hyperbolic") {
    for (double ratio : {0.5, 0.75, 0.9, 0.97}) {
        auto e = to_curve_ellipse(1.0, ratio);
        const auto minor = numeric_poincare(*e, find_bouncing_ball(*e, Axis::Vertical)).matrix;
        const auto major = numeric_poincare(*e, find_bouncing_ball(*e, Axis::Horizontal)).matrix;
        CHECK(classify_trace(minor.trace()).tag == OrbitTag::Elliptic);
        CHECK(classify_trace(major.trace()).tag == OrbitTag::Hyperbolic);
        CHECK(classify(ellipse_jet(1.0, ratio, 0)).tag == OrbitTag::Elliptic);
        CHECK(classify(ellipse_jet(ratio, 1.0, 0)).tag == OrbitTag::Hyperbolic);
        CHECK(std::abs(minor.trace() - linear_poincare(ellipse_jet(1.0, ratio, 0)).trace()) < 1e-6);
        CHECK(std::abs(major.trace() - linear_poincare(ellipse_jet(ratio, 1.0, 0)).trace()) < 1e-6);
    }
}

TEST_CASE("fit_birkhoff agrees with the series on a non-resonant jet") {
    for (const DomainJet& jet : {DomainJet{{-0.1}, 1.0}, DomainJet{{-0.1, 0.01}, 1.0}}) {
        auto c = to_curve(jet);
        const auto fit = fit_birkhoff(*c, find_bouncing_ball(*c), {0.01, 0.02, 0.03, 0.04, 0.05}, 2, 10000);
        const auto b = forward_map(jet, 2);
        CHECK(std::abs(fit.alpha - b[0]) < 1e-9);
        CHECK(std::abs(fit.b[0] - b[1]) < 1e-3 * std::abs(b[1]));
        for (const auto& circle : fit.circles) CHECK(circle.drift < 1e-9);
    }
}

TEST_CASE("fit_birkhoff rejects degenerate and unconverged cases") {
    auto circle = to_curve_ellipse(1.0, 1.0);
    CHECK_THROWS_AS(fit_birkhoff(*circle, find_bouncing_ball(*circle), {0.01, 0.02, 0.03}), ValidationError);
    // alpha = pi/2: 10^4 reflections cover only a sliver of the slow resonant motion
    auto c = to_curve(DomainJet{{-0.25, 0.01}, 1.0});
    CHECK_THROWS_AS(fit_birkhoff(*c, find_bouncing_ball(*c), {0.01, 0.02, 0.03}, 1, 10000), NumericalError);
}

TEST_CASE("quarter resonance: long orbits follow the averaged resonant normal form") {
    const DomainJet jet{{-0.25, 0.01}, 1.0};
    const auto nf = birkhoff_normalize(twist_map(generating_function(jet, 1)), 1, ResonancePolicy::KeepResonant);
    const double predicted = quarter_resonance_twist(nf);
    CHECK(std::abs(predicted - nf.form.b[1]) > 0.05);

    auto c = to_curve(jet);
    const auto o = find_bouncing_ball(*c);
    const auto J = numeric_poincare(*c, o).matrix;
    const auto circle = measure_circle(*c, o, J, 0.045, 150000);
    CHECK(circle.drift < 1e-8);
    const double slope = (circle.rotation - std::numbers::pi / 2) / circle.action;
    CHECK(std::abs(slope - predicted) < 1e-3 * std::abs(predicted));
}
