#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/ellint_2.hpp>
#include <boost/math/tools/roots.hpp>

#include "bbnf/domain.hpp"
#include "bbnf/errors.hpp"
#include "bbnf/wave.hpp"

using namespace bbnf;
using std::numbers::pi;

namespace {

/// Squared zeros of J_n below x_max, by sign changes and bracketed refinement.
std::vector<double> bessel_zero_squares(int n, double x_max) {
    std::vector<double> out;
    auto J = [n](double x) { return boost::math::cyl_bessel_j(n, x); };
    const double h = 0.05;
    for (double x = 0.5; x < x_max; x += h) {
        if (J(x) * J(x + h) > 0.0) continue;
        boost::uintmax_t it = 100;
        auto r = boost::math::tools::toms748_solve(J, x, x + h, boost::math::tools::eps_tolerance<double>(52), it);
        const double z = 0.5 * (r.first + r.second);
        out.push_back(z * z);
    }
    return out;
}

/// First `count` disk eigenvalues of a class from the Bessel zeros of its orders.
std::vector<double> disk_oracle(SymClass cls, int count) {
    std::vector<double> all;
    for (int n = 0; n < 60; ++n) {
        const bool cosine_class = cls == SymClass::EE || cls == SymClass::OE;
        const bool even_order = cls == SymClass::EE || cls == SymClass::OO;
        if ((n % 2 == 0) != even_order || (!cosine_class && n == 0)) continue;
        for (double z : bessel_zero_squares(n, 40.0)) all.push_back(z);
    }
    std::sort(all.begin(), all.end());
    all.resize(count);
    return all;
}

const Spectrum& ellipse_spectrum() {
    static const Spectrum s = [] {
        auto curve = to_curve_ellipse(1.0, 0.75);
        return dirichlet_eigs_below(*curve, 36.0);
    }();
    return s;
}

std::vector<double> grid(double a, double b, double h) {
    std::vector<double> t;
    for (double x = a; x <= b + 1e-12; x += h) t.push_back(x);
    return t;
}

const TracePeak* nearest(const std::vector<TracePeak>& peaks, double t) {
    const TracePeak* best = nullptr;
    for (const auto& p : peaks)
        if (!best || std::abs(p.t - t) < std::abs(best->t - t)) best = &p;
    return best;
}

}  // namespace

TEST_CASE("disk eigenvalues match squared Bessel zeros") {
    auto disk = to_curve_ellipse(1.0, 1.0);
    for (SymClass cls : all_sym_classes) {
        const Spectrum s = dirichlet_eigs(*disk, cls, 20);
        const auto oracle = disk_oracle(cls, 20);
        REQUIRE(s.eigs.size() == 20);
        CAPTURE(sym_class_name(cls));
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            worst = std::max(worst, std::abs(s.eigs[i].lambda - oracle[i]) / oracle[i]);
            CHECK(s.eigs[i].cls == cls);
        }
        CHECK(worst < 1e-6);
        CHECK(s.max_residual() < 1e-8);
    }
    const double j01 = bessel_zero_squares(0, 3.0).at(0);
    CHECK(std::abs(j01 - 5.78319) < 1e-5);
}

TEST_CASE("rectangle closed form") {
    const Spectrum s = rectangle_eigs(1.0, 1.0, 10);
    CHECK(std::abs(s.eigs[0].lambda - 2.0 * pi * pi) < 1e-12);
    CHECK(std::abs(s.eigs[1].lambda - 5.0 * pi * pi) < 1e-12);
    CHECK(s.eigs[1].lambda == s.eigs[2].lambda);
    for (std::size_t i = 1; i < s.eigs.size(); ++i) CHECK(s.eigs[i - 1].lambda <= s.eigs[i].lambda);
    CHECK_THROWS_AS(rectangle_eigs(0.0, 1.0, 3), ValidationError);
}

TEST_CASE("ellipse eigenvalues are stable under basis doubling") {
    auto curve = to_curve_ellipse(1.0, 0.75);
    MpsOptions big;
    big.basis_factor = 2.0;
    for (SymClass cls : {SymClass::EE, SymClass::OO}) {
        const Spectrum a = dirichlet_eigs(*curve, cls, 12);
        const Spectrum b = dirichlet_eigs(*curve, cls, 12, big);
        for (int i = 0; i < 12; ++i) CHECK(std::abs(a.eigs[i].lambda - b.eigs[i].lambda) < 1e-6 * a.eigs[i].lambda);
    }
}

TEST_CASE("ellipse spectrum: ordering, residuals and Weyl counting") {
    const Spectrum& s = ellipse_spectrum();
    REQUIRE(s.eigs.size() >= 200);
    for (std::size_t i = 1; i < s.eigs.size(); ++i) CHECK(s.eigs[i - 1].lambda <= s.eigs[i].lambda);
    CHECK(s.eigs.front().lambda > 0.0);
    CHECK(s.max_residual() < 1e-8);

    const double a = 1.0, b = 0.75;
    const double area = pi * a * b;
    const double perimeter = 4.0 * a * boost::math::ellint_2(std::sqrt(1.0 - b * b / (a * a)));
    const double Lambda = 36.0 * 36.0;
    const double n = static_cast<double>(s.eigs.size());
    const double two_term = weyl_count(area, perimeter, Lambda);
    const double area_only = weyl_count(area, perimeter, Lambda, false);
    CHECK(std::abs(n - two_term) / two_term < 0.05);
    // the area term alone overshoots by the boundary correction, about 7% here
    CHECK(std::abs(n - area_only) / area_only > 0.05);
    CHECK(std::abs(n - area_only) / area_only < 0.10);
}

TEST_CASE("wave trace basics") {
    const Spectrum s = rectangle_eigs(1.0, 1.0, 400);
    const auto tr = wave_trace(s, 0.05, {-1.3, 0.0, 1.3});
    CHECK(std::abs(tr.trace[1] - tr.weight_sum) < 1e-9 * tr.weight_sum);
    CHECK(std::abs(tr.trace[0] - tr.trace[2]) < 1e-9 * tr.weight_sum);
    CHECK_THROWS_AS(wave_trace(s, 0.0, {0.0}), ValidationError);
    CHECK(detect_lengths(wave_trace(Spectrum{}, 0.05, grid(0.0, 4.0, 0.01)), 0.1).empty());
}

TEST_CASE("square trace: peaks at 2 and 2 sqrt 2") {
    const Spectrum s = rectangle_eigs(1.0, 1.0, 20000);
    const auto fine = detect_lengths(wave_trace(s, 0.02, grid(0.0, 3.5, 0.004)), 0.05);
    const TracePeak* p2 = nearest(fine, 2.0);
    const TracePeak* p3 = nearest(fine, 2.0 * std::sqrt(2.0));
    REQUIRE(p2 != nullptr);
    REQUIRE(p3 != nullptr);
    CHECK(std::abs(p2->t - 2.0) < 0.01);
    CHECK(std::abs(p3->t - 2.0 * std::sqrt(2.0)) < 0.01);

    CHECK(p2->isolated);
    CHECK(p3->isolated);

    // once the window exceeds about a third of the gap the two lengths merge
    for (double w : {0.2, 0.3, 0.4}) {
        const auto coarse = detect_lengths(wave_trace(s, w, grid(0.0, 3.5, 0.004)), 0.05);
        int near = 0;
        for (const auto& p : coarse) near += (p.t > 1.8 && p.t < 3.0);
        CHECK(near == 1);
    }
}

TEST_CASE("ellipse trace: bouncing-ball peak at 3") {
    const Spectrum& s = ellipse_spectrum();
    const auto peaks = detect_lengths(wave_trace(s, 0.1, grid(0.0, 6.0, 0.005)), 0.2);
    const TracePeak* p = nearest(peaks, 3.0);
    REQUIRE(p != nullptr);
    CHECK(std::abs(p->t - 3.0) < 0.05);
    CHECK(p->isolated);

    // halving the window moves the detected location by less than the halved width
    const auto narrow = detect_lengths(wave_trace(s, 0.05, grid(0.0, 6.0, 0.005)), 0.1);
    const TracePeak* q = nearest(narrow, 3.0);
    REQUIRE(q != nullptr);
    CHECK(std::abs(q->t - p->t) < 0.05);
}
