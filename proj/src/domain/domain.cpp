#include "bbnf/domain.hpp"

#include <cmath>

#include "bbnf/errors.hpp"

namespace bbnf {

double DomainJet::f(double x) const {
    double x2 = x * x, p = x2, sum = 1.0;
    for (double a : coeffs) {
        sum += a * p;
        p *= x2;
    }
    return sum;
}

double DomainJet::df(double x) const {
    double sum = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        int e = 2 * static_cast<int>(k) + 2;
        sum += coeffs[k] * e * std::pow(x, e - 1);
    }
    return sum;
}

double DomainJet::d2f(double x) const {
    double sum = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        int e = 2 * static_cast<int>(k) + 2;
        sum += coeffs[k] * e * (e - 1) * std::pow(x, e - 2);
    }
    return sum;
}

void DomainJet::validate() const {
    if (coeffs.empty()) throw ValidationError("jet needs at least a0");
    if (!(scale > 0.0)) throw ValidationError("jet scale must be positive");
    for (double a : coeffs)
        if (!std::isfinite(a)) throw ValidationError("jet coefficients must be finite");
}

const char* tag_name(OrbitTag t) {
    switch (t) {
        case OrbitTag::Elliptic: return "elliptic";
        case OrbitTag::Hyperbolic: return "hyperbolic";
        case OrbitTag::Degenerate: return "degenerate";
    }
    return "?";
}

double curvature_radius(const DomainJet& jet) {
    if (jet.a(0) == 0.0) throw Degenerate("curvature_radius: flat vertex (a0 = 0)");
    return jet.scale / (2.0 * std::abs(jet.a(0)));
}

Eigen::Matrix2d linear_poincare(const DomainJet& jet) {
    const double A = jet.A();
    Eigen::Matrix2d P;
    P << A - 1.0, -A, 2.0 - A, A - 1.0;
    return P;
}

OrbitClass classify_trace(double trace) {
    OrbitClass c;
    c.trace = trace;
    const double half = 0.5 * trace;
    if (std::abs(std::abs(trace) - 2.0) < degeneracy_tolerance) {
        c.tag = OrbitTag::Degenerate;
    } else if (std::abs(half) < 1.0) {
        c.tag = OrbitTag::Elliptic;
        c.alpha = std::acos(half);
    } else {
        c.tag = OrbitTag::Hyperbolic;
        c.lambda = std::acosh(std::abs(half));
    }
    return c;
}

OrbitClass classify(const DomainJet& jet) {
    OrbitClass c = classify_trace(2.0 * (jet.A() - 1.0));
    c.a_zero_excluded = std::abs(jet.A()) < degeneracy_tolerance;
    return c;
}

DomainJet ellipse_jet(double semi_x, double semi_y, int n) {
    if (!(semi_x > 0.0 && semi_y > 0.0)) throw ValidationError("ellipse_jet: semi-axes must be positive");
    // sqrt(1 - r x^2) in the normalized variable, r = (semi_y / semi_x)^2
    const double r = (semi_y / semi_x) * (semi_y / semi_x);
    DomainJet jet;
    jet.scale = semi_y;
    double binom = 1.0, rp = 1.0;
    for (int k = 0; k <= n; ++k) {
        binom *= (0.5 - k) / (k + 1);  // binomial(1/2, k+1)
        rp *= -r;
        jet.coeffs.push_back(binom * rp);
    }
    return jet;
}

}  // namespace bbnf
