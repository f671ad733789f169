#include <cmath>

#include "bbnf/errors.hpp"
#include "bbnf/qnf.hpp"

namespace bbnf {

const char* case_name(QnfCase c) { return c == QnfCase::Elliptic ? "elliptic" : "hyperbolic"; }

Basis qnf_basis(QnfCase kase) { return kase == QnfCase::Elliptic ? Basis::ZZbar : Basis::WWbar; }

StraighteningData solve_straightening(double R_A, double R_B, double L, QnfCase kase, int nodes) {
    if (!(L > 0.0)) throw ValidationError("solve_straightening: L must be positive");
    if (nodes < 9) throw ValidationError("solve_straightening: too few nodes");

    StraighteningData d;
    d.L = L;
    d.kase = kase;
    const double den = R_A + R_B - 2.0 * L, num = L * (R_B - L);
    const double tiny = 1e-14 * (std::abs(R_A) + std::abs(R_B) + L);
    if (std::abs(den) <= tiny) {
        if (std::abs(num) > tiny) throw NoAdmissibleRoot("solve_straightening: the two radicals never agree");
        d.s0 = 0.5 * L;
    } else {
        d.s0 = num / den;
    }
    if (!(d.s0 > 0.0 && d.s0 < L)) throw NoAdmissibleRoot("solve_straightening: s0 outside (0, L)");

    const double ell2 = d.s0 * (R_A - d.s0);
    const double s0 = d.s0;
    const bool elliptic = kase == QnfCase::Elliptic;
    if (elliptic) {
        if (!(ell2 > 0.0)) throw NoAdmissibleRoot("solve_straightening: no elliptic root (s0 (R_A - s0) <= 0)");
        d.ell = std::sqrt(ell2);
    } else {
        if (!(ell2 < 0.0)) throw NoAdmissibleRoot("solve_straightening: no hyperbolic root (s0 (R_A - s0) >= 0)");
        d.ell = std::sqrt(-ell2);
        if (!(d.ell > std::max(s0, L - s0)))
            throw NoAdmissibleRoot("solve_straightening: theta_11 vanishes inside [0, L]");
    }
    const double ell = d.ell, sg = elliptic ? 1.0 : -1.0;

    // theta^2 = ell + sg (s - s0)^2 / ell  (elliptic), ell - (s - s0)^2 / ell (hyperbolic, |theta_11^2|)
    auto theta = [=](double s) { return std::sqrt(ell + sg * (s - s0) * (s - s0) / ell); };
    auto dtheta = [=](double s) { return sg * (s - s0) / (ell * theta(s)); };
    auto d2theta = [=](double s) {
        const double t1 = dtheta(s);
        return (sg / ell - t1 * t1) / theta(s);
    };

    d.theta = SFun::from_function([&](double s) { return cd(theta(s)); }, L, nodes);
    d.b00 = SFun::from_function([&](double s) { return cd(sg / (theta(s) * theta(s))); }, L, nodes);
    d.kappa22 = SFun::from_function([&](double s) { return cd(0.5 * dtheta(s) / theta(s)); }, L, nodes);
    d.c00 = d.kappa22.scaled(2.0);
    d.alpha = d.b00.integral().real();

    for (int i = 0; i < d.theta.size(); ++i) {
        const double s = d.theta.nodes()(i), th = theta(s);
        d.ode_residual = std::max(d.ode_residual, std::abs(d2theta(s) - sg / (th * th * th)));
    }
    return d;
}

QuadraticModel quadratic_model(const StraighteningData& data) {
    QuadraticModel q;
    q.b00 = data.b00;
    q.kase = data.kase;
    q.y2_sign = data.kase == QnfCase::Elliptic ? 1 : -1;
    q.alpha = data.alpha;
    return q;
}

SFun metaplectic_phase(const StraighteningData& data) {
    return (data.b00 - SFun::constant(data.alpha / data.L, data.L, data.b00.size())).cumulative_integral();
}

}  // namespace bbnf
