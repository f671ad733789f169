#include <cmath>
#include <numbers>

#include "bbnf/classical.hpp"
#include "bbnf/errors.hpp"

namespace bbnf {

std::vector<double> forward_map(const DomainJet& jet, int order, ResonancePolicy policy) {
    return birkhoff_normalize(twist_map(generating_function(jet, order)), order, policy).form.b;
}

DomainJet invert(const std::vector<double>& b, OrbitTag tag, HyperbolicBranch branch, ResonancePolicy policy) {
    if (b.empty()) throw ValidationError("invert: need at least b0");
    double A = 0.0;
    switch (tag) {
        case OrbitTag::Elliptic:
            if (!(b[0] > 0.0 && b[0] < std::numbers::pi)) throw ValidationError("invert: elliptic b0 must lie in (0, pi)");
            A = 1.0 + std::cos(b[0]);
            break;
        case OrbitTag::Hyperbolic:
            if (!(b[0] > 0.0)) throw ValidationError("invert: hyperbolic b0 must be positive");
            A = 1.0 + (branch == HyperbolicBranch::Convex ? 1.0 : -1.0) * std::cosh(b[0]);
            break;
        case OrbitTag::Degenerate:
            throw Degenerate("invert: degenerate orbits are not invertible");
    }
    DomainJet jet;
    jet.coeffs.push_back((A - 2.0) / 4.0);

    const int n = static_cast<int>(b.size()) - 1;
    for (int k = 1; k <= n; ++k) {
        jet.coeffs.push_back(0.0);
        const double B = forward_map(jet, k, policy)[k];
        jet.coeffs.back() = 1.0;
        const double C = forward_map(jet, k, policy)[k] - B;
        if (std::abs(C) < 1e-12)
            throw TriangularBreakdown("invert: b" + std::to_string(k) + " does not depend on a" + std::to_string(k));
        jet.coeffs.back() = (b[k] - B) / C;
    }
    return jet;
}

}  // namespace bbnf
