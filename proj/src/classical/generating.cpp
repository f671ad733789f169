#include "bbnf/classical.hpp"

#include "bbnf/errors.hpp"

namespace bbnf {

Series3 generating_function(const DomainJet& jet, int order) {
    jet.validate();
    if (order < 0) throw ValidationError("generating_function: order must be non-negative");
    const int D = 2 * order + 2;
    const Series3 x = Series3::variable(0, D), x1 = Series3::variable(1, D), s = Series3::variable(2, D);

    // f(s)^2 - 1 through degree D; coefficients past the jet length are zero
    Series3 f = Series3::constant(1.0, D);
    for (int k = 0; k <= order; ++k) f.add_term(0, 0, 2 * k + 2, jet.a(k));
    Series3 u = f * f;
    u.add_term(0, 0, 0, -1.0);

    const Series3 dx = x - s, dx1 = x1 - s;
    return sqrt_one_plus(dx * dx + u) + sqrt_one_plus(dx1 * dx1 + u);
}

TwistMapJet twist_map(const Series3& phi) {
    const int D = phi.max_degree();
    const Poly2 S = implicit_eliminate(phi);  // throws Degenerate when A = 0
    const double A = 2.0 * phi.coeff(0, 0, 2);
    const Poly2 Phi = phi.substitute_s(S);
    const Poly2 Phi_x = Phi.derivative(0), Phi_x1 = Phi.derivative(1);

    const int d = D - 1;
    const Poly2 x = Poly2::monomial(1, 0, 1.0, Basis::YEta, d);
    const Poly2 xi = Poly2::monomial(0, 1, 1.0, Basis::YEta, d);

    // solve Phi_x(x, x1) = xi for x1 = x1(x, xi), one degree per sweep
    Poly2 x1 = x.scaled(A - 1.0) - xi.scaled(A);
    for (int it = 0; it < d; ++it) x1 += (compose(Phi_x, x, x1, d) - xi).scaled(A);

    Poly2 xi1 = -compose(Phi_x1, x, x1, d);
    return {SeriesMap{x1, xi1}, A};
}

}  // namespace bbnf
