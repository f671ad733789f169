#include "bbnf/series/series_map.hpp"

namespace bbnf {

namespace {

cd coeff(const Poly2& p, int m, int n) {
    const cd* c = p.find(m, n);
    return c ? *c : cd(0.0);
}

Poly2 linear_form(cd a, cd b, Basis basis, int d) {
    Poly2 p(basis, d);
    p.add_term(1, 0, a);
    p.add_term(0, 1, b);
    return p;
}

}  // namespace

Eigen::Matrix2cd SeriesMap::linear_part() const {
    Eigen::Matrix2cd m;
    m << coeff(first, 1, 0), coeff(first, 0, 1), coeff(second, 1, 0), coeff(second, 0, 1);
    return m;
}

SeriesMap SeriesMap::after(const SeriesMap& inner) const {
    const int d = std::min(max_degree(), inner.max_degree());
    return {compose(first, inner.first, inner.second, d), compose(second, inner.first, inner.second, d)};
}

SeriesMap SeriesMap::degree_truncated(int d) const {
    return {first.with_max_degree(d), second.with_max_degree(d)};
}

Poly2 SeriesMap::symplecticity_residual() const {
    Poly2 det = mul(first.derivative(0), second.derivative(1)) - mul(first.derivative(1), second.derivative(0));
    det.add_term(0, 0, -1.0);
    return det.filtered([&](int m, int n) { return m + n <= max_degree() - 1; });
}

std::pair<cd, cd> SeriesMap::operator()(cd q1, cd q2) const {
    return {evaluate(first, q1, q2), evaluate(second, q1, q2)};
}

SeriesMap SeriesMap::conjugate_linear(const Eigen::Matrix2cd& M, Basis new_basis) const {
    // old = Minv * new ; image_new = M * image_old(old(new))
    const int d = max_degree();
    Eigen::Matrix2cd Mi = M.inverse();
    Poly2 o1 = linear_form(Mi(0, 0), Mi(0, 1), new_basis, d);
    Poly2 o2 = linear_form(Mi(1, 0), Mi(1, 1), new_basis, d);
    auto relabel = [&](const Poly2& p) {
        Poly2 r(new_basis, p.max_degree());
        for (const auto& [e, c] : p.coeffs()) r.add_term(e.first, e.second, c);
        return r;
    };
    Poly2 f1 = compose(relabel(first), o1, o2, d);
    Poly2 f2 = compose(relabel(second), o1, o2, d);
    return {f1.scaled(M(0, 0)) + f2.scaled(M(0, 1)), f1.scaled(M(1, 0)) + f2.scaled(M(1, 1))};
}

SeriesMap SeriesMap::identity(Basis b, int max_degree) {
    return {linear_form(1.0, 0.0, b, max_degree), linear_form(0.0, 1.0, b, max_degree)};
}

}  // namespace bbnf
