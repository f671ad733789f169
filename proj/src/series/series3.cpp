#include "bbnf/series/series3.hpp"

#include <cmath>

namespace bbnf {

Series3 Series3::constant(double c, int max_degree) {
    Series3 r(max_degree);
    r.add_term(0, 0, 0, c);
    return r;
}

Series3 Series3::variable(int which, int max_degree) {
    Series3 r(max_degree);
    Exp3 e{0, 0, 0};
    e[which] = 1;
    r.add_term(e[0], e[1], e[2], 1.0);
    return r;
}

double Series3::coeff(int a, int b, int c) const {
    auto it = coeffs_.find({a, b, c});
    return it == coeffs_.end() ? 0.0 : it->second;
}

void Series3::add_term(int a, int b, int c, double v) {
    if (a + b + c > max_degree_ || v == 0.0) return;
    auto [it, inserted] = coeffs_.emplace(Exp3{a, b, c}, v);
    if (!inserted) {
        it->second += v;
        if (it->second == 0.0) coeffs_.erase(it);
    }
}

Series3 Series3::operator+(const Series3& o) const {
    Series3 r = *this;
    r.max_degree_ = std::min(max_degree_, o.max_degree_);
    for (const auto& [e, v] : o.coeffs_) r.add_term(e[0], e[1], e[2], v);
    return r;
}

Series3 Series3::operator-(const Series3& o) const { return *this + o.scaled(-1.0); }

Series3 Series3::operator*(const Series3& o) const {
    Series3 r(std::min(max_degree_, o.max_degree_));
    for (const auto& [ea, va] : coeffs_)
        for (const auto& [eb, vb] : o.coeffs_)
            r.add_term(ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], va * vb);
    return r;
}

Series3 Series3::scaled(double s) const {
    Series3 r(max_degree_);
    for (const auto& [e, v] : coeffs_) r.add_term(e[0], e[1], e[2], s * v);
    return r;
}

Series3 Series3::derivative(int var) const {
    Series3 r(max_degree_);
    for (const auto& [e, v] : coeffs_) {
        if (e[var] == 0) continue;
        Exp3 d = e;
        d[var] -= 1;
        r.add_term(d[0], d[1], d[2], v * e[var]);
    }
    return r;
}

Series3 Series3::degree_slice(int deg) const {
    Series3 r(max_degree_);
    for (const auto& [e, v] : coeffs_)
        if (e[0] + e[1] + e[2] == deg) r.add_term(e[0], e[1], e[2], v);
    return r;
}

int Series3::degree() const {
    int d = -1;
    for (const auto& [e, v] : coeffs_) d = std::max(d, e[0] + e[1] + e[2]);
    return d;
}

double Series3::evaluate(double x, double x1, double s) const {
    double sum = 0.0;
    for (const auto& [e, v] : coeffs_)
        sum += v * std::pow(x, e[0]) * std::pow(x1, e[1]) * std::pow(s, e[2]);
    return sum;
}

Poly2 Series3::substitute_s(const Poly2& S) const {
    const int D = max_degree_;
    std::vector<Poly2> spow;
    spow.emplace_back(Basis::YEta, D);
    spow[0].add_term(0, 0, 1.0);
    Poly2 Sd = S.with_max_degree(D);
    Poly2 out(Basis::YEta, D);
    for (const auto& [e, v] : coeffs_) {
        while (static_cast<int>(spow.size()) <= e[2]) spow.push_back(mul(spow.back(), Sd));
        for (const auto& [es, cs] : spow[e[2]].coeffs())
            out.add_term(e[0] + es.first, e[1] + es.second, v * cs);
    }
    return out;
}

Series3 sqrt_one_plus(const Series3& u) {
    const int D = u.max_degree();
    Series3 result = Series3::constant(1.0, D);
    Series3 power = Series3::constant(1.0, D);
    for (int k = 1; k <= D; ++k) {
        power = power * u;
        if (power.coeffs().empty()) break;
        double b = 1.0;  // binomial(1/2, k)
        for (int j = 0; j < k; ++j) b *= (0.5 - j) / (j + 1);
        result = result + power.scaled(b);
    }
    return result;
}

Poly2 implicit_eliminate(const Series3& phi) {
    const int D = phi.max_degree();
    const double A = 2.0 * phi.coeff(0, 0, 2);
    if (std::abs(A) < 1e-14)
        throw Degenerate("implicit_eliminate: d2phi/ds2 vanishes at the origin (A = 0)");
    Series3 phis = phi.derivative(2);
    Poly2 S(Basis::YEta, D);
    for (int it = 0; it <= D; ++it) {
        Poly2 r = phis.substitute_s(S);
        S -= r.scaled(1.0 / A);
    }
    return S;
}

}  // namespace bbnf
