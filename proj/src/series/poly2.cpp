#include "bbnf/series/poly2.hpp"

namespace bbnf {

const char* basis_name(Basis b) {
    switch (b) {
        case Basis::YEta: return "yeta";
        case Basis::ZZbar: return "z-zbar";
        case Basis::WWbar: return "w-wbar";
    }
    return "?";
}

cd evaluate(const Poly2& p, cd q1, cd q2) {
    cd sum = 0.0;
    for (const auto& [e, c] : p.coeffs()) sum += c * std::pow(q1, e.first) * std::pow(q2, e.second);
    return sum;
}

Poly2 compose(const Poly2& f, const Poly2& u, const Poly2& v, int max_degree) {
    const Basis b = u.basis();
    Poly2 ud = u.with_max_degree(max_degree), vd = v.with_max_degree(max_degree);
    std::vector<Poly2> up, vp;
    Poly2 one(b, max_degree);
    one.add_term(0, 0, 1.0);
    up.push_back(one);
    vp.push_back(one);
    Poly2 out(b, max_degree);
    for (const auto& [e, c] : f.coeffs()) {
        while (static_cast<int>(up.size()) <= e.first) up.push_back(mul(up.back(), ud));
        while (static_cast<int>(vp.size()) <= e.second) vp.push_back(mul(vp.back(), vd));
        out += mul(up[e.first], vp[e.second]).scaled(c);
    }
    return out;
}

Poly2 action_symbol(Basis b, bool hyperbolic, int max_degree) {
    Poly2 p(Basis::YEta, max_degree);
    p.add_term(2, 0, 0.5);
    p.add_term(0, 2, hyperbolic ? -0.5 : 0.5);
    return to_basis(p, b);
}

}  // namespace bbnf
