#include <cmath>

#include <boost/math/special_functions/binomial.hpp>

#include "bbnf/errors.hpp"
#include "bbnf/qnf.hpp"

namespace bbnf {

namespace {

constexpr int symbol_degree_cap = 64;

cd monomial_weight(QnfCase kase, int m, int n) {
    return kase == QnfCase::Elliptic ? cd(0.0, m - n) : cd(m - n, 0.0);
}

SymPoly commutator_sum(const SymPoly& a, const SymPoly& x) {
    SymPoly out(a.basis(), symbol_degree_cap);
    for (const auto& t : moyal_commutator(a, x).terms) out += t.symbol;
    return out;
}

}  // namespace

void SymbolJet::add(int m, int p, int q, const SFun& coeff, int r_power) {
    if (coeff.size() != nodes || std::abs(coeff.length() - L) > 1e-12 * L)
        throw ValidationError("SymbolJet::add: coefficient grid does not match the jet");
    SymbolTerm t;
    t.m = m;
    t.r_power = r_power;
    t.symbol = SymPoly::monomial(p, q, coeff.values(), Basis::YEta, symbol_degree_cap);
    terms.push_back(std::move(t));
}

void SymbolJet::validate() const {
    if (!(L > 0.0)) throw ValidationError("SymbolJet: L must be positive");
    for (const auto& t : terms) {
        if (t.m < 3)
            throw ValidationError("SymbolJet: level m = " + std::to_string(t.m) +
                                  " is not a perturbation (the quadratic part comes from the model)");
        if (t.r_power < 0) throw ValidationError("SymbolJet: negative power of R");
        for (const auto& [e, c] : t.symbol.coeffs()) {
            const int d = e.first + e.second;
            if (d > t.m - 2 * t.r_power)
                throw ValidationError("SymbolJet: degree " + std::to_string(d) + " exceeds m - 2r at level m = " +
                                      std::to_string(t.m));
            if ((t.m - d) % 2 != 0)
                throw ValidationError("SymbolJet: parity of a degree-" + std::to_string(d) +
                                      " monomial does not match m = " + std::to_string(t.m));
            if (c.size() != nodes) throw ValidationError("SymbolJet: coefficient sample count mismatch");
        }
    }
}

SymbolJet linearize(const StraighteningData& data, const SymbolJet& jet) {
    if (jet.alpha) throw ValidationError("linearize: jet is already linearized");
    if (jet.kase != data.kase) throw ValidationError("linearize: case tags of data and jet differ");
    if (std::abs(jet.L - data.L) > 1e-12 * data.L || jet.nodes != data.b00.size())
        throw ValidationError("linearize: jet grid does not match the straightening data");
    jet.validate();

    const Eigen::ArrayXcd phi = metaplectic_phase(data).values();
    SymbolJet out = jet;
    out.alpha = data.alpha;
    const Basis b = qnf_basis(jet.kase);
    for (auto& t : out.terms) {
        const SymPoly src = to_basis(t.symbol, b);
        SymPoly dst(b, symbol_degree_cap);
        for (const auto& [e, c] : src.coeffs()) {
            const cd g = monomial_weight(jet.kase, e.first, e.second);
            dst.add_term(e.first, e.second, c * (-g * phi).exp());
        }
        t.symbol = dst;
    }
    return out;
}

SymPoly SymbolOperator::zero() const { return SymPoly(qnf_basis(kase), symbol_degree_cap); }

SymPoly SymbolOperator::principal(int q) const {
    auto it = levels.find(q);
    if (it == levels.end()) return zero();
    auto jt = it->second.find(0);
    return jt == it->second.end() ? zero() : jt->second;
}

void SymbolOperator::add(int q, int r, const SymPoly& a) {
    if (a.empty()) return;
    auto& slot = levels[q];
    auto it = slot.find(r);
    if (it == slot.end())
        slot.emplace(r, to_basis(a, qnf_basis(kase)).with_max_degree(symbol_degree_cap));
    else
        it->second += to_basis(a, qnf_basis(kase));
}

SymbolOperator to_operator(const SymbolJet& jet) {
    if (!jet.alpha) throw ValidationError("to_operator: linearize the jet first (alpha unknown)");
    jet.validate();
    SymbolOperator op;
    op.kase = jet.kase;
    op.L = jet.L;
    op.alpha = *jet.alpha;
    op.grid = ChebGrid::get(jet.nodes, jet.L);
    for (const auto& t : jet.terms) op.add(t.m - 2, t.r_power, t.symbol);
    return op;
}

SymPoly transport_derivative(const SymbolOperator& ctx, const SymPoly& x) {
    const Eigen::MatrixXcd D = ctx.grid->D.cast<cd>();
    const SymPoly xb = to_basis(x, qnf_basis(ctx.kase));
    SymPoly out(xb.basis(), symbol_degree_cap);
    const double w = ctx.alpha / ctx.L;
    for (const auto& [e, c] : xb.coeffs()) {
        const cd g = monomial_weight(ctx.kase, e.first, e.second);
        out.add_term(e.first, e.second, (D * c.matrix()).array() - (w * g) * c);
    }
    return out;
}

namespace {

SymbolOperator commutator(const SymbolOperator& op, bool with_leading, const SymPoly& X, int qx, int max_level) {
    SymbolOperator res = op;
    res.levels.clear();
    const cd mi(0.0, -1.0);
    if (with_leading && qx <= max_level) res.add(qx, 0, transport_derivative(op, X).scaled(mi));
    for (const auto& [qa, by_r] : op.levels) {
        if (qa + qx > max_level) continue;
        for (const auto& [r, A] : by_r) {
            res.add(qa + qx, r, commutator_sum(A, X));
            SymPoly ad = X;
            for (int k = 1; k <= r; ++k) {
                ad = transport_derivative(op, ad).scaled(mi);
                const double binom = boost::math::binomial_coefficient<double>(r, k);
                res.add(qa + qx, r - k, moyal_product(A, ad).scaled(binom));
            }
        }
    }
    return res;
}

}  // namespace

SymbolOperator conjugate(const SymbolOperator& op, const SymPoly& X, int q, int max_level, double t) {
    if (q < 1) throw ValidationError("conjugate: exponent level must be positive");
    SymbolOperator out = op;
    SymbolOperator term = op;
    const SymPoly Xb = to_basis(X, qnf_basis(op.kase));
    if (Xb.empty()) return out;
    for (int k = 1; k * q <= max_level; ++k) {
        SymbolOperator next = commutator(term, k == 1, Xb, q, max_level);
        if (next.levels.empty()) break;
        for (auto& [lv, by_r] : next.levels)
            for (auto& [r, A] : by_r) {
                A = A.scaled(t / k);
                out.add(lv, r, A);
            }
        term = std::move(next);
    }
    return out;
}

}  // namespace bbnf
