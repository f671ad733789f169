#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/factorials.hpp>
#include <boost/rational.hpp>

#include "bbnf/errors.hpp"

namespace bbnf {

using cd = std::complex<double>;

/**
 * Phase-plane coordinate systems for transverse symbols.
 *
 *  - YEta:  canonical (y, eta) with {y, eta} = 1.
 *  - ZZbar: z = y + i eta, zbar = y - i eta, so {z, zbar} = -2i.
 *  - WWbar: w = y + eta, wbar = y - eta, so {w, wbar} = -2.
 */
enum class Basis { YEta, ZZbar, WWbar };

const char* basis_name(Basis b);

/// Value of the bracket {q1, q2} of the two basis variables.
inline cd bracket_constant(Basis b) {
    switch (b) {
        case Basis::YEta: return {1.0, 0.0};
        case Basis::ZZbar: return {0.0, -2.0};
        case Basis::WWbar: return {-2.0, 0.0};
    }
    return {1.0, 0.0};
}

using Exp2 = std::pair<int, int>;

inline double coeff_mag(const cd& c) { return std::abs(c); }
inline double coeff_mag(const Eigen::ArrayXcd& c) {
    return c.size() ? c.abs().maxCoeff() : 0.0;
}

/**
 * Truncated polynomial in two phase variables.
 *
 * The coefficient type is either a complex number (Poly2) or an array of
 * complex samples on an s-grid (SymPoly), in which case every ring
 * operation acts pointwise in s.
 */
template <class C>
class BasicPoly2 {
public:
    using Coeff = C;
    using Map = std::map<Exp2, C>;

    explicit BasicPoly2(Basis basis = Basis::YEta, int max_degree = 8, double prune = 0.0)
        : basis_(basis), max_degree_(max_degree), prune_(prune) {}

    static BasicPoly2 monomial(int m, int n, const C& c, Basis basis, int max_degree) {
        BasicPoly2 p(basis, max_degree);
        p.add_term(m, n, c);
        return p;
    }

    Basis basis() const { return basis_; }
    int max_degree() const { return max_degree_; }
    double prune_threshold() const { return prune_; }
    const Map& coeffs() const { return coeffs_; }
    bool empty() const { return coeffs_.empty(); }
    std::size_t size() const { return coeffs_.size(); }

    const C* find(int m, int n) const {
        auto it = coeffs_.find({m, n});
        return it == coeffs_.end() ? nullptr : &it->second;
    }

    /// Accumulate c into the (m, n) coefficient. Terms past max_degree are dropped.
    void add_term(int m, int n, const C& c) {
        if (m < 0 || n < 0 || m + n > max_degree_) return;
        auto it = coeffs_.find({m, n});
        if (it == coeffs_.end()) {
            if (coeff_mag(c) > prune_) coeffs_.emplace(Exp2{m, n}, c);
            return;
        }
        it->second += c;
        if (coeff_mag(it->second) <= prune_) coeffs_.erase(it);
    }

    void set_term(int m, int n, const C& c) {
        coeffs_.erase({m, n});
        add_term(m, n, c);
    }

    int degree() const {
        int d = -1;
        for (const auto& [e, c] : coeffs_) d = std::max(d, e.first + e.second);
        return d;
    }

    BasicPoly2 with_max_degree(int d) const {
        BasicPoly2 r(basis_, d, prune_);
        for (const auto& [e, c] : coeffs_) r.add_term(e.first, e.second, c);
        return r;
    }

    BasicPoly2 degree_slice(int d) const {
        BasicPoly2 r(basis_, max_degree_, prune_);
        for (const auto& [e, c] : coeffs_)
            if (e.first + e.second == d) r.add_term(e.first, e.second, c);
        return r;
    }

    template <class F>
    BasicPoly2 filtered(F keep) const {
        BasicPoly2 r(basis_, max_degree_, prune_);
        for (const auto& [e, c] : coeffs_)
            if (keep(e.first, e.second)) r.add_term(e.first, e.second, c);
        return r;
    }

    template <class F>
    auto map_coeffs(F f) const {
        using R = std::decay_t<decltype(f(std::declval<const C&>()))>;
        BasicPoly2<R> r(basis_, max_degree_, prune_);
        for (const auto& [e, c] : coeffs_) r.add_term(e.first, e.second, f(c));
        return r;
    }

    BasicPoly2 operator-() const {
        BasicPoly2 r(*this);
        for (auto& [e, c] : r.coeffs_) c = -c;
        return r;
    }

    BasicPoly2& operator+=(const BasicPoly2& o) {
        check_basis(o);
        for (const auto& [e, c] : o.coeffs_) add_term(e.first, e.second, c);
        return *this;
    }
    BasicPoly2& operator-=(const BasicPoly2& o) {
        check_basis(o);
        for (const auto& [e, c] : o.coeffs_) add_term(e.first, e.second, C(-c));
        return *this;
    }
    friend BasicPoly2 operator+(BasicPoly2 a, const BasicPoly2& b) { return a += b; }
    friend BasicPoly2 operator-(BasicPoly2 a, const BasicPoly2& b) { return a -= b; }

    BasicPoly2 scaled(const cd& s) const {
        BasicPoly2 r(basis_, max_degree_, prune_);
        for (const auto& [e, c] : coeffs_) r.add_term(e.first, e.second, C(s * c));
        return r;
    }

    /// Multiply every coefficient by an s-profile (SymPoly only).
    template <class A>
    BasicPoly2 scaled_by(const A& profile) const {
        BasicPoly2 r(basis_, max_degree_, prune_);
        for (const auto& [e, c] : coeffs_) r.add_term(e.first, e.second, C(c * profile));
        return r;
    }

    /// Partial derivative in the first (var = 0) or second (var = 1) basis variable.
    BasicPoly2 derivative(int var, int times = 1) const {
        BasicPoly2 r(basis_, max_degree_, prune_);
        for (const auto& [e, c] : coeffs_) {
            int m = e.first, n = e.second;
            int p = var == 0 ? m : n;
            if (p < times) continue;
            double f = 1.0;
            for (int k = 0; k < times; ++k) f *= p - k;
            if (var == 0)
                r.add_term(m - times, n, C(f * c));
            else
                r.add_term(m, n - times, C(f * c));
        }
        return r;
    }

    void check_basis(const BasicPoly2& o) const {
        if (o.basis_ != basis_)
            throw BasisMismatch(std::string("basis mismatch: ") + basis_name(basis_) + " vs " +
                                basis_name(o.basis_));
    }

private:
    Basis basis_;
    int max_degree_;
    double prune_;
    Map coeffs_;
};

using Poly2 = BasicPoly2<cd>;
using SymPoly = BasicPoly2<Eigen::ArrayXcd>;

/// Graded product truncated at the smaller of the two max degrees.
template <class C>
BasicPoly2<C> mul(const BasicPoly2<C>& a, const BasicPoly2<C>& b) {
    a.check_basis(b);
    BasicPoly2<C> r(a.basis(), std::min(a.max_degree(), b.max_degree()), a.prune_threshold());
    for (const auto& [ea, ca] : a.coeffs())
        for (const auto& [eb, cb] : b.coeffs())
            r.add_term(ea.first + eb.first, ea.second + eb.second, C(ca * cb));
    return r;
}

template <class C>
BasicPoly2<C> operator*(const BasicPoly2<C>& a, const BasicPoly2<C>& b) {
    return mul(a, b);
}

/// Canonical Poisson bracket, expressed in the basis of the arguments.
template <class C>
BasicPoly2<C> poisson(const BasicPoly2<C>& f, const BasicPoly2<C>& g) {
    f.check_basis(g);
    auto t = mul(f.derivative(0), g.derivative(1)) - mul(f.derivative(1), g.derivative(0));
    return t.scaled(bracket_constant(f.basis()));
}

/// One term of a Moyal expansion: Moyal order k and its N-power label.
template <class C>
struct MoyalTerm {
    int order;
    boost::rational<int> n_power;
    BasicPoly2<C> symbol;
};

template <class C>
struct MoyalSeries {
    std::vector<MoyalTerm<C>> terms;

    BasicPoly2<C> sum() const {
        if (terms.empty()) return BasicPoly2<C>();
        BasicPoly2<C> s(terms.front().symbol.basis(), terms.front().symbol.max_degree());
        for (const auto& t : terms) s += t.symbol;
        return s;
    }
};

namespace detail {

/// k-th power of the Poisson bivector applied to (f, g), without the basis constant.
template <class C>
BasicPoly2<C> bivector_power(const BasicPoly2<C>& f, const BasicPoly2<C>& g, int k) {
    BasicPoly2<C> r(f.basis(), std::min(f.max_degree(), g.max_degree()), f.prune_threshold());
    for (int j = 0; j <= k; ++j) {
        double binom = boost::math::binomial_coefficient<double>(k, j);
        double sign = (j % 2) ? -1.0 : 1.0;
        auto df = f.derivative(0, k - j).derivative(1, j);
        auto dg = g.derivative(0, j).derivative(1, k - j);
        if (df.empty() || dg.empty()) continue;
        r += mul(df, dg).scaled(binom * sign);
    }
    return r;
}

}  // namespace detail

/**
 * Weyl-symbol commutator f * g - g * f with [y, eta] = i.
 *
 * Only odd Moyal orders k survive. Term k is labelled with the N-power
 * -(k - 1) * hbar_weight, so the k = 1 term (equal to i {f, g}) carries N^0.
 */
template <class C>
MoyalSeries<C> moyal_commutator(const BasicPoly2<C>& f, const BasicPoly2<C>& g,
                                boost::rational<int> hbar_weight = {1, 2}) {
    f.check_basis(g);
    MoyalSeries<C> out;
    int kmax = std::max(0, std::min(f.degree(), g.degree()));
    cd c = bracket_constant(f.basis());
    for (int k = 1; k <= kmax; k += 2) {
        auto pk = detail::bivector_power(f, g, k);
        if (pk.empty()) continue;
        cd factor = 2.0 * std::pow(cd(0.0, 0.5) * c, k) /
                    boost::math::factorial<double>(static_cast<unsigned>(k));
        out.terms.push_back({k, -(k - 1) * hbar_weight, pk.scaled(factor)});
    }
    return out;
}

/// Full Moyal (Weyl-symbol) product f * g with [y, eta] = i.
template <class C>
BasicPoly2<C> moyal_product(const BasicPoly2<C>& f, const BasicPoly2<C>& g) {
    f.check_basis(g);
    int kmax = std::max(0, std::min(f.degree(), g.degree()));
    cd c = bracket_constant(f.basis());
    BasicPoly2<C> r(f.basis(), std::min(f.max_degree(), g.max_degree()), f.prune_threshold());
    for (int k = 0; k <= kmax; ++k) {
        auto pk = detail::bivector_power(f, g, k);
        if (pk.empty()) continue;
        cd factor = std::pow(cd(0.0, 0.5) * c, k) /
                    boost::math::factorial<double>(static_cast<unsigned>(k));
        r += pk.scaled(factor);
    }
    return r;
}

namespace detail {

/// Rows give the old basis variables as linear forms in the new ones.
inline Eigen::Matrix2cd to_yeta_matrix(Basis b) {
    Eigen::Matrix2cd m;
    const cd i(0.0, 1.0);
    switch (b) {
        case Basis::YEta: m << 1.0, 0.0, 0.0, 1.0; break;
        case Basis::ZZbar: m << 1.0, i, 1.0, -i; break;     // z, zbar in (y, eta)
        case Basis::WWbar: m << 1.0, 1.0, 1.0, -1.0; break;  // w, wbar in (y, eta)
    }
    return m;
}

template <class C>
BasicPoly2<C> substitute_linear(const BasicPoly2<C>& p, const Eigen::Matrix2cd& m, Basis target) {
    BasicPoly2<C> r(target, p.max_degree(), p.prune_threshold());
    for (const auto& [e, c] : p.coeffs()) {
        // (m00 u + m01 v)^a (m10 u + m11 v)^b
        std::vector<cd> acc{1.0};
        auto times_linear = [&](cd a, cd b) {
            std::vector<cd> next(acc.size() + 1, 0.0);
            for (std::size_t k = 0; k < acc.size(); ++k) {
                next[k + 1] += acc[k] * a;  // index = power of u
                next[k] += acc[k] * b;
            }
            acc.swap(next);
        };
        for (int k = 0; k < e.first; ++k) times_linear(m(0, 0), m(0, 1));
        for (int k = 0; k < e.second; ++k) times_linear(m(1, 0), m(1, 1));
        int deg = e.first + e.second;
        for (int pu = 0; pu <= deg; ++pu)
            if (acc[pu] != cd(0.0)) r.add_term(pu, deg - pu, C(acc[pu] * c));
    }
    return r;
}

}  // namespace detail

/// Re-express a symbol in another basis.
template <class C>
BasicPoly2<C> to_basis(const BasicPoly2<C>& p, Basis target) {
    if (p.basis() == target) return p;
    BasicPoly2<C> yeta = p;
    if (p.basis() != Basis::YEta)
        yeta = detail::substitute_linear(p, detail::to_yeta_matrix(p.basis()), Basis::YEta);
    if (target == Basis::YEta) return yeta;
    Eigen::Matrix2cd inv = detail::to_yeta_matrix(target).inverse();
    return detail::substitute_linear(yeta, inv, target);
}

template <class C>
BasicPoly2<C> to_yeta(const BasicPoly2<C>& p) { return to_basis(p, Basis::YEta); }
template <class C>
BasicPoly2<C> to_zzbar(const BasicPoly2<C>& p) { return to_basis(p, Basis::ZZbar); }
template <class C>
BasicPoly2<C> to_wwbar(const BasicPoly2<C>& p) { return to_basis(p, Basis::WWbar); }

/// Largest coefficient magnitude; zero for the empty polynomial.
template <class C>
double max_abs(const BasicPoly2<C>& p) {
    double m = 0.0;
    for (const auto& [e, c] : p.coeffs()) m = std::max(m, coeff_mag(c));
    return m;
}

/// Evaluate a complex polynomial at a point of its basis variables.
cd evaluate(const Poly2& p, cd q1, cd q2);

/// Substitute q1 = u(.), q2 = v(.) and truncate at the result degree.
Poly2 compose(const Poly2& f, const Poly2& u, const Poly2& v, int max_degree);

/// The quadratic action in a basis: (y^2 + eta^2)/2, zzbar/2 or wwbar/2.
Poly2 action_symbol(Basis b, bool hyperbolic, int max_degree);

}  // namespace bbnf
