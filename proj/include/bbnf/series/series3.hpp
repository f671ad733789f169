#pragma once

#include <array>
#include <map>

#include "bbnf/series/poly2.hpp"

namespace bbnf {

/// Truncated real polynomial in (x, x1, s), total degree <= max_degree.
class Series3 {
public:
    using Exp3 = std::array<int, 3>;

    explicit Series3(int max_degree = 8) : max_degree_(max_degree) {}

    static Series3 constant(double c, int max_degree);
    static Series3 variable(int which, int max_degree);

    int max_degree() const { return max_degree_; }
    const std::map<Exp3, double>& coeffs() const { return coeffs_; }
    double coeff(int a, int b, int c) const;
    void add_term(int a, int b, int c, double v);

    Series3 operator+(const Series3& o) const;
    Series3 operator-(const Series3& o) const;
    Series3 operator*(const Series3& o) const;
    Series3 scaled(double s) const;
    Series3 derivative(int var) const;
    Series3 degree_slice(int d) const;
    int degree() const;

    double evaluate(double x, double x1, double s) const;

    /// Substitute s = S(x, x1), giving a bivariate series in the YEta slot
    /// layout (first variable x, second x1), truncated at max_degree.
    Poly2 substitute_s(const Poly2& S) const;

private:
    int max_degree_;
    std::map<Exp3, double> coeffs_;
};

/// sqrt(1 + u) for a series u without constant term.
Series3 sqrt_one_plus(const Series3& u);

/**
 * Series s*(x, x1) with d phi/ds (x, x1, s*) = 0 to the truncation order.
 * Throws Degenerate when d^2 phi/ds^2 vanishes at the origin.
 */
Poly2 implicit_eliminate(const Series3& phi);

}  // namespace bbnf
