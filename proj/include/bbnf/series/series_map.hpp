#pragma once

#include "bbnf/series/poly2.hpp"

namespace bbnf {

/// Polynomial map of the phase plane: (q1, q2) -> (first, second).
struct SeriesMap {
    Poly2 first;
    Poly2 second;

    Basis basis() const { return first.basis(); }
    int max_degree() const { return std::min(first.max_degree(), second.max_degree()); }

    /// Jacobian of the degree-one part.
    Eigen::Matrix2cd linear_part() const;

    /// (this o inner)(q) = this(inner(q)).
    SeriesMap after(const SeriesMap& inner) const;

    SeriesMap degree_truncated(int d) const;

    /// det D(map) - 1, kept up to degree max_degree - 1 where it is reliable.
    Poly2 symplecticity_residual() const;

    /// Point image of (q1, q2).
    std::pair<cd, cd> operator()(cd q1, cd q2) const;

    /// Linear change of coordinates: new = M * old, map conjugated accordingly.
    SeriesMap conjugate_linear(const Eigen::Matrix2cd& M, Basis new_basis) const;

    static SeriesMap identity(Basis b, int max_degree);
};

}  // namespace bbnf
