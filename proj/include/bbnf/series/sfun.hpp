#pragma once

#include <functional>
#include <memory>

#include <Eigen/Dense>

#include "bbnf/series/poly2.hpp"

namespace bbnf {

/// Chebyshev-Lobatto collocation grid on [0, L] with cached operators.
struct ChebGrid {
    int n;                     ///< number of nodes
    double L;
    Eigen::VectorXd nodes;     ///< ascending, nodes(0) = 0, nodes(n-1) = L
    Eigen::MatrixXd D;         ///< d/ds
    Eigen::MatrixXd D2;        ///< d^2/ds^2
    Eigen::MatrixXd cumint;    ///< values -> int_0^s
    Eigen::RowVectorXd weights;  ///< Clenshaw-Curtis weights for int_0^L

    static std::shared_ptr<const ChebGrid> get(int n, double L);
};

/**
 * Smooth complex function of s on [0, L], stored by its values at the
 * Chebyshev-Lobatto nodes and interpolated spectrally in between.
 */
class SFun {
public:
    static constexpr int default_nodes = 129;

    SFun(double L, int n = default_nodes);
    SFun(std::shared_ptr<const ChebGrid> grid, Eigen::ArrayXcd values);

    static SFun from_function(const std::function<cd(double)>& f, double L, int n = default_nodes);
    static SFun constant(cd c, double L, int n = default_nodes);

    double length() const { return grid_->L; }
    int size() const { return grid_->n; }
    const ChebGrid& grid() const { return *grid_; }
    std::shared_ptr<const ChebGrid> grid_ptr() const { return grid_; }
    const Eigen::ArrayXcd& values() const { return values_; }
    const Eigen::VectorXd& nodes() const { return grid_->nodes; }

    /// Barycentric interpolation; exact at the nodes.
    cd operator()(double s) const;

    SFun derivative() const;
    /// Primitive vanishing at s = 0.
    SFun cumulative_integral() const;
    cd integral() const;
    cd mean() const { return integral() / length(); }

    SFun operator+(const SFun& o) const { return {grid_, values_ + o.values_}; }
    SFun operator-(const SFun& o) const { return {grid_, values_ - o.values_}; }
    SFun operator*(const SFun& o) const { return {grid_, values_ * o.values_}; }
    SFun scaled(cd c) const { return {grid_, values_ * c}; }

    /// Resample onto another node count (same interval).
    SFun resampled(int n) const;

private:
    std::shared_ptr<const ChebGrid> grid_;
    Eigen::ArrayXcd values_;
};

struct BvpResult {
    SFun solution;
    double residual;  ///< normwise backward error of the collocation system
};

/**
 * Solve -p'' + c p = rhs on [0, L] with p(0) = p(L) = 0 by spectral
 * collocation on the grid of rhs.
 */
BvpResult solve_dirichlet_bvp(double c, const SFun& rhs);

}  // namespace bbnf
