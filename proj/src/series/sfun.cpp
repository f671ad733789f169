#include "bbnf/series/sfun.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include <boost/math/constants/constants.hpp>

namespace bbnf {

namespace {

using boost::math::double_constants::pi;

/// Chebyshev coefficients of samples at x_j = cos(pi j / N), j = 0..N.
Eigen::VectorXd cheb_coeffs(const Eigen::VectorXd& f) {
    const int N = static_cast<int>(f.size()) - 1;
    Eigen::VectorXd c(N + 1);
    for (int k = 0; k <= N; ++k) {
        double sum = 0.0;
        for (int j = 0; j <= N; ++j) {
            double w = (j == 0 || j == N) ? 0.5 : 1.0;
            sum += w * f(j) * std::cos(pi * j * k / N);
        }
        c(k) = sum * 2.0 / N;
    }
    c(0) *= 0.5;
    c(N) *= 0.5;
    return c;
}

double cheb_eval(const Eigen::VectorXd& c, double x) {
    // Clenshaw
    double b1 = 0.0, b2 = 0.0;
    for (int k = static_cast<int>(c.size()) - 1; k >= 1; --k) {
        double b0 = 2.0 * x * b1 - b2 + c(k);
        b2 = b1;
        b1 = b0;
    }
    return x * b1 - b2 + c(0);
}

/// Coefficients of an antiderivative in x (arbitrary constant).
Eigen::VectorXd cheb_integrate(const Eigen::VectorXd& c) {
    const int N = static_cast<int>(c.size()) - 1;
    Eigen::VectorXd r = Eigen::VectorXd::Zero(N + 2);
    for (int k = 0; k <= N; ++k) {
        if (k == 0) {
            r(1) += c(0);
        } else if (k == 1) {
            r(2) += c(1) / 4.0;
        } else {
            r(k + 1) += c(k) / (2.0 * (k + 1));
            r(k - 1) -= c(k) / (2.0 * (k - 1));
        }
    }
    return r;
}

std::shared_ptr<ChebGrid> build_grid(int n, double L) {
    auto g = std::make_shared<ChebGrid>();
    const int N = n - 1;
    g->n = n;
    g->L = L;
    Eigen::VectorXd x(n);
    for (int j = 0; j <= N; ++j) x(j) = std::cos(pi * j / N);
    g->nodes = (L / 2.0) * (1.0 - x.array()).matrix();
    g->nodes(0) = 0.0;
    g->nodes(N) = L;

    // Standard differentiation matrix in x, negative-sum trick on the diagonal.
    Eigen::MatrixXd Dx = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i <= N; ++i) {
        double ci = (i == 0 || i == N) ? 2.0 : 1.0;
        for (int j = 0; j <= N; ++j) {
            if (i == j) continue;
            double cj = (j == 0 || j == N) ? 2.0 : 1.0;
            double sign = ((i + j) % 2) ? -1.0 : 1.0;
            // x_i - x_j computed via sines for accuracy
            double diff = -2.0 * std::sin(pi * (i + j) / (2.0 * N)) * std::sin(pi * (i - j) / (2.0 * N));
            Dx(i, j) = ci / cj * sign / diff;
        }
        Dx(i, i) = -Dx.row(i).sum();
    }
    g->D = Dx * (-2.0 / L);
    g->D2 = g->D * g->D;

    g->cumint.resize(n, n);
    for (int col = 0; col < n; ++col) {
        Eigen::VectorXd e = Eigen::VectorXd::Unit(n, col);
        Eigen::VectorXd ci = cheb_integrate(cheb_coeffs(e));
        double G1 = cheb_eval(ci, 1.0);
        for (int j = 0; j <= N; ++j) g->cumint(j, col) = (L / 2.0) * (G1 - cheb_eval(ci, x(j)));
    }
    g->weights = g->cumint.row(N);
    return g;
}

}  // namespace

std::shared_ptr<const ChebGrid> ChebGrid::get(int n, double L) {
    static std::mutex mu;
    static std::map<std::pair<int, double>, std::shared_ptr<const ChebGrid>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(n, L);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    if (n < 3 || !(L > 0.0)) throw ValidationError("ChebGrid: need n >= 3 and L > 0");
    auto g = build_grid(n, L);
    cache.emplace(key, g);
    return g;
}

SFun::SFun(double L, int n) : grid_(ChebGrid::get(n, L)), values_(Eigen::ArrayXcd::Zero(n)) {}

SFun::SFun(std::shared_ptr<const ChebGrid> grid, Eigen::ArrayXcd values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_->n) throw ValidationError("SFun: value count does not match grid");
}

SFun SFun::from_function(const std::function<cd(double)>& f, double L, int n) {
    auto g = ChebGrid::get(n, L);
    Eigen::ArrayXcd v(n);
    for (int j = 0; j < n; ++j) v(j) = f(g->nodes(j));
    return {g, v};
}

SFun SFun::constant(cd c, double L, int n) {
    auto g = ChebGrid::get(n, L);
    return {g, Eigen::ArrayXcd::Constant(n, c)};
}

cd SFun::operator()(double s) const {
    const auto& t = grid_->nodes;
    const int N = grid_->n - 1;
    cd num = 0.0;
    double den = 0.0;
    for (int j = 0; j <= N; ++j) {
        double d = s - t(j);
        if (d == 0.0) return values_(j);
        double w = ((j % 2) ? -1.0 : 1.0) * ((j == 0 || j == N) ? 0.5 : 1.0) / d;
        num += w * values_(j);
        den += w;
    }
    return num / den;
}

SFun SFun::derivative() const {
    Eigen::VectorXcd v = grid_->D.cast<cd>() * values_.matrix();
    return {grid_, v.array()};
}

SFun SFun::cumulative_integral() const {
    Eigen::VectorXcd v = grid_->cumint.cast<cd>() * values_.matrix();
    return {grid_, v.array()};
}

cd SFun::integral() const { return (grid_->weights.cast<cd>() * values_.matrix())(0); }

SFun SFun::resampled(int n) const {
    auto g = ChebGrid::get(n, length());
    Eigen::ArrayXcd v(n);
    for (int j = 0; j < n; ++j) v(j) = (*this)(g->nodes(j));
    return {g, v};
}

BvpResult solve_dirichlet_bvp(double c, const SFun& rhs) {
    const auto& g = rhs.grid();
    const int n = g.n;
    Eigen::MatrixXd K = -g.D2 + c * Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd M = K;
    M.row(0).setZero();
    M(0, 0) = 1.0;
    M.row(n - 1).setZero();
    M(n - 1, n - 1) = 1.0;
    Eigen::MatrixXd b(n, 2);
    b.col(0) = rhs.values().real().matrix();
    b.col(1) = rhs.values().imag().matrix();
    b(0, 0) = b(0, 1) = b(n - 1, 0) = b(n - 1, 1) = 0.0;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
    Eigen::MatrixXd x = lu.solve(b);
    Eigen::ArrayXcd sol(n);
    for (int j = 0; j < n; ++j) sol(j) = cd(x(j, 0), x(j, 1));
    Eigen::MatrixXd r = K * x - b;
    double res = r.block(1, 0, n - 2, 2).cwiseAbs().maxCoeff();
    // normwise backward error
    double knorm = K.cwiseAbs().rowwise().sum().maxCoeff();
    double scale = knorm * x.cwiseAbs().maxCoeff() + b.cwiseAbs().maxCoeff();
    return {SFun(rhs.grid_ptr(), sol), scale > 0.0 ? res / scale : 0.0};
}

}  // namespace bbnf
