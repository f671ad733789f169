#include <cmath>
#include <numbers>
#include <set>

#include "bbnf/errors.hpp"
#include "bbnf/qnf.hpp"

namespace bbnf {

namespace {

constexpr double resonance_tolerance = 1e-8;
constexpr double bvp_tolerance = 1e-8;

Eigen::ArrayXcd coeff_or_zero(const SymPoly& p, int m, int n, int size) {
    const Eigen::ArrayXcd* c = p.find(m, n);
    return c ? *c : Eigen::ArrayXcd::Zero(size).eval();
}

}  // namespace

HomologicalSolution homological_step(const SymbolOperator& ctx, const SymPoly& a_in, int q) {
    const ChebGrid& g = *ctx.grid;
    const int n = g.n;
    const bool elliptic = ctx.kase == QnfCase::Elliptic;
    const SymPoly a = to_basis(a_in, qnf_basis(ctx.kase));
    const Eigen::MatrixXcd D = g.D.cast<cd>();
    const Eigen::MatrixXcd cumint = g.cumint.cast<cd>();
    const cd I(0.0, 1.0);

    HomologicalSolution sol;
    sol.X = ctx.zero();

    std::set<Exp2> off;
    std::vector<cd> fdiag;
    for (const auto& [e, c] : a.coeffs()) {
        const auto [m, k] = e;
        if (m != k) {
            off.insert(e);
            if (!elliptic) off.insert({k, m});
            continue;
        }
        if (q % 2 != 0) {
            if (coeff_mag(c) > 1e-12)
                throw NumericalError("homological_step: diagonal term (" + std::to_string(m) + "," + std::to_string(m) +
                                     ") at odd half-level " + std::to_string(q));
            continue;
        }
        const cd mean = (g.weights.cast<cd>() * c.matrix())(0) / g.L;
        if (static_cast<int>(fdiag.size()) <= m) fdiag.resize(m + 1, 0.0);
        fdiag[m] = mean;
        const Eigen::ArrayXcd rhs = I * (mean - c);
        sol.X.add_term(m, m, (cumint * rhs.matrix()).array());
    }
    if (q % 2 == 0) {
        std::vector<double> f(fdiag.size(), 0.0);
        for (std::size_t m = 0; m < fdiag.size(); ++m) {
            const cd v = fdiag[m] * std::pow(2.0, static_cast<double>(m));
            f[m] = v.real();
            sol.f_imaginary = std::max(sol.f_imaginary, std::abs(v.imag()));
        }
        sol.f = f;
    }

    if (!off.empty()) {
        if (elliptic) {
            for (const auto& [m, k] : off) {
                const double v = ctx.alpha * (m - k) / std::numbers::pi;
                if (std::abs(v - std::round(v)) < resonance_tolerance)
                    throw NearResonance(m, k, "homological_step: alpha (m - n) / pi = " + std::to_string(v) +
                                                  " is an integer for (m, n) = (" + std::to_string(m) + ", " +
                                                  std::to_string(k) + ")");
            }
        } else if (std::abs(ctx.alpha) < resonance_tolerance) {
            throw NearResonance(off.begin()->first, off.begin()->second, "homological_step: hyperbolic alpha = 0");
        }
    }

    std::set<Exp2> done;
    for (const auto& [m, k] : off) {
        if (done.count({m, k})) continue;
        const cd gamma = elliptic ? cd(0.0, m - k) : cd(m - k, 0.0);
        const cd kappa = ctx.alpha / ctx.L * gamma;
        const Eigen::ArrayXcd gm = -I * coeff_or_zero(a, m, k, n);
        const Eigen::ArrayXcd h = elliptic ? gm.conjugate().eval() : (-I * coeff_or_zero(a, k, m, n)).conjugate().eval();
        const Eigen::ArrayXcd diff = gm - h;
        const Eigen::ArrayXcd rhs = -kappa * (gm + h) - (D * diff.matrix()).array();
        const BvpResult bvp = solve_dirichlet_bvp((kappa * kappa).real(), SFun(ctx.grid, rhs));
        sol.bvp_residual = std::max(sol.bvp_residual, bvp.residual);
        if (bvp.residual > bvp_tolerance)
            throw NumericalError("homological_step: BVP residual " + std::to_string(bvp.residual) + " for (" +
                                 std::to_string(m) + ", " + std::to_string(k) + ")");
        const Eigen::ArrayXcd& delta = bvp.solution.values();
        const Eigen::ArrayXcd sigma = ((D * delta.matrix()).array() - diff) / kappa;
        sol.X.add_term(m, k, 0.5 * (sigma + delta));
        done.insert({m, k});
        if (!elliptic) {
            sol.X.add_term(k, m, (0.5 * (sigma - delta)).conjugate());
            done.insert({k, m});
        }
    }

    for (const auto& [e, c] : sol.X.coeffs()) {
        for (int end : {0, n - 1}) {
            if (elliptic) {
                sol.bc_residual = std::max(sol.bc_residual, std::abs(c(end).imag()));
            } else {
                const cd partner = coeff_or_zero(sol.X, e.second, e.first, n)(end);
                sol.bc_residual = std::max(sol.bc_residual, std::abs(c(end) - std::conj(partner)));
            }
        }
    }
    return sol;
}

double NormalFormPolys::semiclassical_N(int k) const { return std::sqrt(std::numbers::pi * k / L); }

double NormalFormPolys::evaluate(double N, double I) const {
    double total = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
        double v = 0.0;
        for (std::size_t k = f[j].size(); k-- > 0;) v = v * I + f[j][k];
        total += std::pow(N, -2.0 * (j + 1)) * v;
    }
    return total;
}

NormalFormPolys normal_form(const SymbolOperator& op_in, int K) {
    if (K < 1) throw ValidationError("normal_form: order K must be at least 1");
    if (!op_in.grid) throw ValidationError("normal_form: operator has no grid");
    const int jmax = 2 * K;

    SymbolOperator op = op_in;
    for (auto it = op.levels.begin(); it != op.levels.end();) {
        if (it->first < 1) throw ValidationError("normal_form: perturbation at half-level < 1");
        it = it->first > jmax ? op.levels.erase(it) : std::next(it);
    }

    NormalFormPolys out;
    out.alpha = op.alpha;
    out.L = op.L;
    out.kase = op.kase;
    out.f.assign(K, {});

    for (int q = 1; q <= jmax; ++q) {
        HomologicalSolution sol = homological_step(op, op.principal(q), q);
        op = conjugate(op, sol.X, q, jmax, 1.0);

        LevelRecord rec;
        rec.q = q;
        rec.bvp_residual = sol.bvp_residual;
        rec.bc_residual = sol.bc_residual;
        rec.degree = sol.X.degree();
        for (const auto& [e, c] : sol.X.coeffs())
            if ((e.first + e.second - q) % 2 != 0) rec.parity_ok = false;
        const SymPoly left = op.principal(q);
        for (const auto& [e, c] : left.coeffs()) {
            const double dev = e.first == e.second ? (c - c.mean()).abs().maxCoeff() : c.abs().maxCoeff();
            rec.remainder = std::max(rec.remainder, dev);
        }
        rec.X = std::move(sol.X);
        out.ledger.push_back(std::move(rec));

        if (sol.f) {
            out.f[q / 2 - 1] = *sol.f;
            out.f_imaginary = std::max(out.f_imaginary, sol.f_imaginary);
        }
    }
    return out;
}

NormalFormPolys normal_form(const SymbolJet& jet, int K) { return normal_form(to_operator(jet), K); }

}  // namespace bbnf
