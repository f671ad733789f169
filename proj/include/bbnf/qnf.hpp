#pragma once

#include <map>
#include <optional>
#include <vector>

#include "bbnf/series/poly2.hpp"
#include "bbnf/series/sfun.hpp"

namespace bbnf {

enum class QnfCase { Elliptic, Hyperbolic };

const char* case_name(QnfCase c);

/**
 * Coefficients of the straightened quadratic model along one leg of a
 * bouncing-ball orbit of length L between mirrors of signed radii R_A, R_B.
 *
 * In the hyperbolic case theta holds sqrt(-theta_11^2), which solves
 * theta'' = -1/theta^3, and b00 = -1/theta^2 is negative.
 */
struct StraighteningData {
    double ell = 0.0;
    double s0 = 0.0;
    double L = 0.0;
    SFun theta{1.0}, b00{1.0}, kappa22{1.0}, c00{1.0};
    double alpha = 0.0;  ///< integral of b00 over [0, L]
    QnfCase kase = QnfCase::Elliptic;
    double ode_residual = 0.0;
};

StraighteningData solve_straightening(double R_A, double R_B, double L, QnfCase kase,
                                      int nodes = SFun::default_nodes);

/// D_s^2 + b00 (y2_sign y^2 D_s^2 + D_y^2).
struct QuadraticModel {
    SFun b00{1.0};
    QnfCase kase = QnfCase::Elliptic;
    int y2_sign = 1;
    double alpha = 0.0;
};

QuadraticModel quadratic_model(const StraighteningData& data);

/// Phi(s) = int_0^s (b00 - alpha / L); vanishes at both ends.
SFun metaplectic_phase(const StraighteningData& data);

/// One perturbation term: symbol(s, y, eta) R^r at filtration level m >= 3.
struct SymbolTerm {
    int m = 3;
    SymPoly symbol;
    int r_power = 0;
};

/**
 * Perturbation of the leading operator. Before linearize the quadratic part
 * is D_s + b00 I; afterwards (alpha set) it is D_s + (alpha / L) I.
 */
struct SymbolJet {
    QnfCase kase = QnfCase::Elliptic;
    double L = 1.0;
    int nodes = SFun::default_nodes;
    std::optional<double> alpha;
    std::vector<SymbolTerm> terms;

    /// Add coeff(s) y^p eta^q R^r at level m.
    void add(int m, int p, int q, const SFun& coeff, int r_power = 0);
    void validate() const;
};

SymbolJet linearize(const StraighteningData& data, const SymbolJet& jet);

/// Basis used for the normal-form computation: ZZbar (elliptic) or WWbar (hyperbolic).
Basis qnf_basis(QnfCase kase);

/**
 * An operator sum_q N^{2 - q/2} sum_r A_{q,r} R^r with symbols normal-ordered
 * to the left of the powers of R = D_s + (alpha / L) I. The leading R itself
 * (q = 0) is implicit. Keys: half-level q = m - 2, then r.
 */
struct SymbolOperator {
    QnfCase kase = QnfCase::Elliptic;
    double L = 1.0;
    double alpha = 0.0;
    std::shared_ptr<const ChebGrid> grid;
    std::map<int, std::map<int, SymPoly>> levels;

    SymPoly zero() const;
    /// r = 0 symbol at half-level q (zero if absent).
    SymPoly principal(int q) const;
    void add(int q, int r, const SymPoly& a);
};

SymbolOperator to_operator(const SymbolJet& jet);

/// (d/ds - (alpha/L) {I, .}) applied to a symbol.
SymPoly transport_derivative(const SymbolOperator& ctx, const SymPoly& x);

/**
 * exp(-t N^{-q/2} X) O exp(t N^{-q/2} X), with every contribution past
 * half-level max_level dropped.
 */
SymbolOperator conjugate(const SymbolOperator& op, const SymPoly& X, int q, int max_level, double t = 1.0);

struct HomologicalSolution {
    SymPoly X;
    std::optional<std::vector<double>> f;  ///< coefficients of f in powers of I (even q only)
    double f_imaginary = 0.0;
    double bvp_residual = 0.0;
    double bc_residual = 0.0;  ///< P^o and Q^e at s = 0, L
};

/**
 * Solve (d/ds - (alpha/L){I, .}) X = i (f - a) for the r = 0 symbol a at
 * half-level q, with P^o = Q^e = 0 at both ends and f the s-average of the
 * diagonal part.
 */
HomologicalSolution homological_step(const SymbolOperator& ctx, const SymPoly& a, int q);

struct LevelRecord {
    int q = 0;          ///< half-level index, j = q / 2
    SymPoly X;
    double bvp_residual = 0.0;
    double bc_residual = 0.0;
    double remainder = 0.0;  ///< non-normal r = 0 part left at this level after conjugation
    int degree = -1;
    bool parity_ok = true;
};

struct NormalFormPolys {
    double alpha = 0.0;
    double L = 0.0;
    QnfCase kase = QnfCase::Elliptic;
    std::vector<std::vector<double>> f;  ///< f_1 ... f_K as coefficients in powers of I
    double f_imaginary = 0.0;
    std::vector<LevelRecord> ledger;

    /// N_k = sqrt(pi k / L).
    double semiclassical_N(int k) const;
    /// sum_j N^{-2j} f_j(I).
    double evaluate(double N, double I) const;
};

NormalFormPolys normal_form(const SymbolOperator& op, int K);
NormalFormPolys normal_form(const SymbolJet& jet, int K);

}  // namespace bbnf
