#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/tools/roots.hpp>

#include "bbnf/domain.hpp"
#include "bbnf/errors.hpp"
#include "bbnf/qnf.hpp"
#include "qnf_support.hpp"

using namespace bbnf;
using namespace bbnf::testing;
using std::numbers::pi;

namespace {

const cd I(0.0, 1.0);

/// s0 from a bracketed root of the radicand difference.
double s0_oracle(double RA, double RB, double L) {
    auto g = [&](double s) { return s * (RA - s) - (L - s) * (RB - L + s); };
    boost::uintmax_t it = 100;
    auto r = boost::math::tools::toms748_solve(g, 0.0, L, boost::math::tools::eps_tolerance<double>(50), it);
    return 0.5 * (r.first + r.second);
}

SymbolJet cubic_model_jet(QnfCase kase, int nodes) {
    SymbolJet jet;
    jet.kase = kase;
    jet.L = 2.0;
    jet.nodes = nodes;
    const auto c = SFun::from_function([](double s) { return cd(0.3 + 0.1 * std::sin(s)); }, 2.0, nodes);
    jet.add(3, 3, 0, c);
    jet.add(3, 1, 2, c.scaled(0.5));
    jet.add(4, 4, 0, SFun::constant(0.05, 2.0, nodes));
    return jet;
}

}  // namespace

TEST_CASE("solve_straightening examples") {
    auto d = solve_straightening(2.0, 2.0, 2.0, QnfCase::Elliptic);
    CHECK(d.s0 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(d.ell == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(d.alpha - pi / 2.0) < 1e-12);

    d = solve_straightening(5.0, 5.0, 2.0, QnfCase::Elliptic);
    CHECK(d.s0 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(d.ell == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(std::abs(d.alpha - 2.0 * std::atan(0.5)) < 1e-12);

    for (auto [RA, RB, L] : {std::tuple{3.0, 7.0, 2.0}, {4.0, 2.5, 1.5}, {10.0, 6.0, 3.0}}) {
        d = solve_straightening(RA, RB, L, QnfCase::Elliptic);
        CHECK(std::abs(d.s0 - s0_oracle(RA, RB, L)) < 1e-12);
        CHECK(std::abs(d.ell - std::sqrt((L - d.s0) * (RB - L + d.s0))) < 1e-12);
        // closed-form primitive of b00
        const double exact = std::atan((L - d.s0) / d.ell) + std::atan(d.s0 / d.ell);
        CHECK(std::abs(d.alpha - exact) < 1e-12);
    }
}

TEST_CASE("straightening invariants and the alpha cross-check") {
    for (double a0 : {-0.25, -0.1, -0.3, -0.45, 0.1, 0.3}) {
        const DomainJet jet{{a0}, 1.0};
        const double R = 1.0 / (-2.0 * a0);  // signed: negative for convex mirrors
        const QnfCase kase = a0 < 0.0 ? QnfCase::Elliptic : QnfCase::Hyperbolic;
        const auto d = solve_straightening(R, R, 2.0, kase);
        CAPTURE(a0);
        CHECK(d.ode_residual < 1e-10);
        const double sg = kase == QnfCase::Elliptic ? 1.0 : -1.0;
        CHECK(((d.b00.values() * d.theta.values().square()) - sg).abs().maxCoeff() < 1e-12);
        const OrbitClass cls = classify(jet);
        if (kase == QnfCase::Elliptic)
            CHECK(std::abs(d.alpha - cls.alpha) < 1e-9);
        else
            CHECK(std::abs(std::abs(d.alpha) - std::acosh(jet.A() - 1.0)) < 1e-9);
        CHECK((d.c00.values() - 2.0 * d.kappa22.values()).abs().maxCoeff() == 0.0);
    }
    CHECK_THROWS_AS(solve_straightening(0.5, 0.5, 2.0, QnfCase::Elliptic), NoAdmissibleRoot);
    CHECK_THROWS_AS(solve_straightening(0.5, 0.5, 2.0, QnfCase::Hyperbolic), NoAdmissibleRoot);
    CHECK_THROWS_AS(solve_straightening(5.0, 5.0, 2.0, QnfCase::Hyperbolic), NoAdmissibleRoot);
    CHECK_THROWS_AS(solve_straightening(-5.0, -5.0, 2.0, QnfCase::Elliptic), NoAdmissibleRoot);
}

TEST_CASE("quadratic_model") {
    const auto e = quadratic_model(solve_straightening(2.0, 2.0, 2.0, QnfCase::Elliptic));
    CHECK(e.y2_sign == 1);
    CHECK(std::abs(e.b00(1.0) - 1.0) < 1e-14);
    const auto h = quadratic_model(solve_straightening(-5.0, -5.0, 2.0, QnfCase::Hyperbolic));
    CHECK(h.y2_sign == -1);
    CHECK(h.b00(1.0).real() < 0.0);
}

TEST_CASE("linearize transports symbols by the metaplectic phase") {
    const auto d = solve_straightening(3.0, 7.0, 2.0, QnfCase::Elliptic);
    const SFun phi = metaplectic_phase(d);
    CHECK(std::abs(phi.values()(0)) == 0.0);
    CHECK(std::abs(phi.values()(phi.size() - 1)) < 1e-13);
    auto phi_exact = [&](double s) {
        return std::atan((s - d.s0) / d.ell) + std::atan(d.s0 / d.ell) - d.alpha * s / d.L;
    };

    SymbolJet empty;
    empty.L = 2.0;
    auto lin = linearize(d, empty);
    CHECK(lin.alpha.has_value());
    CHECK(*lin.alpha == d.alpha);
    CHECK(lin.terms.empty());
    CHECK_THROWS_AS(linearize(d, lin), ValidationError);

    SymbolJet jet;
    jet.L = 2.0;
    jet.add(3, 1, 0, SFun::constant(1.0, 2.0));
    lin = linearize(d, jet);
    const Eigen::ArrayXcd* cz = lin.terms[0].symbol.find(1, 0);
    REQUIRE(cz != nullptr);
    for (int i = 0; i < cz->size(); ++i) {
        const double s = d.b00.nodes()(i);
        CHECK(std::abs((*cz)(i) - 0.5 * std::exp(-I * phi_exact(s))) < 1e-12);
    }

    const auto h = solve_straightening(-5.0, -4.0, 2.0, QnfCase::Hyperbolic);
    SymbolJet hj;
    hj.kase = QnfCase::Hyperbolic;
    hj.L = 2.0;
    hj.add(3, 1, 0, SFun::constant(1.0, 2.0));
    lin = linearize(h, hj);
    const Eigen::ArrayXcd* cw = lin.terms[0].symbol.find(1, 0);
    const Eigen::ArrayXcd* cwb = lin.terms[0].symbol.find(0, 1);
    REQUIRE(cw != nullptr);
    REQUIRE(cwb != nullptr);
    for (int i = 0; i < cw->size(); ++i) {
        const double s = h.b00.nodes()(i);
        const double ph = -(std::atanh((s - h.s0) / h.ell) + std::atanh(h.s0 / h.ell)) - h.alpha * s / h.L;
        CHECK(std::abs((*cw)(i) - 0.5 * std::exp(-ph)) < 1e-12);
        CHECK(std::abs((*cwb)(i) - 0.5 * std::exp(ph)) < 1e-12);
    }

    CHECK_THROWS_AS(linearize(d, hj), ValidationError);
}

TEST_CASE("SymbolJet validation") {
    SymbolJet jet;
    jet.L = 2.0;
    jet.add(2, 2, 0, SFun::constant(1.0, 2.0));
    CHECK_THROWS_AS(jet.validate(), ValidationError);
    jet.terms.clear();
    jet.add(3, 2, 0, SFun::constant(1.0, 2.0));
    CHECK_THROWS_AS(jet.validate(), ValidationError);
    jet.terms.clear();
    jet.add(4, 4, 0, SFun::constant(1.0, 2.0), 1);
    CHECK_THROWS_AS(jet.validate(), ValidationError);
    jet.terms.clear();
    jet.add(4, 2, 0, SFun::constant(1.0, 2.0), 1);
    CHECK_NOTHROW(jet.validate());
    CHECK_THROWS_AS(normal_form(jet, 1), ValidationError);
    CHECK_THROWS_AS(jet.add(3, 1, 0, SFun::constant(1.0, 3.0)), ValidationError);
}

TEST_CASE("homological_step examples") {
    const double L = 2.0;
    auto op = empty_operator(QnfCase::Elliptic, 0.9, L);
    const int n = op.grid->n;

    SUBCASE("fixed point") {
        SymPoly a = op.zero();
        a.add_term(1, 1, Eigen::ArrayXcd::Constant(n, 0.7));
        a.add_term(2, 2, Eigen::ArrayXcd::Constant(n, -0.2));
        a.add_term(0, 0, Eigen::ArrayXcd::Constant(n, 0.1));
        const auto sol = homological_step(op, a, 2);
        CHECK(max_abs(sol.X) < 1e-14);
        REQUIRE(sol.f.has_value());
        CHECK(std::abs((*sol.f)[0] - 0.1) < 1e-14);
        CHECK(std::abs((*sol.f)[1] - 1.4) < 1e-14);
        CHECK(std::abs((*sol.f)[2] + 0.8) < 1e-14);
    }
    SUBCASE("averaging of a diagonal right-hand side") {
        // right-hand side g |z|^2 of the homological equation, i.e. a = -g
        SymPoly a = op.zero();
        a.add_term(1, 1, -sample(op, [&](double s) { return cd(std::pow(std::sin(pi * s / L), 2)); }));
        const auto sol = homological_step(op, a, 2);
        REQUIRE(sol.f.has_value());
        CHECK(std::abs((*sol.f)[1] / 2.0 + 0.5) < 1e-13);  // coefficient on |z|^2
        CHECK(sol.bc_residual < 1e-13);
    }
    SUBCASE("constant off-diagonal coefficient against the closed-form ODE solution") {
        const cd c0(0.4, -0.3);
        SymPoly a = op.zero();
        a.add_term(2, 1, Eigen::ArrayXcd::Constant(n, c0));
        const auto sol = homological_step(op, a, 1);
        CHECK(!sol.f.has_value());
        // x' - kappa x = -i c0, x(s) = A e^{kappa s} + i c0 / kappa, x real at s = 0 and s = L
        const cd kappa = I * op.alpha / L;
        const cd p = I * c0 / kappa;
        const cd E = std::exp(kappa * L);
        // Im(A + p) = 0, Im(A E + p) = 0 with A = u + i v
        Eigen::Matrix2d M;
        M << 0.0, 1.0, E.imag(), E.real();
        const Eigen::Vector2d uv = M.partialPivLu().solve(Eigen::Vector2d(-p.imag(), -p.imag()));
        const cd A(uv(0), uv(1));
        const Eigen::ArrayXcd* x = sol.X.find(2, 1);
        REQUIRE(x != nullptr);
        double err = 0.0;
        for (int i = 0; i < n; ++i) err = std::max(err, std::abs((*x)(i) - (A * std::exp(kappa * op.grid->nodes(i)) + p)));
        CHECK(err < 1e-11);
        CHECK(sol.X.size() == 1);
        CHECK(parity_defect_at_ends(sol.X) < 1e-12);
    }
    SUBCASE("resonance guard") {
        auto res = empty_operator(QnfCase::Elliptic, pi / 3.0, L);
        SymPoly a = res.zero();
        a.add_term(3, 0, Eigen::ArrayXcd::Constant(n, 1.0));
        try {
            homological_step(res, a, 1);
            FAIL("expected NearResonance");
        } catch (const NearResonance& e) {
            CHECK(e.m() == 3);
            CHECK(e.n() == 0);
        }
        SymPoly b = res.zero();
        b.add_term(2, 1, Eigen::ArrayXcd::Constant(n, 1.0));
        CHECK_NOTHROW(homological_step(res, b, 1));
        auto flat = empty_operator(QnfCase::Hyperbolic, 0.0, L);
        SymPoly bw(Basis::WWbar, 64);
        bw.add_term(2, 1, Eigen::ArrayXcd::Constant(n, 1.0));
        CHECK_THROWS_AS(homological_step(flat, bw, 1), NearResonance);
    }
    SUBCASE("odd half-levels carry no diagonal part") {
        SymPoly a = op.zero();
        a.add_term(1, 1, Eigen::ArrayXcd::Constant(n, 1.0));
        CHECK_THROWS_AS(homological_step(op, a, 1), NumericalError);
    }
}

TEST_CASE("normal_form: zero perturbation and fixed point") {
    auto op = empty_operator(QnfCase::Elliptic, 0.9, 2.0);
    auto nf = normal_form(op, 3);
    REQUIRE(nf.f.size() == 3);
    for (const auto& f : nf.f)
        for (double c : f) CHECK(c == 0.0);

    const std::vector<std::vector<double>> f0{{0.0, 0.5, -0.25}, {0.1, 0.0, 0.3, 0.05}};
    nf = normal_form(normal_form_operator(QnfCase::Elliptic, 0.9, 2.0, f0), 2);
    for (std::size_t j = 0; j < f0.size(); ++j)
        for (std::size_t k = 0; k < f0[j].size(); ++k) CHECK(std::abs(nf.f[j][k] - f0[j][k]) < 1e-14);
    for (const auto& rec : nf.ledger) CHECK(max_abs(rec.X) < 1e-14);
    CHECK_THROWS_AS(normal_form(op, 0), ValidationError);
}

TEST_CASE("normal_form round trip through an admissible exponential") {
    std::mt19937 rng(20261017);
    const std::vector<std::vector<double>> f0{{0.0, 0.5, -0.25}, {0.1, 0.2, 0.3, 0.05}};
    for (QnfCase kase : {QnfCase::Elliptic, QnfCase::Hyperbolic}) {
        for (int trial = 0; trial < 3; ++trial) {
            const double alpha = kase == QnfCase::Elliptic ? 0.9 : -0.8;
            const SymbolOperator F = normal_form_operator(kase, alpha, 2.0, f0);
            const SymPoly X = random_admissible(F, rng);
            CHECK(parity_defect_at_ends(X) < 1e-14);
            const SymbolOperator G = conjugate(F, X, 1, 4, -1.0);
            CHECK(max_abs(G.principal(1)) > 0.1);
            const auto nf = normal_form(G, 2);
            CAPTURE(case_name(kase));
            for (std::size_t j = 0; j < f0.size(); ++j) {
                REQUIRE(nf.f[j].size() >= f0[j].size());
                for (std::size_t k = 0; k < nf.f[j].size(); ++k)
                    CHECK(std::abs(nf.f[j][k] - (k < f0[j].size() ? f0[j][k] : 0.0)) < 1e-8);
            }
            // the recovered level-1 exponent is the one used
            double err = 0.0;
            const SymPoly diff = nf.ledger[0].X - to_basis(X, qnf_basis(kase));
            for (const auto& [e, c] : diff.coeffs())
                err = std::max(err, c.abs().maxCoeff());
            CHECK(err < 1e-9);
        }
    }
}

TEST_CASE("normal_form of the cubic model: grid refinement and ledgers") {
    for (QnfCase kase : {QnfCase::Elliptic, QnfCase::Hyperbolic}) {
        std::vector<NormalFormPolys> runs;
        for (int nodes : {129, 257}) {
            const auto d = kase == QnfCase::Elliptic ? solve_straightening(5.0, 5.0, 2.0, kase, nodes)
                                                     : solve_straightening(-5.0, -5.0, 2.0, kase, nodes);
            runs.push_back(normal_form(linearize(d, cubic_model_jet(kase, nodes)), 2));
        }
        CAPTURE(case_name(kase));
        const auto& a = runs[0];
        const auto& b = runs[1];
        REQUIRE(a.f[0].size() == 3);
        CHECK(std::abs(a.f[0][2]) > 0.1);  // f1 has degree 2 in I
        for (std::size_t j = 0; j < a.f.size(); ++j) {
            REQUIRE(a.f[j].size() == b.f[j].size());
            for (std::size_t k = 0; k < a.f[j].size(); ++k) CHECK(std::abs(a.f[j][k] - b.f[j][k]) < 1e-8);
        }
        for (const auto& run : runs) {
            CHECK(run.f_imaginary < 1e-10);
            for (const auto& rec : run.ledger) {
                CAPTURE(rec.q);
                CHECK(rec.parity_ok);
                CHECK(rec.degree <= rec.q + 2);
                CHECK(rec.bc_residual < 1e-9);
                CHECK(parity_defect_at_ends(rec.X) < 1e-9);
                CHECK(rec.remainder < 1e-7);
            }
            for (std::size_t j = 0; j < run.f.size(); ++j) CHECK(static_cast<int>(run.f[j].size()) - 1 <= int(j) + 3);
        }
    }
}

TEST_CASE("conjugation with powers of R on transverse constants") {
    // [a R^2, x] = 2 a (-i x') R - a x'' for symbols independent of (y, eta)
    auto op = empty_operator(QnfCase::Elliptic, 0.7, 2.0);
    const int n = op.grid->n;
    SymPoly a = op.zero(), x = op.zero();
    const Eigen::ArrayXcd av = sample(op, [](double s) { return cd(1.0 + 0.3 * s); });
    const Eigen::ArrayXcd xv = sample(op, [](double s) { return cd(std::sin(s), 0.2 * s * s); });
    const Eigen::ArrayXcd dx = sample(op, [](double s) { return cd(std::cos(s), 0.4 * s); });
    const Eigen::ArrayXcd d2x = sample(op, [](double s) { return cd(-std::sin(s), 0.4); });
    a.add_term(0, 0, av);
    x.add_term(0, 0, xv);
    op.add(2, 2, a);
    const auto c = conjugate(op, x, 1, 3);
    const SymPoly level1 = c.principal(1);
    const Eigen::ArrayXcd* lead = level1.find(0, 0);
    REQUIRE(lead != nullptr);
    CHECK((*lead + I * dx).abs().maxCoeff() < 1e-10);
    const auto& lv3 = c.levels.at(3);
    CHECK((lv3.at(1).find(0, 0)->array() - 2.0 * av * (-I) * dx).abs().maxCoeff() < 1e-10);
    CHECK((lv3.at(0).find(0, 0)->array() + av * d2x).abs().maxCoeff() < 1e-9);
    CHECK(!lv3.count(2));
    CHECK(n > 0);
}
