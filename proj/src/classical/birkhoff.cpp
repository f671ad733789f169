#include <cmath>
#include <map>
#include <numbers>

#include <boost/math/quadrature/trapezoidal.hpp>

#include "bbnf/classical.hpp"
#include "bbnf/errors.hpp"

namespace bbnf {

namespace {

constexpr double resonance_tolerance = 1e-6;

cd coeff(const Poly2& p, int m, int n) {
    const cd* c = p.find(m, n);
    return c ? *c : cd(0.0);
}

Poly2 bracket(const Poly2& f, const Poly2& g, cd c, int d) {
    return (mul(f.derivative(0), g.derivative(1)) - mul(f.derivative(1), g.derivative(0))).scaled(c).with_max_degree(d);
}

// log(1 + p(r)) through r^n, p given by its coefficients p[1..n]
std::vector<cd> log_one_plus(const std::vector<cd>& p) {
    const int n = static_cast<int>(p.size()) - 1;
    std::vector<cd> y(n + 1, 0.0);
    for (int k = 1; k <= n; ++k) {
        cd acc = double(k) * p[k];
        for (int j = 1; j < k; ++j) acc -= double(j) * y[j] * p[k - j];
        y[k] = acc / double(k);
    }
    return y;
}

}  // namespace

SeriesMap lie_transform(const Poly2& chi, cd c, int max_degree, double t) {
    const Basis b = chi.basis();
    SeriesMap out = SeriesMap::identity(b, max_degree);
    Poly2* comps[2] = {&out.first, &out.second};
    for (int i = 0; i < 2; ++i) {
        Poly2 term = Poly2::monomial(i == 0, i == 1, 1.0, b, max_degree);
        for (int k = 1; k <= max_degree; ++k) {
            term = bracket(term, chi, c, max_degree).scaled(t / k);
            if (term.empty()) break;
            *comps[i] += term;
        }
    }
    return out;
}

NormalizationResult birkhoff_normalize(const TwistMapJet& tmap, int order, ResonancePolicy policy) {
    const int D = tmap.map.max_degree();
    if (order < 0 || D < 2 * order + 1)
        throw ValidationError("birkhoff_normalize: map jet of degree " + std::to_string(D) + " cannot give order " +
                              std::to_string(order));
    const Eigen::Matrix2d M = tmap.map.linear_part().real();

    NormalizationResult res;
    BirkhoffForm& form = res.form;
    form.cls = classify_trace(M.trace());
    if (form.cls.tag == OrbitTag::Degenerate) throw Degenerate("birkhoff_normalize: parabolic linear part");
    const bool elliptic = form.cls.tag == OrbitTag::Elliptic;

    Eigen::EigenSolver<Eigen::Matrix2d> es(M.transpose());
    const auto ev = es.eigenvalues();
    Eigen::Matrix2cd rows;
    cd lam1, lam2, c;
    if (elliptic) {
        const int i = ev(0).imag() > 0.0 ? 0 : 1;
        lam1 = ev(i);
        lam2 = std::conj(lam1);
        Eigen::RowVector2cd l = es.eigenvectors().col(i).transpose();
        const cd c0 = l(0) * std::conj(l(1)) - l(1) * std::conj(l(0));
        l /= std::sqrt(std::abs(c0) / 2.0);
        rows.row(0) = l;
        rows.row(1) = l.conjugate();
        c = rows(0, 0) * rows(1, 1) - rows(0, 1) * rows(1, 0);

        if (policy == ResonancePolicy::Strict && order >= 1) {
            for (int k = 1; k <= 2 * order + 4; ++k)
                if (std::abs(std::polar(1.0, k * form.cls.alpha) - 1.0) <= resonance_tolerance)
                    throw LowOrderResonance(k, "birkhoff_normalize: e^{i k alpha} = 1 for k = " + std::to_string(k));
        }
    } else {
        const int i = std::abs(ev(0).real()) > std::abs(ev(1).real()) ? 0 : 1;
        lam1 = ev(i).real();
        lam2 = ev(1 - i).real();
        rows.row(0) = es.eigenvectors().col(i).transpose();
        rows.row(1) = es.eigenvectors().col(1 - i).transpose();
        c = rows(0, 0) * rows(1, 1) - rows(0, 1) * rows(1, 0);
        rows.row(1) /= c;
        c = 1.0;
    }
    res.eigen_rows = rows;
    res.bracket = c;

    const Basis tag = elliptic ? Basis::ZZbar : Basis::WWbar;
    SeriesMap G = tmap.map.conjugate_linear(rows, tag);
    G.first.set_term(1, 0, lam1);
    G.first.set_term(0, 1, 0.0);
    G.second.set_term(1, 0, 0.0);
    G.second.set_term(0, 1, lam2);
    SeriesMap to_normal = SeriesMap::identity(tag, D);

    auto is_small = [](cd x) { return std::abs(x) <= resonance_tolerance; };
    std::map<Exp2, int> resonant;
    for (int d = 2; d <= D; ++d) {
        std::map<Exp2, std::pair<cd, int>> acc;
        for (const auto& [e, f] : G.first.coeffs()) {
            const auto [m, n] = e;
            if (m + n != d || m == n + 1) continue;
            const cd den = std::pow(lam1, m) * std::pow(lam2, n) - lam1;
            if (is_small(den)) {
                resonant[e] = 1;
                continue;
            }
            auto& slot = acc[{m, n + 1}];
            slot.first += f / den / (c * double(n + 1));
            slot.second += 1;
        }
        for (const auto& [e, f] : G.second.coeffs()) {
            const auto [m, n] = e;
            if (m + n != d || n == m + 1) continue;
            const cd den = std::pow(lam1, m) * std::pow(lam2, n) - lam2;
            if (is_small(den)) continue;
            auto& slot = acc[{m + 1, n}];
            slot.first -= f / den / (c * double(m + 1));
            slot.second += 1;
        }
        Poly2 chi(tag, D + 1);
        for (const auto& [e, v] : acc) chi.add_term(e.first, e.second, v.first / double(v.second));
        if (chi.empty()) continue;
        const SeriesMap P = lie_transform(chi, c, D, 1.0), Pinv = lie_transform(chi, c, D, -1.0);
        G = Pinv.after(G.after(P));
        to_normal = Pinv.after(to_normal);
    }

    for (const auto& [e, f] : G.first.coeffs()) {
        const auto [m, n] = e;
        if (m + n < 2 || m == n + 1) continue;
        if (resonant.count(e)) {
            form.resonant_terms.push_back(e);
            continue;
        }
        form.residual = std::max(form.residual, std::abs(f));
    }

    std::vector<cd> p(order + 1, 0.0);
    for (int k = 1; k <= order; ++k) p[k] = coeff(G.first, k + 1, k) / lam1;
    const std::vector<cd> y = log_one_plus(p);
    form.b.assign(order + 1, 0.0);
    if (elliptic) {
        form.b[0] = form.cls.alpha;
        for (int k = 1; k <= order; ++k) {
            const cd beta = cd(0.0, -1.0) * y[k] * std::pow(2.0, k);
            form.b[k] = beta.real();
            form.imaginary_defect = std::max(form.imaginary_defect, std::abs(beta.imag()));
        }
    } else {
        form.b[0] = std::log(std::abs(lam1.real()));
        for (int k = 1; k <= order; ++k) {
            form.b[k] = y[k].real();
            form.imaginary_defect = std::max(form.imaginary_defect, std::abs(y[k].imag()));
        }
    }
    res.normal_map = G;
    res.to_normal = to_normal;
    return res;
}

double quarter_resonance_twist(const NormalizationResult& nf) {
    const cd lam1 = nf.normal_map.first.find(1, 0) ? *nf.normal_map.first.find(1, 0) : cd(0.0);
    if (std::abs(lam1 - cd(0.0, 1.0)) > resonance_tolerance)
        throw ValidationError("quarter_resonance_twist: linear part is not a quarter rotation");
    const double beta = (coeff(nf.normal_map.first, 2, 1) / lam1).imag();
    const double r = std::abs(coeff(nf.normal_map.first, 0, 3));
    if (r >= std::abs(beta)) throw Degenerate("quarter_resonance_twist: resonant term dominates the twist");
    auto g = [&](double phi) { return 1.0 / std::sqrt(std::abs(beta + r * std::cos(phi))); };
    const double G1 = boost::math::quadrature::trapezoidal(g, 0.0, 2.0 * std::numbers::pi, 1e-14) / (2.0 * std::numbers::pi);
    return (beta < 0.0 ? -2.0 : 2.0) / (G1 * G1);
}

}  // namespace bbnf
