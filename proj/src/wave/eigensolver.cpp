#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/tools/minima.hpp>

#include "bbnf/errors.hpp"
#include "bbnf/wave.hpp"

namespace bbnf {

namespace {

/// J_0(x) ... J_nmax(x), downward recurrence from two exact top values.
std::vector<double> bessel_orders(int nmax, double x) {
    std::vector<double> J(nmax + 1, 0.0);
    if (x == 0.0) {
        J[0] = 1.0;
        return J;
    }
    J[nmax] = boost::math::cyl_bessel_j(nmax, x);
    if (nmax == 0) return J;
    J[nmax - 1] = boost::math::cyl_bessel_j(nmax - 1, x);
    for (int n = nmax - 1; n >= 1; --n) J[n - 1] = 2.0 * n / x * J[n] - J[n + 1];
    return J;
}

struct Sample {
    double r, theta;
};

struct Layout {
    std::vector<Sample> boundary, interior;
    double r_max = 0.0;
};

Layout make_layout(const BoundaryCurve& curve, int n_boundary, int n_interior) {
    Layout lay;
    for (int i = 0; i < n_boundary; ++i) {
        const Eigen::Vector2d p = curve.position(0.25 * (i + 0.5) / n_boundary);
        lay.boundary.push_back({p.norm(), std::atan2(p.y(), p.x())});
        lay.r_max = std::max(lay.r_max, p.norm());
    }
    // deterministic interior points on scaled boundary rays
    for (int i = 0; i < n_interior; ++i) {
        const double t = 0.25 * std::fmod(0.5 + i * 0.6180339887498949, 1.0);
        const double rho = 0.25 + 0.6 * std::fmod(0.3 + i * 0.7548776662466927, 1.0);
        const Eigen::Vector2d p = rho * curve.position(t);
        lay.interior.push_back({p.norm(), std::atan2(p.y(), p.x())});
    }
    return lay;
}

int order_of(SymClass cls, int j) {
    switch (cls) {
        case SymClass::EE: return 2 * j;
        case SymClass::OE: return 2 * j + 1;
        case SymClass::EO: return 2 * j + 1;
        case SymClass::OO: return 2 * j + 2;
    }
    return 0;
}

bool uses_sine(SymClass cls) { return cls == SymClass::EO || cls == SymClass::OO; }

class MpsProblem {
public:
    MpsProblem(const BoundaryCurve& curve, SymClass cls, double k_top, const MpsOptions& opts) : cls_(cls) {
        const Layout probe = make_layout(curve, 64, 0);
        const double nmax = k_top * probe.r_max + opts.basis_slack;
        nbasis_ = std::max(4, static_cast<int>(std::ceil(opts.basis_factor * nmax / 2.0)));
        layout_ = make_layout(curve, 2 * nbasis_ + 10, nbasis_ + 10);
    }

    int basis_size() const { return nbasis_; }

    double sigma(double k) const {
        const int nb = static_cast<int>(layout_.boundary.size()), ni = static_cast<int>(layout_.interior.size());
        Eigen::MatrixXd A(nb + ni, nbasis_);
        const int top = order_of(cls_, nbasis_ - 1);
        auto fill = [&](int row, const Sample& s) {
            const std::vector<double> J = bessel_orders(top, k * s.r);
            for (int j = 0; j < nbasis_; ++j) {
                const int n = order_of(cls_, j);
                A(row, j) = J[n] * (uses_sine(cls_) ? std::sin(n * s.theta) : std::cos(n * s.theta));
            }
        };
        for (int i = 0; i < nb; ++i) fill(i, layout_.boundary[i]);
        for (int i = 0; i < ni; ++i) fill(nb + i, layout_.interior[i]);
        for (int j = 0; j < nbasis_; ++j) {
            const double c = A.col(j).norm();
            if (c > 0.0) A.col(j) /= c;
        }
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
        qr.setThreshold(1e-14);
        const int rank = static_cast<int>(qr.rank());
        if (rank == 0) return 1.0;
        const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(nb + ni, rank);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(Q.topRows(nb));
        return svd.singularValues()(rank - 1);
    }

private:
    SymClass cls_;
    int nbasis_ = 0;
    Layout layout_;
};

double refine(const MpsProblem& p, double lo, double hi, double* value) {
    auto r = boost::math::tools::brent_find_minima([&](double k) { return p.sigma(k); }, lo, hi, 48);
    double k = r.first, best = r.second;
    // sigma is V-shaped at an eigenvalue: fit the two slopes
    for (double delta : {1e-6 * k, 1e-8 * k}) {
        const double s1 = p.sigma(k - delta), s2 = p.sigma(k + delta);
        const double kn = k + delta * (s1 - s2) / (s1 + s2);
        const double sn = p.sigma(kn);
        if (sn < best) {
            k = kn;
            best = sn;
        }
    }
    *value = best;
    return k;
}

/// Eigenvalues of one class with frequency in [k_lo, k_hi).
std::vector<Eigenvalue> scan(const BoundaryCurve& curve, SymClass cls, double k_lo, double k_hi,
                             const MpsOptions& opts) {
    const MpsProblem p(curve, cls, k_hi, opts);
    std::vector<Eigenvalue> out;
    const int steps = std::max(2, static_cast<int>(std::ceil((k_hi - k_lo) / opts.scan_step)));
    const double h = (k_hi - k_lo) / steps;
    std::vector<double> ks(steps + 1), sig(steps + 1);
    for (int i = 0; i <= steps; ++i) {
        ks[i] = k_lo + i * h;
        sig[i] = p.sigma(ks[i]);
    }
    for (int i = 1; i < steps; ++i) {
        if (!(sig[i] <= sig[i - 1] && sig[i] < sig[i + 1])) continue;
        double val = 0.0;
        const double k = refine(p, ks[i - 1], ks[i + 1], &val);
        if (val > opts.accept) continue;
        out.push_back({k * k, k, cls, val});
        // a close partner inside the same bracket hides behind the first minimum
        constexpr int fine = 80;
        const double wlo = ks[std::max(i - 2, 0)], whi = ks[std::min(i + 2, steps)];
        std::vector<double> fk(fine + 1), fs(fine + 1);
        for (int j = 0; j <= fine; ++j) {
            fk[j] = wlo + (whi - wlo) * j / fine;
            fs[j] = p.sigma(fk[j]);
        }
        for (int j = 1; j < fine; ++j) {
            if (!(fs[j] <= fs[j - 1] && fs[j] < fs[j + 1])) continue;
            if (fk[j + 1] > k && fk[j - 1] < k) continue;
            double v2 = 0.0;
            const double k2 = refine(p, fk[j - 1], fk[j + 1], &v2);
            if (v2 <= opts.tolerance && std::abs(k2 - k) > 1e-7 * k) out.push_back({k2 * k2, k2, cls, v2});
        }
    }
    std::sort(out.begin(), out.end(), [](const Eigenvalue& a, const Eigenvalue& b) { return a.k < b.k; });
    std::vector<Eigenvalue> unique;
    for (const auto& e : out)
        if (unique.empty() || std::abs(unique.back().k - e.k) > 1e-9 * e.k) unique.push_back(e);
    return unique;
}

void check_tolerance(const Spectrum& s) {
    for (const auto& e : s.eigs)
        if (e.residual > s.tolerance)
            throw NumericalError("dirichlet_eigs: eigenvalue " + std::to_string(e.lambda) + " (" +
                                 sym_class_name(e.cls) + ") has subspace residual " + std::to_string(e.residual) +
                                 "; basis ill-conditioned or too small");
}

}  // namespace

const char* sym_class_name(SymClass c) {
    switch (c) {
        case SymClass::EE: return "EE";
        case SymClass::OE: return "OE";
        case SymClass::EO: return "EO";
        case SymClass::OO: return "OO";
    }
    return "?";
}

SymClass parse_sym_class(const std::string& name) {
    for (SymClass c : all_sym_classes)
        if (name == sym_class_name(c)) return c;
    throw ValidationError("unknown symmetry class '" + name + "' (expected EE, OE, EO or OO)");
}

std::vector<double> Spectrum::frequencies() const {
    std::vector<double> v;
    for (const auto& e : eigs) v.push_back(e.k);
    return v;
}

std::vector<double> Spectrum::values() const {
    std::vector<double> v;
    for (const auto& e : eigs) v.push_back(e.lambda);
    return v;
}

double Spectrum::max_residual() const {
    double m = 0.0;
    for (const auto& e : eigs) m = std::max(m, e.residual);
    return m;
}

void Spectrum::sort() {
    std::sort(eigs.begin(), eigs.end(), [](const Eigenvalue& a, const Eigenvalue& b) { return a.lambda < b.lambda; });
}

double mps_sigma(const BoundaryCurve& curve, SymClass cls, double k, const MpsOptions& opts) {
    return MpsProblem(curve, cls, k, opts).sigma(k);
}

Spectrum dirichlet_eigs(const BoundaryCurve& curve, SymClass cls, int count, const MpsOptions& opts) {
    if (count < 0) throw ValidationError("dirichlet_eigs: negative count");
    if (!curve.up_down_symmetric() || !curve.left_right_symmetric())
        throw ValidationError("dirichlet_eigs: the curve must be symmetric in both axes");
    Spectrum s;
    s.tolerance = opts.tolerance;
    double lo = opts.k_min, width = 4.0;
    while (static_cast<int>(s.eigs.size()) < count) {
        auto found = scan(curve, cls, lo, lo + width, opts);
        for (auto& e : found)
            if (s.eigs.empty() || std::abs(s.eigs.back().k - e.k) > 1e-9 * e.k) s.eigs.push_back(e);
        lo += width - opts.scan_step;
        if (lo > 1e4) throw NumericalError("dirichlet_eigs: frequency scan ran away");
    }
    s.eigs.resize(count);
    check_tolerance(s);
    return s;
}

Spectrum dirichlet_eigs_below(const BoundaryCurve& curve, double k_max, const MpsOptions& opts) {
    if (!curve.up_down_symmetric() || !curve.left_right_symmetric())
        throw ValidationError("dirichlet_eigs: the curve must be symmetric in both axes");
    Spectrum s;
    s.tolerance = opts.tolerance;
    for (SymClass c : all_sym_classes) {
        double lo = opts.k_min;
        while (lo < k_max) {
            const double hi = std::min(k_max, lo + 4.0);
            for (auto& e : scan(curve, c, lo, hi, opts)) {
                bool dup = false;
                for (const auto& o : s.eigs) dup = dup || (o.cls == c && std::abs(o.k - e.k) < 1e-9 * e.k);
                if (!dup && e.k < k_max) s.eigs.push_back(e);
            }
            lo = hi - opts.scan_step;
            if (hi >= k_max) break;
        }
    }
    s.sort();
    check_tolerance(s);
    return s;
}

Spectrum rectangle_eigs(double a, double b, int count) {
    if (!(a > 0.0 && b > 0.0) || count < 0) throw ValidationError("rectangle_eigs: bad arguments");
    Spectrum s;
    s.tolerance = 0.0;
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const int mmax = static_cast<int>(std::ceil(std::sqrt(count) * std::max(a / b, 1.0))) + 2;
    const int nmax = static_cast<int>(std::ceil(std::sqrt(count) * std::max(b / a, 1.0))) + 2;
    for (int m = 1; m <= mmax; ++m)
        for (int n = 1; n <= nmax; ++n) {
            const double lam = pi2 * (m * m / (a * a) + n * n / (b * b));
            // classes relative to the centre of the rectangle
            const SymClass c = m % 2 ? (n % 2 ? SymClass::EE : SymClass::EO) : (n % 2 ? SymClass::OE : SymClass::OO);
            s.eigs.push_back({lam, std::sqrt(lam), c, 0.0});
        }
    s.sort();
    if (static_cast<int>(s.eigs.size()) > count) s.eigs.resize(count);
    return s;
}

double weyl_count(double area, double perimeter, double Lambda, bool boundary_term) {
    const double four_pi = 4.0 * std::numbers::pi;
    return area / four_pi * Lambda - (boundary_term ? perimeter / four_pi * std::sqrt(Lambda) : 0.0);
}

}  // namespace bbnf
