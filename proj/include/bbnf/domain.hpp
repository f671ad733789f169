#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace bbnf {

/**
 * Even boundary jet at the bouncing-ball axis: the upper boundary is
 * y = scale * f(x / scale) with f(x) = 1 + a0 x^2 + a1 x^4 + ... + an x^{2n+2}.
 */
struct DomainJet {
    std::vector<double> coeffs;  ///< (a0, ..., an)
    double scale = 1.0;

    int order() const { return static_cast<int>(coeffs.size()) - 1; }
    double a(int k) const { return k < static_cast<int>(coeffs.size()) ? coeffs[k] : 0.0; }
    double A() const { return 2.0 * (2.0 * a(0) + 1.0); }

    /// Normalized profile and its first two derivatives.
    double f(double x) const;
    double df(double x) const;
    double d2f(double x) const;

    void validate() const;
};

enum class OrbitTag { Elliptic, Hyperbolic, Degenerate };

const char* tag_name(OrbitTag t);

struct OrbitClass {
    OrbitTag tag = OrbitTag::Degenerate;
    double alpha = 0.0;   ///< rotation angle in (0, pi) when elliptic
    double lambda = 0.0;  ///< Lyapunov exponent when hyperbolic
    double trace = 0.0;
    bool a_zero_excluded = false;  ///< A = 0, i.e. a0 = -1/2
};

constexpr double degeneracy_tolerance = 1e-9;

/// Vertex radius of curvature 1 / (2 |a0|) times the scale.
double curvature_radius(const DomainJet& jet);

/// [[A-1, -A], [2-A, A-1]] with A = 2(2 a0 + 1).
Eigen::Matrix2d linear_poincare(const DomainJet& jet);

OrbitClass classify(const DomainJet& jet);
OrbitClass classify_trace(double trace);

/// Jet of the boundary of the ellipse x^2/sx^2 + y^2/sy^2 = 1 at (0, sy), order n.
DomainJet ellipse_jet(double semi_x, double semi_y, int n);

/**
 * Closed C^2 curve with period-1 parameter, oriented counterclockwise.
 * Symmetric curves expose the parameter maps of the two reflections.
 */
class BoundaryCurve {
public:
    virtual ~BoundaryCurve() = default;

    virtual Eigen::Vector2d position(double t) const = 0;
    virtual Eigen::Vector2d velocity(double t) const = 0;
    virtual Eigen::Vector2d acceleration(double t) const = 0;

    virtual bool up_down_symmetric() const { return false; }
    virtual bool left_right_symmetric() const { return false; }
    /// Parameter of the image point under y -> -y.
    virtual double mirror_y(double t) const;
    /// Parameter of the image point under x -> -x.
    virtual double mirror_x(double t) const;

    /// Parameters of the upper and lower vertex on the vertical axis.
    virtual double top_parameter() const { return 0.25; }
    virtual double bottom_parameter() const { return 0.75; }

    double speed(double t) const { return velocity(t).norm(); }
    Eigen::Vector2d unit_tangent(double t) const { return velocity(t).normalized(); }
    Eigen::Vector2d inward_normal(double t) const;
    /// Signed curvature, positive where the curve turns left (convex for CCW).
    double curvature(double t) const;
};

class EllipseCurve : public BoundaryCurve {
public:
    EllipseCurve(double semi_x, double semi_y);
    Eigen::Vector2d position(double t) const override;
    Eigen::Vector2d velocity(double t) const override;
    Eigen::Vector2d acceleration(double t) const override;
    bool up_down_symmetric() const override { return true; }
    bool left_right_symmetric() const override { return true; }
    double semi_x() const { return a_; }
    double semi_y() const { return b_; }

private:
    double a_, b_;
};

/**
 * The jet's graph near the axis, blended smoothly into an ellipse far from
 * it: y^2 = chi(x) f(x)^2 + (1 - chi(x)) b^2 (1 - x^2/a^2) in normalized units,
 * where chi = 1 for |x| <= x_inner and chi = 0 for |x| >= x_outer.
 */
class JetCurve : public BoundaryCurve {
public:
    explicit JetCurve(DomainJet jet);
    Eigen::Vector2d position(double t) const override;
    Eigen::Vector2d velocity(double t) const override;
    Eigen::Vector2d acceleration(double t) const override;
    bool up_down_symmetric() const override { return true; }
    bool left_right_symmetric() const override { return true; }

    const DomainJet& jet() const { return jet_; }
    double x_inner() const { return x1_; }
    double x_outer() const { return x2_; }

private:
    /// y^2 as a function of normalized x and its two derivatives.
    std::array<double, 3> F(double x) const;
    std::array<Eigen::Vector2d, 3> local(double t) const;

    DomainJet jet_;
    double ae_, be_, x1_, x2_;
};

std::unique_ptr<BoundaryCurve> to_curve(const DomainJet& jet);
std::unique_ptr<BoundaryCurve> to_curve_ellipse(double semi_x, double semi_y);

}  // namespace bbnf
