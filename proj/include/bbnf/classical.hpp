#pragma once

#include <vector>

#include "bbnf/domain.hpp"
#include "bbnf/series/series3.hpp"
#include "bbnf/series/series_map.hpp"

namespace bbnf {

/// Symmetry-reduced one-reflection map in chord coordinates (x, xi).
struct TwistMapJet {
    SeriesMap map;
    double A = 0.0;
};

enum class ResonancePolicy {
    Strict,        ///< refuse when e^{ik alpha} = 1 for some 1 <= k <= 2n+4
    KeepResonant,  ///< leave resonant monomials in place and read b from the diagonal terms
};

struct BirkhoffForm {
    OrbitClass cls;
    std::vector<double> b;            ///< b0 = alpha or lambda, then b1 ... bn
    double residual = 0.0;            ///< largest non-normal-form coefficient left (resonant ones excluded)
    double imaginary_defect = 0.0;    ///< largest imaginary part discarded from b1 ... bn
    std::vector<Exp2> resonant_terms;  ///< monomials of the first component kept because they are resonant
};

struct NormalizationResult {
    BirkhoffForm form;
    SeriesMap normal_map;   ///< the map in normalizing coordinates
    SeriesMap to_normal;    ///< eigen-coordinates -> normal coordinates
    Eigen::Matrix2cd eigen_rows;  ///< q = eigen_rows * (x, xi)
    cd bracket = 0.0;             ///< {q1, q2}
};

/// phi(x, x1, s) = |(x, 0) - (s, f(s))| + |(x1, 0) - (s, f(s))| through degree 2n+2.
Series3 generating_function(const DomainJet& jet, int order);

TwistMapJet twist_map(const Series3& phi);

NormalizationResult birkhoff_normalize(const TwistMapJet& map, int order,
                                       ResonancePolicy policy = ResonancePolicy::Strict);

std::vector<double> forward_map(const DomainJet& jet, int order,
                                ResonancePolicy policy = ResonancePolicy::Strict);

enum class HyperbolicBranch { Convex, Concave };  ///< a0 > 0 or a0 < -1/2

DomainJet invert(const std::vector<double>& b, OrbitTag tag,
                 HyperbolicBranch branch = HyperbolicBranch::Convex,
                 ResonancePolicy policy = ResonancePolicy::Strict);

/**
 * Twist of the angle-averaged dynamics when alpha = pi/2 and the q2^3 term
 * survives: d(rotation)/dI on the invariant circles of I^2 (beta + |r| cos 4 theta).
 * Throws Degenerate when the resonant term dominates and no circles exist.
 */
double quarter_resonance_twist(const NormalizationResult& nf);

/// Time-t flow of the Hamiltonian chi under {q1, q2} = bracket, as a map truncated at max_degree.
SeriesMap lie_transform(const Poly2& chi, cd bracket, int max_degree, double t = 1.0);

}  // namespace bbnf
