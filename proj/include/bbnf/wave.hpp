#pragma once

#include <string>
#include <vector>

#include "bbnf/domain.hpp"

namespace bbnf {

/// Parity under x -> -x, then under y -> -y (E = even, O = odd).
enum class SymClass { EE, OE, EO, OO };

const char* sym_class_name(SymClass c);
SymClass parse_sym_class(const std::string& name);
inline constexpr SymClass all_sym_classes[4] = {SymClass::EE, SymClass::OE, SymClass::EO, SymClass::OO};

struct Eigenvalue {
    double lambda = 0.0;    ///< eigenvalue of -Laplacian (frequency squared)
    double k = 0.0;         ///< frequency
    SymClass cls = SymClass::EE;
    double residual = 0.0;  ///< sine of the subspace angle at k
};

struct Spectrum {
    std::vector<Eigenvalue> eigs;  ///< ascending in lambda
    double tolerance = 1e-8;

    std::vector<double> frequencies() const;
    std::vector<double> values() const;
    double max_residual() const;
    void sort();
};

struct MpsOptions {
    double scan_step = 0.02;     ///< frequency step of the minimum search
    double k_min = 0.5;
    double basis_slack = 14.0;   ///< Bessel orders up to k r_max + slack
    double basis_factor = 1.0;   ///< multiplies the number of basis functions
    double accept = 1e-4;        ///< largest subspace sine accepted as an eigenvalue
    double tolerance = 1e-8;
};

/**
 * Lowest `count` Dirichlet eigenvalues in one symmetry class by the method of
 * particular solutions (Fourier-Bessel basis centred at the origin,
 * boundary collocation on the first quadrant, subspace angles).
 * Throws NumericalError if an accepted eigenvalue misses opts.tolerance.
 */
Spectrum dirichlet_eigs(const BoundaryCurve& curve, SymClass cls, int count, const MpsOptions& opts = {});

/// All eigenvalues with frequency below k_max, over the four classes.
Spectrum dirichlet_eigs_below(const BoundaryCurve& curve, double k_max, const MpsOptions& opts = {});

/// Subspace sine sigma(k) of the particular-solution basis at frequency k.
double mps_sigma(const BoundaryCurve& curve, SymClass cls, double k, const MpsOptions& opts = {});

/// Closed-form Dirichlet spectrum of the rectangle [0, a] x [0, b], lowest count values.
Spectrum rectangle_eigs(double a, double b, int count);

/// Frequency weight exp(-(k width)^2 / 2), i.e. a Gaussian of width `width` in t.
struct WaveTrace {
    std::vector<double> t;
    std::vector<double> trace;     ///< sum_j cos(k_j t) w(k_j)
    std::vector<double> envelope;  ///< |sum_j exp(i k_j t) w(k_j)|
    double window_width = 0.0;
    double weight_sum = 0.0;
};

WaveTrace wave_trace(const Spectrum& spec, double window_width, const std::vector<double>& t_grid);

struct TracePeak {
    double t = 0.0;
    double height = 0.0;
    double width = 0.0;   ///< full width at half maximum of the envelope
    bool isolated = true;
};

/// Full width at half maximum, in t, of the window exp(-t^2 / (2 width^2)).
double window_fwhm(double window_width);

/**
 * Local maxima of the envelope above `threshold` (relative to the largest
 * value for t >= t_min), refined by a parabola through three samples.
 * A peak is isolated when no other detected peak lies within window_fwhm.
 */
std::vector<TracePeak> detect_lengths(const WaveTrace& trace, double threshold, double t_min = 0.5);

/// Weyl estimate (area / 4 pi) Lambda - (perimeter / 4 pi) sqrt(Lambda).
double weyl_count(double area, double perimeter, double Lambda, bool boundary_term = true);

}  // namespace bbnf
