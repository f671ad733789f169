#include <algorithm>
#include <cmath>
#include <complex>

#include "bbnf/errors.hpp"
#include "bbnf/wave.hpp"

namespace bbnf {

WaveTrace wave_trace(const Spectrum& spec, double window_width, const std::vector<double>& t_grid) {
    if (!(window_width > 0.0)) throw ValidationError("wave_trace: window width must be positive");
    WaveTrace w;
    w.t = t_grid;
    w.window_width = window_width;
    std::vector<double> weight;
    for (const auto& e : spec.eigs) {
        weight.push_back(std::exp(-0.5 * std::pow(e.k * window_width, 2)));
        w.weight_sum += weight.back();
    }
    for (double t : t_grid) {
        std::complex<double> z = 0.0;
        for (std::size_t j = 0; j < spec.eigs.size(); ++j) z += weight[j] * std::polar(1.0, spec.eigs[j].k * t);
        w.trace.push_back(z.real());
        w.envelope.push_back(std::abs(z));
    }
    return w;
}

double window_fwhm(double window_width) { return 2.0 * std::sqrt(2.0 * std::log(2.0)) * window_width; }

std::vector<TracePeak> detect_lengths(const WaveTrace& tr, double threshold, double t_min) {
    std::vector<TracePeak> peaks;
    const auto& t = tr.t;
    const auto& e = tr.envelope;
    const std::size_t n = t.size();
    if (n < 3) return peaks;

    double top = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (t[i] >= t_min) top = std::max(top, e[i]);
    if (top <= 0.0) return peaks;

    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (t[i] < t_min || !(e[i] > e[i - 1] && e[i] >= e[i + 1]) || e[i] < threshold * top) continue;
        TracePeak p;
        const double h = t[i + 1] - t[i];
        const double den = e[i - 1] - 2.0 * e[i] + e[i + 1];
        const double shift = den < 0.0 ? 0.5 * (e[i - 1] - e[i + 1]) / den : 0.0;
        p.t = t[i] + std::clamp(shift, -0.5, 0.5) * h;
        p.height = e[i] - 0.25 * (e[i - 1] - e[i + 1]) * shift;

        const double half = 0.5 * e[i];
        std::size_t lo = i, hi = i;
        while (lo > 0 && e[lo] > half) --lo;
        while (hi + 1 < n && e[hi] > half) ++hi;
        auto cross = [&](std::size_t inside, std::size_t outside) {
            if (e[outside] > half) return t[outside];
            return t[outside] + (half - e[outside]) * (t[inside] - t[outside]) / (e[inside] - e[outside]);
        };
        p.width = cross(hi == i ? i : hi - 1, hi) - cross(lo == i ? i : lo + 1, lo);
        peaks.push_back(p);
    }
    const double radius = window_fwhm(tr.window_width);
    for (auto& p : peaks)
        for (const auto& q : peaks)
            if (&p != &q && std::abs(p.t - q.t) < radius) p.isolated = false;
    return peaks;
}

}  // namespace bbnf
