#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "bbnf/billiard.hpp"
#include "bbnf/classical.hpp"
#include "bbnf/errors.hpp"
#include "bbnf/io.hpp"
#include "bbnf/qnf.hpp"
#include "bbnf/wave.hpp"

namespace bbnf {

namespace {

ResonancePolicy policy(const RunConfig& c) {
    return c.resonance == "keep" ? ResonancePolicy::KeepResonant : ResonancePolicy::Strict;
}

std::unique_ptr<BoundaryCurve> curve_of(const DomainSpec& d) {
    if (d.kind == "ellipse") return to_curve_ellipse(d.semi_x, d.semi_y);
    return to_curve(d.jet());
}

json provenance(const RunConfig& c) {
    return {{"domain", emit_config(c).at("domain")},
            {"order", c.order},
            {"seed", c.seed},
            {"tolerances",
             {{"degeneracy", degeneracy_tolerance}, {"mps", c.mps_tolerance}, {"resonance", 1e-8}, {"bvp", 1e-8}}}};
}

json orbit_json(const OrbitClass& o) {
    json j = {{"class", tag_name(o.tag)}, {"trace", o.trace}};
    if (o.tag == OrbitTag::Elliptic) j["alpha"] = o.alpha;
    if (o.tag == OrbitTag::Hyperbolic) j["lambda"] = o.lambda;
    if (o.a_zero_excluded) j["a_zero_excluded"] = true;
    return j;
}

SFun coeff_function(const CoeffSpec& c, double L, int nodes) {
    if (c.tag.empty()) {
        const auto grid = ChebGrid::get(nodes, L);
        Eigen::ArrayXcd v(nodes);
        for (int i = 0; i < nodes; ++i) v(i) = cd(c.samples_re[i], c.samples_im[i]);
        return SFun(grid, v);
    }
    const auto p = c.params;
    const std::string tag = c.tag;
    return SFun::from_function(
        [p, tag, L](double s) -> cd {
            if (tag == "const") return p[0];
            if (tag == "cos") return p[0] * std::cos(2.0 * std::numbers::pi * p[1] * s / L);
            if (tag == "sin") return p[0] * std::sin(2.0 * std::numbers::pi * p[1] * s / L);
            double acc = 0.0;
            for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * s + *it;
            return acc;
        },
        L, nodes);
}

Spectrum compute_spectrum(const RunConfig& c) {
    auto curve = curve_of(c.domain);
    MpsOptions opts;
    opts.tolerance = c.mps_tolerance;
    if (c.k_max > 0.0) return dirichlet_eigs_below(*curve, c.k_max, opts);
    Spectrum all;
    all.tolerance = c.mps_tolerance;
    for (SymClass cls : all_sym_classes) {
        const Spectrum s = dirichlet_eigs(*curve, cls, c.count, opts);
        all.eigs.insert(all.eigs.end(), s.eigs.begin(), s.eigs.end());
    }
    all.sort();
    return all;
}

std::string spectrum_csv(const Spectrum& s) {
    std::ostringstream os;
    os << "index,lambda,k,class,residual\n";
    for (std::size_t i = 0; i < s.eigs.size(); ++i) {
        const auto& e = s.eigs[i];
        os << i << ',' << fmt17(e.lambda) << ',' << fmt17(e.k) << ',' << sym_class_name(e.cls) << ','
           << fmt17(e.residual) << '\n';
    }
    return os.str();
}

json run_classify(const RunConfig& c, RunOutput& out) {
    const DomainJet jet = c.domain.jet();
    const OrbitClass o = classify(jet);
    json r = orbit_json(o);
    r["A"] = jet.A();
    r["curvature_radius"] = curvature_radius(jet);
    out.summary = std::string("class ") + tag_name(o.tag) + "\n";
    return r;
}

json run_nf(const RunConfig& c, RunOutput& out) {
    const DomainJet jet = c.domain.jet();
    const auto b = forward_map(jet, c.order, policy(c));
    out.summary = "b0 = " + fmt17(b[0]) + " with " + std::to_string(b.size() - 1) + " twist coefficients\n";
    return {{"class", tag_name(classify(jet).tag)}, {"b", b}};
}

json run_invert(const RunConfig& c, RunOutput& out) {
    const OrbitTag tag = c.tag == "elliptic" ? OrbitTag::Elliptic : OrbitTag::Hyperbolic;
    const auto branch = c.branch == "convex" ? HyperbolicBranch::Convex : HyperbolicBranch::Concave;
    const DomainJet jet = invert(c.b, tag, branch, policy(c));
    out.summary = "a0 = " + fmt17(jet.a(0)) + "\n";
    return {{"jet", {{"kind", "jet"}, {"coeffs", jet.coeffs}, {"scale", jet.scale}}}};
}

json run_qnf(const RunConfig& c, RunOutput& out) {
    const QnfSpec& q = c.qnf;
    const QnfCase kase = q.kase == "elliptic" ? QnfCase::Elliptic : QnfCase::Hyperbolic;
    const StraighteningData st = solve_straightening(q.R_A, q.R_B, q.L, kase, q.nodes);
    SymbolJet jet;
    jet.kase = kase;
    jet.L = q.L;
    jet.nodes = q.nodes;
    jet.alpha = st.alpha;
    for (const auto& t : q.terms) jet.add(t.m, t.p, t.q, coeff_function(t.coeff, q.L, q.nodes), t.r_power);
    const NormalFormPolys nf = normal_form(jet, c.order);

    json levels = json::array();
    for (const auto& rec : nf.ledger)
        levels.push_back({{"level", rec.q},
                          {"bvp", rec.bvp_residual},
                          {"boundary", rec.bc_residual},
                          {"remainder", rec.remainder},
                          {"degree", rec.degree},
                          {"parity_ok", rec.parity_ok}});
    json N = json::array();
    for (int k = 1; k <= 5; ++k) N.push_back(nf.semiclassical_N(k));
    out.summary = "alpha = " + fmt17(nf.alpha) + ", " + std::to_string(nf.f.size()) + " normal form polynomials\n";
    return {{"alpha", nf.alpha},
            {"case", q.kase},
            {"straightening", {{"s0", st.s0}, {"ell", st.ell}, {"ode_residual", st.ode_residual}}},
            {"f", nf.f},
            {"residuals", {{"f_imaginary", nf.f_imaginary}, {"levels", levels}}},
            {"N_k", N}};
}

json run_spectrum(const RunConfig& c, RunOutput& out) {
    const Spectrum s = compute_spectrum(c);
    out.csv_files["spectrum.csv"] = spectrum_csv(s);
    out.summary = std::to_string(s.eigs.size()) + " eigenvalues, largest residual " + fmt17(s.max_residual()) + "\n";
    return {{"count", s.eigs.size()}, {"lambda", s.values()}, {"max_residual", s.max_residual()}};
}

json run_wavetrace(const RunConfig& c, RunOutput& out) {
    const Spectrum s = compute_spectrum(c);
    std::vector<double> t;
    const auto steps = static_cast<long>(std::floor(c.t_max / c.t_step + 1e-9));
    for (long i = 0; i <= steps; ++i) t.push_back(static_cast<double>(i) * c.t_step);
    const WaveTrace tr = wave_trace(s, c.window_width, t);
    const auto peaks = detect_lengths(tr, c.threshold);

    std::ostringstream os;
    os << "t,trace,envelope\n";
    for (std::size_t i = 0; i < t.size(); ++i)
        os << fmt17(tr.t[i]) << ',' << fmt17(tr.trace[i]) << ',' << fmt17(tr.envelope[i]) << '\n';
    out.csv_files["spectrum.csv"] = spectrum_csv(s);
    out.csv_files["trace.csv"] = os.str();

    json pk = json::array();
    for (const auto& p : peaks)
        pk.push_back({{"t", p.t}, {"height", p.height}, {"width", p.width}, {"isolated", p.isolated}});
    out.summary = std::to_string(s.eigs.size()) + " eigenvalues, " + std::to_string(peaks.size()) + " peaks\n";
    return {{"eigenvalues", s.eigs.size()},
            {"window_width", c.window_width},
            {"window_fwhm", window_fwhm(c.window_width)},
            {"threshold", c.threshold},
            {"peaks", pk}};
}

json run_oracle(const RunConfig& c, RunOutput& out) {
    std::vector<DomainJet> jets{c.domain.jet()};
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> a0(-0.45, -0.05), a1(-0.02, 0.02);
    for (int i = 0; i < c.random_jets; ++i) jets.push_back(DomainJet{{a0(rng), a1(rng)}, 1.0});

    std::ostringstream os;
    os << "a0,a1,series_b1,fit_b1,relative_error,status\n";
    json rows = json::array();
    int failures = 0;
    for (const auto& jet : jets) {
        json row = {{"coeffs", jet.coeffs}};
        const double series = forward_map(jet, 1, ResonancePolicy::KeepResonant).at(1);
        row["series_b1"] = series;
        std::string status = "ok";
        double fit_b1 = std::nan(""), rel = std::nan("");
        try {
            auto curve = to_curve(jet);
            const auto fit = fit_birkhoff(*curve, find_bouncing_ball(*curve), c.radii, 2, c.iterations);
            fit_b1 = fit.b.at(0);
            rel = std::abs(fit_b1 - series) / std::abs(series);
            row["fit_b1"] = fit_b1;
            row["relative_error"] = rel;
        } catch (const NumericalError& e) {
            status = e.what();
            ++failures;
        }
        row["status"] = status;
        rows.push_back(row);
        os << fmt17(jet.a(0)) << ',' << fmt17(jet.a(1)) << ',' << fmt17(series) << ',' << fmt17(fit_b1) << ','
           << fmt17(rel) << ",\"" << status << "\"\n";
    }
    out.csv_files["oracle.csv"] = os.str();
    out.summary = std::to_string(jets.size() - failures) + " of " + std::to_string(jets.size()) + " fits converged\n";
    if (failures) out.report["failed"] = failures;
    return {{"rows", rows}};
}

}  // namespace

RunOutput run(const RunConfig& config) {
    RunOutput out;
    json result;
    switch (config.task) {
        case Task::Classify: result = run_classify(config, out); break;
        case Task::Nf: result = run_nf(config, out); break;
        case Task::Invert: result = run_invert(config, out); break;
        case Task::Qnf: result = run_qnf(config, out); break;
        case Task::Spectrum: result = run_spectrum(config, out); break;
        case Task::Wavetrace: result = run_wavetrace(config, out); break;
        case Task::Oracle: result = run_oracle(config, out); break;
    }
    json report = {{"task", task_name(config.task)}, {"provenance", provenance(config)}, {"result", result}};
    if (out.report.contains("failed")) report["failed"] = out.report["failed"];
    out.report = std::move(report);
    return out;
}

int run_and_write(const RunConfig& config, std::string* diagnostic) {
    auto fail = [&](int code, const std::string& msg) {
        if (diagnostic) *diagnostic = msg;
        return code;
    };
    RunOutput out;
    try {
        out = run(config);
    } catch (const ValidationError& e) {
        return fail(2, std::string("validation error: ") + e.what());
    } catch (const NumericalError& e) {
        return fail(1, std::string("numerical failure: ") + e.what());
    }
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(config.out, ec);
    auto write = [&](const std::string& name, const std::string& text) {
        std::ofstream f(fs::path(config.out) / name, std::ios::binary);
        f << text;
        return static_cast<bool>(f);
    };
    if (!write("report.json", dump(out.report))) return fail(1, "cannot write into " + config.out);
    for (const auto& [name, text] : out.csv_files)
        if (!write(name, text)) return fail(1, "cannot write " + name);
    if (diagnostic) *diagnostic = out.summary;
    if (out.report.contains("failed")) return fail(1, out.summary + "numerical failure: some oracle fits did not converge");
    return 0;
}

}  // namespace bbnf
