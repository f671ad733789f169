#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bbnf/billiard.hpp"
#include "bbnf/classical.hpp"
#include "bbnf/domain.hpp"
#include "bbnf/errors.hpp"
#include "bbnf/io.hpp"
#include "bbnf/qnf.hpp"
#include "bbnf/wave.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace bbnf;

namespace {

DomainJet make_jet(const std::vector<double>& coeffs, double scale) {
    DomainJet jet{coeffs, scale};
    jet.validate();
    return jet;
}

ResonancePolicy make_policy(const std::string& name) {
    if (name == "strict") return ResonancePolicy::Strict;
    if (name == "keep") return ResonancePolicy::KeepResonant;
    throw ValidationError("resonance policy must be 'strict' or 'keep'");
}

std::unique_ptr<BoundaryCurve> make_curve(const py::dict& domain) {
    const std::string kind = domain.contains("kind") ? domain["kind"].cast<std::string>() : "jet";
    if (kind == "ellipse") return to_curve_ellipse(domain["semi_x"].cast<double>(), domain["semi_y"].cast<double>());
    const double scale = domain.contains("scale") ? domain["scale"].cast<double>() : 1.0;
    return to_curve(make_jet(domain["coeffs"].cast<std::vector<double>>(), scale));
}

py::dict orbit_dict(const OrbitClass& o) {
    py::dict d("class"_a = tag_name(o.tag), "trace"_a = o.trace);
    if (o.tag == OrbitTag::Elliptic) d["alpha"] = o.alpha;
    if (o.tag == OrbitTag::Hyperbolic) d["lambda"] = o.lambda;
    return d;
}

}  // namespace

PYBIND11_MODULE(_bbnf, m) {
    m.doc() = "Birkhoff and quantum normal forms for bouncing-ball orbits";

    static py::exception<ValidationError> validation(m, "ValidationError", PyExc_ValueError);
    static py::exception<NumericalError> numerical(m, "NumericalError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ValidationError& e) {
            py::set_error(validation, e.what());
        } catch (const NumericalError& e) {
            py::set_error(numerical, e.what());
        }
    });

    m.def(
        "classify",
        [](const std::vector<double>& coeffs, double scale) { return orbit_dict(classify(make_jet(coeffs, scale))); },
        "coeffs"_a, "scale"_a = 1.0, "Classify the vertical bouncing-ball orbit of a jet.");

    m.def(
        "forward_map",
        [](const std::vector<double>& coeffs, int order, const std::string& resonance) {
            return forward_map(make_jet(coeffs, 1.0), order, make_policy(resonance));
        },
        "coeffs"_a, "order"_a, "resonance"_a = "strict", "Birkhoff coefficients b0 ... b_order of a unit-scale jet.");

    m.def(
        "invert",
        [](const std::vector<double>& b, const std::string& tag, const std::string& branch,
           const std::string& resonance) {
            if (tag != "elliptic" && tag != "hyperbolic") throw ValidationError("tag must be elliptic or hyperbolic");
            if (branch != "convex" && branch != "concave") throw ValidationError("branch must be convex or concave");
            return invert(b, tag == "elliptic" ? OrbitTag::Elliptic : OrbitTag::Hyperbolic,
                          branch == "convex" ? HyperbolicBranch::Convex : HyperbolicBranch::Concave,
                          make_policy(resonance))
                .coeffs;
        },
        "b"_a, "tag"_a = "elliptic", "branch"_a = "convex", "resonance"_a = "strict",
        "Jet coefficients a0 ... an reproducing the given Birkhoff coefficients.");

    m.def(
        "poincare_trace",
        [](const py::dict& domain) {
            auto c = make_curve(domain);
            const auto est = numeric_poincare(*c, find_bouncing_ball(*c));
            return py::dict("trace"_a = est.matrix.trace(), "determinant"_a = est.matrix.determinant(),
                            "richardson_error"_a = est.richardson_error);
        },
        "domain"_a, "Trace of the numerically differentiated Poincare map of the vertical orbit.");

    m.def(
        "straightening",
        [](double R_A, double R_B, double L, const std::string& kase, int nodes) {
            const auto d = solve_straightening(R_A, R_B, L, kase == "hyperbolic" ? QnfCase::Hyperbolic : QnfCase::Elliptic,
                                               nodes);
            return py::dict("alpha"_a = d.alpha, "s0"_a = d.s0, "ell"_a = d.ell, "ode_residual"_a = d.ode_residual);
        },
        "R_A"_a, "R_B"_a, "L"_a, "case"_a = "elliptic", "nodes"_a = 129);

    m.def(
        "dirichlet_eigenvalues",
        [](const py::dict& domain, const std::string& cls, int count, double k_max) {
            auto c = make_curve(domain);
            const Spectrum s = k_max > 0.0 ? dirichlet_eigs_below(*c, k_max) : dirichlet_eigs(*c, parse_sym_class(cls), count);
            return s.values();
        },
        "domain"_a, "cls"_a = "EE", "count"_a = 10, "k_max"_a = 0.0,
        "Dirichlet eigenvalues in one symmetry class, or all of them below k_max when it is positive.");

    m.def(
        "wave_trace_peaks",
        [](const std::vector<double>& eigenvalues, double width, const std::vector<double>& t, double threshold) {
            Spectrum s;
            for (double lam : eigenvalues) s.eigs.push_back({lam, std::sqrt(lam), SymClass::EE, 0.0});
            py::list out;
            for (const auto& p : detect_lengths(wave_trace(s, width, t), threshold))
                out.append(py::dict("t"_a = p.t, "height"_a = p.height, "width"_a = p.width, "isolated"_a = p.isolated));
            return out;
        },
        "eigenvalues"_a, "width"_a, "t"_a, "threshold"_a = 0.2);

    m.def(
        "run_json",
        [](const std::string& config) {
            json j;
            try {
                j = json::parse(config);
            } catch (const json::parse_error& e) {
                throw ValidationError(e.what());
            }
            return dump(run(parse_config(j)).report);
        },
        "config"_a, "Run a configuration given as JSON text and return the report as JSON text.");
}
