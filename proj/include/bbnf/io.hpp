#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bbnf/domain.hpp"

namespace bbnf {

using json = nlohmann::ordered_json;

enum class Task { Classify, Nf, Invert, Qnf, Spectrum, Wavetrace, Oracle };

const char* task_name(Task t);
Task parse_task(const std::string& name);

/// Either a boundary jet or an ellipse with the given semi-axes.
struct DomainSpec {
    std::string kind = "jet";
    std::vector<double> coeffs{-0.25};
    double scale = 1.0;
    double semi_x = 1.0;
    double semi_y = 0.75;

    DomainJet jet() const;
    bool operator==(const DomainSpec&) const = default;
};

/// Coefficient of one perturbation term: sampled on the grid nodes, or a closed form in s.
struct CoeffSpec {
    std::vector<double> samples_re;
    std::vector<double> samples_im;
    std::string tag;              ///< "const", "cos", "sin" or "poly"; empty when sampled
    std::vector<double> params;   ///< const: {c}; cos/sin: {amplitude, harmonic}; poly: coefficients in s
    bool operator==(const CoeffSpec&) const = default;
};

struct QnfTermSpec {
    int m = 3;
    int p = 0;
    int q = 0;
    int r_power = 0;
    CoeffSpec coeff;
    bool operator==(const QnfTermSpec&) const = default;
};

struct QnfSpec {
    std::string kase = "elliptic";
    double R_A = 2.0;
    double R_B = 2.0;
    double L = 2.0;
    int nodes = 129;
    std::vector<QnfTermSpec> terms;
    bool operator==(const QnfSpec&) const = default;
};

struct RunConfig {
    Task task = Task::Classify;
    DomainSpec domain;
    int order = 2;
    std::uint64_t seed = 0;
    std::string out = ".";

    // invert
    std::vector<double> b;
    std::string tag = "elliptic";
    std::string branch = "convex";
    std::string resonance = "strict";

    // spectrum and wavetrace
    int count = 20;          ///< eigenvalues per symmetry class when k_max is 0
    double k_max = 0.0;
    double mps_tolerance = 1e-8;
    double window_width = 0.1;
    double t_max = 6.0;
    double t_step = 0.005;
    double threshold = 0.2;

    // oracle
    std::vector<double> radii{0.01, 0.02, 0.03, 0.04, 0.05};
    int iterations = 10000;
    int random_jets = 0;

    QnfSpec qnf;

    bool operator==(const RunConfig&) const = default;
};

/// Parse and validate; unknown keys and wrong types raise ValidationError.
RunConfig parse_config(const json& j);
json emit_config(const RunConfig& c);

struct RunOutput {
    json report;                                   ///< machine-readable result with a provenance block
    std::string summary;                           ///< short human-readable text
    std::map<std::string, std::string> csv_files;  ///< file name -> contents
};

/// Execute the configured task. Exceptions from the numerical modules propagate.
RunOutput run(const RunConfig& config);

/// Run and write report.json plus any CSV files into config.out. Returns the exit code.
int run_and_write(const RunConfig& config, std::string* diagnostic = nullptr);

/// Shortest-roundtrip JSON text, two-space indent, trailing newline.
std::string dump(const json& j);

/// %.17g formatting used by every CSV writer.
std::string fmt17(double x);

}  // namespace bbnf
