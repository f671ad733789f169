#include <cstdio>
#include <set>

#include "bbnf/errors.hpp"
#include "bbnf/io.hpp"

namespace bbnf {

namespace {

constexpr const char* task_names[] = {"classify", "nf", "invert", "qnf", "spectrum", "wavetrace", "oracle"};

void require_object(const json& j, const std::string& where) {
    if (!j.is_object()) throw ValidationError(where + ": expected an object");
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, value] : j.items())
        if (!allowed.count(key)) throw ValidationError(where + ": unknown key '" + key + "'");
}

template <class T>
T get_as(const json& j, const std::string& key, const std::string& where) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ValidationError(where + "." + key + ": wrong type");
    }
}

template <class T>
void read(const json& j, const char* key, T& target, const std::string& where) {
    if (j.contains(key)) target = get_as<T>(j, key, where);
}

void read_number(const json& j, const char* key, double& target, const std::string& where) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_number()) throw ValidationError(where + "." + key + ": expected a number");
    target = j.at(key).get<double>();
}

void read_int(const json& j, const char* key, int& target, const std::string& where) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_number_integer()) throw ValidationError(where + "." + key + ": expected an integer");
    target = j.at(key).get<int>();
}

void read_numbers(const json& j, const char* key, std::vector<double>& target, const std::string& where) {
    if (!j.contains(key)) return;
    const json& a = j.at(key);
    if (!a.is_array()) throw ValidationError(where + "." + key + ": expected an array of numbers");
    target.clear();
    for (const auto& x : a) {
        if (!x.is_number()) throw ValidationError(where + "." + key + ": expected an array of numbers");
        target.push_back(x.get<double>());
    }
}

void one_of(const std::string& value, std::initializer_list<const char*> allowed, const std::string& where) {
    for (const char* a : allowed)
        if (value == a) return;
    throw ValidationError(where + ": unsupported value '" + value + "'");
}

DomainSpec parse_domain(const json& j) {
    const std::string where = "domain";
    require_object(j, where);
    DomainSpec d;
    read<std::string>(j, "kind", d.kind, where);
    if (d.kind == "jet") {
        reject_unknown(j, {"kind", "coeffs", "scale"}, where);
        read_numbers(j, "coeffs", d.coeffs, where);
        read_number(j, "scale", d.scale, where);
        d.jet().validate();
    } else if (d.kind == "ellipse") {
        reject_unknown(j, {"kind", "semi_x", "semi_y"}, where);
        read_number(j, "semi_x", d.semi_x, where);
        read_number(j, "semi_y", d.semi_y, where);
        if (!(d.semi_x > 0.0 && d.semi_y > 0.0)) throw ValidationError("domain: semi-axes must be positive");
    } else {
        throw ValidationError("domain.kind: expected 'jet' or 'ellipse'");
    }
    return d;
}

json emit_domain(const DomainSpec& d) {
    if (d.kind == "ellipse") return {{"kind", "ellipse"}, {"semi_x", d.semi_x}, {"semi_y", d.semi_y}};
    return {{"kind", "jet"}, {"coeffs", d.coeffs}, {"scale", d.scale}};
}

CoeffSpec parse_coeff(const json& term, const std::string& where) {
    CoeffSpec c;
    const bool sampled = term.contains("coeff_samples");
    const bool closed = term.contains("closed_form");
    if (sampled == closed) throw ValidationError(where + ": give exactly one of coeff_samples or closed_form");
    if (sampled) {
        const json& a = term.at("coeff_samples");
        if (!a.is_array() || a.empty()) throw ValidationError(where + ".coeff_samples: expected a nonempty array");
        for (const auto& x : a) {
            if (x.is_number()) {
                c.samples_re.push_back(x.get<double>());
                c.samples_im.push_back(0.0);
            } else if (x.is_array() && x.size() == 2 && x[0].is_number() && x[1].is_number()) {
                c.samples_re.push_back(x[0].get<double>());
                c.samples_im.push_back(x[1].get<double>());
            } else {
                throw ValidationError(where + ".coeff_samples: entries must be numbers or [re, im] pairs");
            }
        }
        return c;
    }
    const json& cf = term.at("closed_form");
    const std::string w = where + ".closed_form";
    require_object(cf, w);
    reject_unknown(cf, {"tag", "params"}, w);
    if (!cf.contains("tag")) throw ValidationError(w + ": missing tag");
    c.tag = get_as<std::string>(cf, "tag", w);
    one_of(c.tag, {"const", "cos", "sin", "poly"}, w + ".tag");
    read_numbers(cf, "params", c.params, w);
    const std::size_t need = c.tag == "const" ? 1 : (c.tag == "poly" ? 0 : 2);
    if (c.tag == "poly" ? c.params.empty() : c.params.size() != need)
        throw ValidationError(w + ".params: wrong number of parameters for '" + c.tag + "'");
    return c;
}

json emit_coeff(const CoeffSpec& c) {
    if (!c.tag.empty()) return {{"closed_form", {{"tag", c.tag}, {"params", c.params}}}};
    json a = json::array();
    for (std::size_t i = 0; i < c.samples_re.size(); ++i) {
        if (c.samples_im[i] == 0.0)
            a.push_back(c.samples_re[i]);
        else
            a.push_back(json::array({c.samples_re[i], c.samples_im[i]}));
    }
    return {{"coeff_samples", a}};
}

QnfSpec parse_qnf(const json& j) {
    const std::string where = "qnf";
    require_object(j, where);
    reject_unknown(j, {"case", "R_A", "R_B", "L", "nodes", "terms"}, where);
    QnfSpec q;
    read<std::string>(j, "case", q.kase, where);
    one_of(q.kase, {"elliptic", "hyperbolic"}, "qnf.case");
    read_number(j, "R_A", q.R_A, where);
    read_number(j, "R_B", q.R_B, where);
    read_number(j, "L", q.L, where);
    read_int(j, "nodes", q.nodes, where);
    if (j.contains("terms")) {
        if (!j.at("terms").is_array()) throw ValidationError("qnf.terms: expected an array");
        int i = 0;
        for (const auto& t : j.at("terms")) {
            const std::string w = "qnf.terms[" + std::to_string(i++) + "]";
            require_object(t, w);
            reject_unknown(t, {"m", "monomial", "r_power", "coeff_samples", "closed_form"}, w);
            QnfTermSpec term;
            read_int(t, "m", term.m, w);
            read_int(t, "r_power", term.r_power, w);
            if (!t.contains("monomial")) throw ValidationError(w + ": missing monomial");
            const auto mono = get_as<std::vector<int>>(t, "monomial", w);
            if (mono.size() != 2) throw ValidationError(w + ".monomial: expected [p, q]");
            term.p = mono[0];
            term.q = mono[1];
            term.coeff = parse_coeff(t, w);
            if (!term.coeff.samples_re.empty() && static_cast<int>(term.coeff.samples_re.size()) != q.nodes)
                throw ValidationError(w + ".coeff_samples: need one value per grid node");
            q.terms.push_back(term);
        }
    }
    return q;
}

json emit_qnf(const QnfSpec& q) {
    json terms = json::array();
    for (const auto& t : q.terms) {
        json e = {{"m", t.m}, {"monomial", {t.p, t.q}}, {"r_power", t.r_power}};
        e.update(emit_coeff(t.coeff));
        terms.push_back(e);
    }
    return {{"case", q.kase}, {"R_A", q.R_A}, {"R_B", q.R_B}, {"L", q.L}, {"nodes", q.nodes}, {"terms", terms}};
}

}  // namespace

const char* task_name(Task t) { return task_names[static_cast<int>(t)]; }

Task parse_task(const std::string& name) {
    for (int i = 0; i < 7; ++i)
        if (name == task_names[i]) return static_cast<Task>(i);
    throw ValidationError("task: unknown task '" + name + "'");
}

DomainJet DomainSpec::jet() const {
    if (kind != "jet") throw ValidationError("domain: task needs a jet domain, got '" + kind + "'");
    return DomainJet{coeffs, scale};
}

RunConfig parse_config(const json& j) {
    const std::string where = "config";
    require_object(j, where);
    reject_unknown(j, {"task", "domain", "order", "seed", "out", "b", "tag", "branch", "resonance", "count", "k_max",
                       "mps_tolerance", "window_width", "t_max", "t_step", "threshold", "radii", "iterations",
                       "random_jets", "qnf"},
                   where);
    RunConfig c;
    if (!j.contains("task")) throw ValidationError("config: missing task");
    c.task = parse_task(get_as<std::string>(j, "task", where));
    if (j.contains("domain")) c.domain = parse_domain(j.at("domain"));
    read_int(j, "order", c.order, where);
    if (j.contains("seed")) {
        const json& seed = j.at("seed");
        if (!seed.is_number_integer() || (!seed.is_number_unsigned() && seed.get<std::int64_t>() < 0))
            throw ValidationError("config.seed: expected a non-negative integer");
        c.seed = j.at("seed").get<std::uint64_t>();
    }
    read<std::string>(j, "out", c.out, where);
    read_numbers(j, "b", c.b, where);
    read<std::string>(j, "tag", c.tag, where);
    read<std::string>(j, "branch", c.branch, where);
    read<std::string>(j, "resonance", c.resonance, where);
    read_int(j, "count", c.count, where);
    read_number(j, "k_max", c.k_max, where);
    read_number(j, "mps_tolerance", c.mps_tolerance, where);
    read_number(j, "window_width", c.window_width, where);
    read_number(j, "t_max", c.t_max, where);
    read_number(j, "t_step", c.t_step, where);
    read_number(j, "threshold", c.threshold, where);
    read_numbers(j, "radii", c.radii, where);
    read_int(j, "iterations", c.iterations, where);
    read_int(j, "random_jets", c.random_jets, where);
    if (j.contains("qnf")) c.qnf = parse_qnf(j.at("qnf"));

    one_of(c.tag, {"elliptic", "hyperbolic"}, "config.tag");
    one_of(c.branch, {"convex", "concave"}, "config.branch");
    one_of(c.resonance, {"strict", "keep"}, "config.resonance");
    if (c.order < 0) throw ValidationError("config.order: must be non-negative");
    if (c.count < 1) throw ValidationError("config.count: must be positive");
    if (c.k_max < 0.0) throw ValidationError("config.k_max: must be non-negative");
    if (!(c.mps_tolerance > 0.0)) throw ValidationError("config.mps_tolerance: must be positive");
    if (!(c.window_width > 0.0)) throw ValidationError("config.window_width: must be positive");
    if (!(c.t_step > 0.0) || !(c.t_max > 0.0)) throw ValidationError("config: t_max and t_step must be positive");
    if (c.iterations < 1) throw ValidationError("config.iterations: must be positive");
    if (c.random_jets < 0) throw ValidationError("config.random_jets: must be non-negative");
    return c;
}

json emit_config(const RunConfig& c) {
    return {{"task", task_name(c.task)},
            {"domain", emit_domain(c.domain)},
            {"order", c.order},
            {"seed", c.seed},
            {"out", c.out},
            {"b", c.b},
            {"tag", c.tag},
            {"branch", c.branch},
            {"resonance", c.resonance},
            {"count", c.count},
            {"k_max", c.k_max},
            {"mps_tolerance", c.mps_tolerance},
            {"window_width", c.window_width},
            {"t_max", c.t_max},
            {"t_step", c.t_step},
            {"threshold", c.threshold},
            {"radii", c.radii},
            {"iterations", c.iterations},
            {"random_jets", c.random_jets},
            {"qnf", emit_qnf(c.qnf)}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string fmt17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace bbnf
