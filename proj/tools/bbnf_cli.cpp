#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "bbnf/errors.hpp"
#include "bbnf/io.hpp"

using namespace bbnf;

namespace {

json load_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ValidationError("cannot open " + path);
    try {
        return json::parse(f);
    } catch (const json::parse_error& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

/// Place the contents of a task input file into the config object.
void merge_input(json& cfg, Task task, const json& input) {
    switch (task) {
        case Task::Invert:
            if (!input.is_object()) throw ValidationError("invert input: expected an object with key b");
            for (const auto& [key, value] : input.items()) cfg[key] = value;
            break;
        case Task::Qnf: cfg["qnf"] = input; break;
        default: cfg["domain"] = input; break;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Billiard Birkhoff and quantum normal forms"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_dir = ".", kase;
    int order = -1;
    std::uint64_t seed = 0;
    bool seed_given = false;
    app.add_option("--config", config_path, "JSON run configuration; its keys override flags");
    app.add_option("--out", out_dir, "output directory")->capture_default_str();
    app.add_option("--order", order, "normal form order");
    app.add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& s) { seed = s, seed_given = true; },
                                           "seed for randomized sweeps");

    std::string input_path;
    for (const char* name : {"classify", "nf", "invert", "qnf", "spectrum", "wavetrace", "oracle"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("input", input_path, "domain, invert or qnf input file");
        if (std::string(name) == "qnf") sub->add_option("--case", kase, "elliptic or hyperbolic");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    std::string message;
    int code = 0;
    try {
        const Task task = parse_task(app.get_subcommands().front()->get_name());
        json cfg = {{"task", task_name(task)}, {"out", out_dir}};
        if (order >= 0) cfg["order"] = order;
        if (seed_given) cfg["seed"] = seed;
        if (!input_path.empty()) merge_input(cfg, task, load_json(input_path));
        if (!kase.empty()) cfg["qnf"]["case"] = kase;
        if (!config_path.empty()) {
            const json file = load_json(config_path);
            if (!file.is_object()) throw ValidationError(config_path + ": expected an object");
            for (const auto& [key, value] : file.items()) cfg[key] = value;
        }
        code = run_and_write(parse_config(cfg), &message);
    } catch (const ValidationError& e) {
        code = 2;
        message = std::string("validation error: ") + e.what();
    }
    (code == 0 ? std::cout : std::cerr) << message << (message.empty() || message.back() == '\n' ? "" : "\n");
    return code;
}
