#include "idie/config.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace idie {

namespace {

using nlohmann::json;

void reject_unknown(const json& object, const std::string& prefix, const std::set<std::string>& allowed) {
    for (const auto& [key, value] : object.items())
        if (!allowed.contains(key)) throw ConfigError(prefix + key, "unknown key");
}

const json& require_object(const json& j, const std::string& key) {
    if (!j.is_object()) throw ConfigError(key, "expected an object");
    return j;
}

double number(const json& j, const std::string& key) {
    if (!j.is_number()) throw ConfigError(key, "expected a number");
    return j.get<double>();
}

std::string text(const json& j, const std::string& key) {
    if (!j.is_string()) throw ConfigError(key, "expected a string");
    return j.get<std::string>();
}

std::uint64_t unsigned_integer(const json& j, const std::string& key) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
        throw ConfigError(key, "expected a nonnegative integer");
    return j.get<std::uint64_t>();
}

}  // namespace

RunConfig parse_config(const std::string& source) {
    json root;
    try {
        root = json::parse(source);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("not valid JSON: ") + e.what());
    }
    require_object(root, "<root>");
    reject_unknown(root, "", {"problem", "discretization", "picard", "seed", "output_path"});

    RunConfig cfg;
    if (!root.contains("problem")) throw ConfigError("problem", "missing section");
    const json& problem = require_object(root["problem"], "problem");
    reject_unknown(problem, "problem.", {"name", "parameters"});
    if (!problem.contains("name")) throw ConfigError("problem.name", "missing");
    cfg.problem_name = text(problem["name"], "problem.name");
    if (problem.contains("parameters")) {
        const json& params = require_object(problem["parameters"], "problem.parameters");
        for (const auto& [key, value] : params.items())
            cfg.parameters[key] = number(value, "problem.parameters." + key);
    }

    if (root.contains("discretization")) {
        const json& disc = require_object(root["discretization"], "discretization");
        reject_unknown(disc, "discretization.", {"step", "quadrature"});
        if (disc.contains("step")) cfg.discretization.step = number(disc["step"], "discretization.step");
        if (disc.contains("quadrature")) {
            const std::string rule = text(disc["quadrature"], "discretization.quadrature");
            if (rule != "trapezoid") throw ConfigError("discretization.quadrature", "only 'trapezoid' is supported");
        }
    }
    if (!(cfg.discretization.step > 0.0)) throw ConfigError("discretization.step", "must be positive");

    if (root.contains("picard")) {
        const json& picard = require_object(root["picard"], "picard");
        reject_unknown(picard, "picard.", {"tolerance", "max_iterations"});
        if (picard.contains("tolerance")) cfg.picard.tolerance = number(picard["tolerance"], "picard.tolerance");
        if (picard.contains("max_iterations"))
            cfg.picard.max_iterations = unsigned_integer(picard["max_iterations"], "picard.max_iterations");
    }
    if (!(cfg.picard.tolerance > 0.0)) throw ConfigError("picard.tolerance", "must be positive");
    if (cfg.picard.max_iterations < 1) throw ConfigError("picard.max_iterations", "must be at least 1");

    if (root.contains("seed")) cfg.seed = unsigned_integer(root["seed"], "seed");
    if (root.contains("output_path")) cfg.output_path = text(root["output_path"], "output_path");
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot read config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

ProblemInstance instantiate(const RunConfig& config) {
    const auto entry = find_entry(config.problem_name);
    if (!entry) throw ConfigError("problem.name", "no catalog problem named '" + config.problem_name + "'");
    try {
        return entry->instantiate(config.parameters);
    } catch (const StructuralError& e) {
        throw ConfigError("problem.parameters", e.what());
    }
}

}  // namespace idie
