#pragma once

#include "idie/catalog.hpp"
#include "idie/solver.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>

namespace idie {

/// Bad or unreadable configuration; `key()` is the dotted path at fault.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& message)
        : std::runtime_error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// JSON run configuration:
///
///   {
///     "problem":        {"name": "paper_example", "parameters": {"L_G": 0.01}},
///     "discretization": {"step": 0.001, "quadrature": "trapezoid"},
///     "picard":         {"tolerance": 1e-10, "max_iterations": 500},
///     "seed":           7,
///     "output_path":    "trajectory.csv"
///   }
///
/// Only problem.name is required. Unknown keys are errors.
struct RunConfig {
    std::string problem_name;
    Parameters parameters;
    Discretization discretization;
    PicardControl picard;
    std::uint64_t seed = 0;
    std::string output_path;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Catalog lookup plus parameter range checks, reported as ConfigError.
ProblemInstance instantiate(const RunConfig& config);

}  // namespace idie
