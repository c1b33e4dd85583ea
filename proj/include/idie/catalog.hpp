#pragma once

#include "idie/model.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace idie {

struct ParameterRange {
    std::string name;
    double lower = 0.0;
    double upper = 0.0;
    double default_value = 0.0;
    std::string description;
};

using Parameters = std::map<std::string, double>;

/// A problem together with its Lipschitz data, as produced by a catalog entry.
struct ProblemInstance {
    ImpulsiveProblem problem;
    LipschitzData lipschitz;
};

/// Named, parameterized problem family.
struct CatalogEntry {
    std::string name;
    std::string summary;
    std::vector<ParameterRange> free_parameters;
    std::function<ProblemInstance(const Parameters&)> builder;

    /// Defaults filled in; StructuralError on unknown names or out-of-range values.
    ProblemInstance instantiate(const Parameters& overrides = {}) const;
    Parameters resolve(const Parameters& overrides) const;
};

/// Built-in problems:
///   paper_example    scalar delay Volterra equation with e^t semigroup and a zero-length jump window
///   pure_semigroup   w' = w, no forcing, no impulses
///   method_of_steps  w'(t) = w(t - r), constant history
///   integral_impulse two-dimensional problem with two positive-length jump windows and
///                    field/window parameters rho, mu
std::vector<CatalogEntry> build_catalog();

std::optional<CatalogEntry> find_entry(const std::string& name);

}  // namespace idie
