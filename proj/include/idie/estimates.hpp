#pragma once

#include "idie/catalog.hpp"
#include "idie/pachpatte.hpp"
#include "idie/semigroup.hpp"
#include "idie/solver.hpp"

#include <string>
#include <vector>

namespace idie {

struct CertificateReport {
    double lhs = 0.0;        // sum_k 2 b M L_G D_k
    double threshold = 1.0;
    bool pass = false;
};

/// Contraction condition for existence: sum_k 2 b M L_G D_k < 1.
CertificateReport existence_certificate(const ImpulsiveProblem& problem, const LipschitzData& lip,
                                        const SemigroupBound& sg);

/// Which Lipschitz pair feeds the growth factor.
enum class GrowthData {
    plain,  // f = M N_V,       beta_k = M L_G D_k
    tilde,  // f = M N_V tilde, beta_k = M L_G tilde D_k
};

/// Where the exponential of a dependence bound stops.
enum class BoundScope {
    horizon_uniform,  // int_{t_alpha}^b, the Sigma-norm statement
    at_time,          // int_{t_alpha}^t
};

/// n = 1, f = M N_V, g = N_U, beta_k = M L_G D_k on [0, b] (or the tilde pair).
PachpatteInstance growth_instance(const ImpulsiveProblem& problem, const LipschitzData& lip, const SemigroupBound& sg,
                                  GrowthData data = GrowthData::plain);

/// prod_{0<t_k<t} C_k exp(int_{t_alpha}^{b or t} f [1 + int g]) for the growth instance.
double growth_factor(const ImpulsiveProblem& problem, const LipschitzData& lip, const SemigroupBound& sg,
                     GrowthData data, double t, BoundScope scope);

struct AprioriReport {
    double history_term = 0.0;  // M |history|_C
    double field_term = 0.0;    // int_0^b M |V(s, 0, int_0^s U(s, r, 0) dr)| ds
    double jump_term = 0.0;     // sum_k M |I_k(int G(s, 0) ds)|, lambda = 1
    double growth = 1.0;        // prod_k C_k exp(int_{t_m}^b ...)
    double K = 0.0;
};

/// Bound on the Sigma-norm of any mild solution:
/// (M |history| + H + Q) prod_k C_k exp(int_{t_alpha}^b M N_V [1 + int N_U]).
AprioriReport apriori_bound(const ImpulsiveProblem& problem, const LipschitzData& lip, const SemigroupBound& sg,
                            const Discretization& disc);

/// M |history_1 - history_2|_C prod C_k exp(...).
double dependence_initial_bound(const ImpulsiveProblem& problem, const LipschitzData& lip, const SemigroupBound& sg,
                                double history_gap, double t_query, BoundScope scope = BoundScope::horizon_uniform);
double dependence_initial_bound(const ImpulsiveProblem& problem, const LipschitzData& lip, const SemigroupBound& sg,
                                double history_gap);

/// (b M Omega_1 |rho gap| + sum_k 2 b M Omega_2 D_k |mu gap|) prod C~_k exp(int M N_V~ [1 + int N_U]).
double dependence_parameter_bound(const ImpulsiveProblem& problem, const LipschitzData& lip, const SemigroupBound& sg,
                                  double rho_gap, double mu_gap, double t_query,
                                  BoundScope scope = BoundScope::horizon_uniform);
double dependence_parameter_bound(const ImpulsiveProblem& problem, const LipschitzData& lip, const SemigroupBound& sg,
                                  double rho_gap, double mu_gap);

/// (M J + b M P + sum_k M N_k) prod C_k exp(...), deviations read from `lip`.
double dependence_function_bound(const ImpulsiveProblem& problem, const LipschitzData& lip, const SemigroupBound& sg,
                                 double t_query, BoundScope scope = BoundScope::horizon_uniform);
double dependence_function_bound(const ImpulsiveProblem& problem, const LipschitzData& lip, const SemigroupBound& sg);

enum class DependenceKind { initial, parameter, function };

std::string to_string(DependenceKind kind);
DependenceKind parse_dependence_kind(const std::string& name);

/// Sizes of the perturbation between problem a and problem b.
struct PerturbationGaps {
    double history = 0.0;  // |history_a - history_b|_C
    double rho = 0.0;
    double mu = 0.0;
    double field = 0.0;              // P
    std::vector<double> jumps;       // N_k
};

struct DependenceReport {
    DependenceKind kind = DependenceKind::initial;
    double empirical = 0.0;
    double theoretical = 0.0;
    double residual_a = 0.0;
    double residual_b = 0.0;
    double budget = 0.0;  // 2 (residual_a + residual_b)
    bool dominated = false;
};

/// Solves both problems and compares sigma_diff against the matching bound,
/// evaluated with the Lipschitz data of problem a (deviations from `gaps`).
DependenceReport check_dependence(DependenceKind kind, const ImpulsiveProblem& a, const ImpulsiveProblem& b,
                                  const LipschitzData& lip, const SemigroupBound& sg, const PerturbationGaps& gaps,
                                  const Discretization& disc, const PicardControl& control);

/// Same with a solution of problem a already at hand.
DependenceReport check_dependence(DependenceKind kind, const PiecewiseTrajectory& solution_a, double residual_a,
                                  const ImpulsiveProblem& a, const ImpulsiveProblem& b, const LipschitzData& lip,
                                  const SemigroupBound& sg, const PerturbationGaps& gaps, const Discretization& disc,
                                  const PicardControl& control);

// Perturbations. Each returns a copy of `base` with one piece of data shifted
// by a constant vector.

ImpulsiveProblem shift_history(const ImpulsiveProblem& base, const Vector& offset);
ImpulsiveProblem shift_field(const ImpulsiveProblem& base, const Vector& offset);
ImpulsiveProblem shift_jumps(const ImpulsiveProblem& base, const std::vector<Vector>& offsets);

}  // namespace idie
