#include "idie/estimates.hpp"

#include "idie/grid.hpp"

#include <cmath>
#include <numeric>

namespace idie {

namespace {

double jump_lipschitz_sum(const LipschitzData& lip, std::size_t m) {
    if (lip.jump_lipschitz.size() != m) throw StructuralError("LipschitzData needs one D_k per impulse");
    return std::accumulate(lip.jump_lipschitz.begin(), lip.jump_lipschitz.end(), 0.0);
}

double trapezoid_sum(const std::vector<double>& nodes, const std::vector<double>& values) {
    double sum = 0.0;
    for (std::size_t i = 1; i < nodes.size(); ++i) sum += 0.5 * (nodes[i] - nodes[i - 1]) * (values[i - 1] + values[i]);
    return sum;
}

double finish(double prefactor, const ImpulsiveProblem& problem, const LipschitzData& lip, const SemigroupBound& sg,
              GrowthData data, double t_query, BoundScope scope) {
    if (prefactor == 0.0) return 0.0;
    return prefactor * growth_factor(problem, lip, sg, data, t_query, scope);
}

}  // namespace

CertificateReport existence_certificate(const ImpulsiveProblem& problem, const LipschitzData& lip,
                                        const SemigroupBound& sg) {
    const double d = jump_lipschitz_sum(lip, problem.impulse_count());
    CertificateReport out;
    out.lhs = 2.0 * problem.horizon * sg.M * lip.window_lipschitz * d;
    out.pass = out.lhs < out.threshold;
    return out;
}

PachpatteInstance growth_instance(const ImpulsiveProblem& problem, const LipschitzData& lip, const SemigroupBound& sg,
                                  GrowthData data) {
    const std::size_t m = problem.impulse_count();
    jump_lipschitz_sum(lip, m);
    const double M = sg.M;
    const bool tilde = data == GrowthData::tilde;
    PachpatteInstance inst;
    inst.n = [](double) { return 1.0; };
    ScalarFn nv = tilde ? lip.field_lipschitz_tilde : lip.field_lipschitz;
    inst.f = [M, nv](double t) { return M * nv(t); };
    inst.g = lip.kernel_lipschitz;
    const double lg = tilde ? lip.window_lipschitz_tilde : lip.window_lipschitz;
    for (std::size_t k = 0; k < m; ++k) inst.beta.push_back(M * lg * lip.jump_lipschitz[k]);
    inst.impulse_times = problem.impulse_times;
    inst.theta = problem.window_theta;
    inst.tau = problem.window_tau;
    inst.horizon = problem.horizon;
    return inst;
}

double growth_factor(const ImpulsiveProblem& problem, const LipschitzData& lip, const SemigroupBound& sg,
                     GrowthData data, double t, BoundScope scope) {
    if (t < 0.0 || t > problem.horizon) throw DomainError("bound queried outside [0, b]");
    const PachpatteEvaluator eval(growth_instance(problem, lip, sg, data));
    const BoundReport at_t = eval.bound(t);
    if (scope == BoundScope::at_time) return at_t.value;
    // Same product, exponential carried on to the horizon.
    return at_t.value * std::exp(eval.Phi(problem.horizon) - eval.Phi(t));
}

AprioriReport apriori_bound(const ImpulsiveProblem& problem, const LipschitzData& lip, const SemigroupBound& sg,
                            const Discretization& disc) {
    const Index n = problem.dimension;
    const double M = sg.M;
    const Vector zero = Vector::Zero(n);
    const HistorySegment flat = HistorySegment::constant(zero, problem.delay);

    AprioriReport out;
    out.history_term = M * history_norm(problem);

    const auto nodes = aligned_grid(0.0, problem.horizon, problem.impulse_times, disc.step);
    std::vector<double> field(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        Vector z = Vector::Zero(n);
        for (std::size_t j = 1; j <= i; ++j)
            z += (0.5 * (nodes[j] - nodes[j - 1])) *
                 (problem.kernel(nodes[i], nodes[j - 1], flat) + problem.kernel(nodes[i], nodes[j], flat));
        field[i] = M * sup_norm(problem.field(nodes[i], flat, z));
    }
    out.field_term = trapezoid_sum(nodes, field);

    for (std::size_t k = 0; k < problem.impulse_count(); ++k) {
        Vector integral = Vector::Zero(n);
        if (problem.window_theta[k] != problem.window_tau[k]) {
            const auto window = aligned_grid(problem.window_begin(k), problem.window_end(k), {}, disc.step);
            for (std::size_t j = 1; j < window.size(); ++j)
                integral += (0.5 * (window[j] - window[j - 1])) *
                            (problem.window_integrand(window[j - 1], flat) + problem.window_integrand(window[j], flat));
        }
        out.jump_term += M * sup_norm(problem.jump_maps[k](integral));
    }

    out.growth = growth_factor(problem, lip, sg, GrowthData::plain, problem.horizon, BoundScope::horizon_uniform);
    out.K = (out.history_term + out.field_term + out.jump_term) * out.growth;
    return out;
}

double dependence_initial_bound(const ImpulsiveProblem& problem, const LipschitzData& lip, const SemigroupBound& sg,
                                double history_gap, double t_query, BoundScope scope) {
    if (!(history_gap >= 0.0)) throw DomainError("history gap must be nonnegative");
    return finish(sg.M * history_gap, problem, lip, sg, GrowthData::plain, t_query, scope);
}

double dependence_initial_bound(const ImpulsiveProblem& problem, const LipschitzData& lip, const SemigroupBound& sg,
                                double history_gap) {
    return dependence_initial_bound(problem, lip, sg, history_gap, problem.horizon);
}

double dependence_parameter_bound(const ImpulsiveProblem& problem, const LipschitzData& lip, const SemigroupBound& sg,
                                  double rho_gap, double mu_gap, double t_query, BoundScope scope) {
    if (!(rho_gap >= 0.0) || !(mu_gap >= 0.0)) throw DomainError("parameter gaps must be nonnegative");
    const double b = problem.horizon;
    const double M = sg.M;
    const double d = jump_lipschitz_sum(lip, problem.impulse_count());
    const double prefactor =
        b * M * lip.field_parameter_sensitivity * rho_gap + 2.0 * b * M * lip.window_parameter_sensitivity * d * mu_gap;
    return finish(prefactor, problem, lip, sg, GrowthData::tilde, t_query, scope);
}

double dependence_parameter_bound(const ImpulsiveProblem& problem, const LipschitzData& lip, const SemigroupBound& sg,
                                  double rho_gap, double mu_gap) {
    return dependence_parameter_bound(problem, lip, sg, rho_gap, mu_gap, problem.horizon);
}

double dependence_function_bound(const ImpulsiveProblem& problem, const LipschitzData& lip, const SemigroupBound& sg,
                                 double t_query, BoundScope scope) {
    const std::size_t m = problem.impulse_count();
    if (lip.jump_deviation.size() != m) throw StructuralError("LipschitzData needs one N_k per impulse");
    if (!(lip.field_deviation >= 0.0) || !(lip.history_deviation >= 0.0))
        throw DomainError("deviations must be nonnegative");
    const double M = sg.M;
    double prefactor = M * lip.history_deviation + problem.horizon * M * lip.field_deviation;
    for (double nk : lip.jump_deviation) {
        if (!(nk >= 0.0)) throw DomainError("deviations must be nonnegative");
        prefactor += M * nk;
    }
    return finish(prefactor, problem, lip, sg, GrowthData::plain, t_query, scope);
}

double dependence_function_bound(const ImpulsiveProblem& problem, const LipschitzData& lip, const SemigroupBound& sg) {
    return dependence_function_bound(problem, lip, sg, problem.horizon);
}

std::string to_string(DependenceKind kind) {
    switch (kind) {
        case DependenceKind::initial: return "initial";
        case DependenceKind::parameter: return "parameter";
        case DependenceKind::function: return "function";
    }
    return "?";
}

DependenceKind parse_dependence_kind(const std::string& name) {
    if (name == "initial") return DependenceKind::initial;
    if (name == "parameter") return DependenceKind::parameter;
    if (name == "function") return DependenceKind::function;
    throw StructuralError("unknown dependence kind '" + name + "' (expected initial, parameter or function)");
}

DependenceReport check_dependence(DependenceKind kind, const PiecewiseTrajectory& solution_a, double residual_a,
                                  const ImpulsiveProblem& a, const ImpulsiveProblem& b, const LipschitzData& lip,
                                  const SemigroupBound& sg, const PerturbationGaps& gaps, const Discretization& disc,
                                  const PicardControl& control) {
    const auto [solution_b, report_b] = solve_mild(b, disc, control);
    DependenceReport out;
    out.kind = kind;
    out.empirical = sigma_diff(solution_a, solution_b);
    out.residual_a = residual_a;
    out.residual_b = report_b.final_residual;
    out.budget = 2.0 * (out.residual_a + out.residual_b);
    switch (kind) {
        case DependenceKind::initial:
            out.theoretical = dependence_initial_bound(a, lip, sg, gaps.history);
            break;
        case DependenceKind::parameter:
            out.theoretical = dependence_parameter_bound(a, lip, sg, gaps.rho, gaps.mu);
            break;
        case DependenceKind::function: {
            LipschitzData dev = lip;
            dev.history_deviation = gaps.history;
            dev.field_deviation = gaps.field;
            dev.jump_deviation = gaps.jumps.empty() ? std::vector<double>(a.impulse_count(), 0.0) : gaps.jumps;
            out.theoretical = dependence_function_bound(a, dev, sg);
            break;
        }
    }
    out.dominated = out.empirical <= out.theoretical + out.budget;
    return out;
}

DependenceReport check_dependence(DependenceKind kind, const ImpulsiveProblem& a, const ImpulsiveProblem& b,
                                  const LipschitzData& lip, const SemigroupBound& sg, const PerturbationGaps& gaps,
                                  const Discretization& disc, const PicardControl& control) {
    const auto [solution_a, report_a] = solve_mild(a, disc, control);
    return check_dependence(kind, solution_a, report_a.final_residual, a, b, lip, sg, gaps, disc, control);
}

ImpulsiveProblem shift_history(const ImpulsiveProblem& base, const Vector& offset) {
    if (offset.size() != base.dimension) throw StructuralError("history offset has the wrong dimension");
    ImpulsiveProblem out = base;
    out.history = [h = base.history, offset](double t) { return (h(t) + offset).eval(); };
    return out;
}

ImpulsiveProblem shift_field(const ImpulsiveProblem& base, const Vector& offset) {
    if (offset.size() != base.dimension) throw StructuralError("field offset has the wrong dimension");
    ImpulsiveProblem out = base;
    out.field = [v = base.field, offset](double t, const HistorySegment& w, const Vector& z) {
        return (v(t, w, z) + offset).eval();
    };
    return out;
}

ImpulsiveProblem shift_jumps(const ImpulsiveProblem& base, const std::vector<Vector>& offsets) {
    if (offsets.size() != base.impulse_count()) throw StructuralError("need one jump offset per impulse");
    ImpulsiveProblem out = base;
    for (std::size_t k = 0; k < offsets.size(); ++k) {
        if (offsets[k].size() != base.dimension) throw StructuralError("jump offset has the wrong dimension");
        out.jump_maps[k] = [i = base.jump_maps[k], d = offsets[k]](const Vector& x) { return (i(x) + d).eval(); };
    }
    return out;
}

}  // namespace idie
