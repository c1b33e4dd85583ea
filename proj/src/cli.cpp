#include "idie/cli.hpp"

#include "idie/config.hpp"
#include "idie/counter_rng.hpp"
#include "idie/csv.hpp"
#include "idie/estimates.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>

namespace idie::cli {

namespace {

struct Options {
    std::vector<std::string> configs;
    std::string out_path;
    std::string kind;
    std::size_t samples = 100;
    std::optional<std::uint64_t> seed;
    bool with_solve = false;
    bool empirical = false;
    std::vector<std::string> params;
    double gap = 0.0;
    double rho_gap = 0.0;
    double mu_gap = 0.0;
    double vfield_gap = 0.0;
    double history_gap = 0.0;
    double jump_gap = 0.0;
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

RunConfig load(const Options& opt, std::size_t which = 0) {
    if (opt.configs.size() <= which) throw ConfigError("", "--config is required");
    RunConfig cfg = load_config(opt.configs[which]);
    for (const auto& assignment : opt.params) {
        const auto eq = assignment.find('=');
        if (eq == std::string::npos || eq == 0) throw ConfigError("--param", "expected NAME=VALUE, got '" + assignment + "'");
        const std::string name = assignment.substr(0, eq);
        const std::string value = assignment.substr(eq + 1);
        char* end = nullptr;
        const double v = std::strtod(value.c_str(), &end);
        if (end == value.c_str() || *end != '\0') throw ConfigError("--param " + name, "not a number: '" + value + "'");
        cfg.parameters[name] = v;
    }
    return cfg;
}

void print_header(std::ostream& out, const RunConfig& cfg) {
    out << "problem: " << cfg.problem_name << '\n';
    const auto entry = find_entry(cfg.problem_name);
    if (entry) {
        out << "parameters:";
        for (const auto& [name, value] : entry->resolve(cfg.parameters)) out << ' ' << name << '=' << num(value);
        out << '\n';
    }
    out << "step: " << num(cfg.discretization.step) << '\n';
}

void write_file(const std::string& path, const auto& writer) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw ConfigError("output_path", "cannot write '" + path + "'");
    writer(file);
    if (!file) throw ConfigError("output_path", "write to '" + path + "' failed");
}

SemigroupBound semigroup_of(const ImpulsiveProblem& problem) {
    return operator_norm_bound(problem.generator, problem.horizon);
}

int cmd_solve(const Options& opt, std::ostream& out) {
    const RunConfig cfg = load(opt);
    const ProblemInstance inst = instantiate(cfg);
    print_header(out, cfg);
    const auto [traj, report] = solve_mild(inst.problem, cfg.discretization, cfg.picard);
    out << "sigma_norm: " << num(traj.sigma_norm()) << '\n';
    for (std::size_t k = 0; k < report.jumps.size(); ++k)
        out << "jump[" << k + 1 << "]: t=" << num(inst.problem.impulse_times[k])
            << " |dw|=" << num(sup_norm(traj.jump(k))) << '\n';
    out << "residual: " << num(report.final_residual) << '\n';
    out << "iterations:";
    for (auto it : report.iterations_per_segment) out << ' ' << it;
    out << '\n';
    const std::string path = opt.out_path.empty() ? cfg.output_path : opt.out_path;
    if (path.empty()) {
        out << "csv: (none; give --out or output_path)\n";
    } else {
        write_file(path, [&](std::ostream& f) { write_trajectory_csv(f, traj); });
        out << "csv: " << path << '\n';
    }
    return kOk;
}

int cmd_certify(const Options& opt, std::ostream& out) {
    const RunConfig cfg = load(opt);
    const ProblemInstance inst = instantiate(cfg);
    print_header(out, cfg);
    const SemigroupBound sg = semigroup_of(inst.problem);
    const CertificateReport cert = existence_certificate(inst.problem, inst.lipschitz, sg);
    out << "M: " << num(sg.M) << '\n';
    out << "lhs: " << num(cert.lhs) << '\n';
    out << "threshold: " << num(cert.threshold) << '\n';
    out << (cert.pass ? "PASS" : "FAIL") << '\n';
    return cert.pass ? kOk : kCertificateFail;
}

int cmd_apriori(const Options& opt, std::ostream& out) {
    const RunConfig cfg = load(opt);
    const ProblemInstance inst = instantiate(cfg);
    print_header(out, cfg);
    const SemigroupBound sg = semigroup_of(inst.problem);
    const AprioriReport rep = apriori_bound(inst.problem, inst.lipschitz, sg, cfg.discretization);
    out << "M: " << num(sg.M) << '\n';
    out << "history_term: " << num(rep.history_term) << '\n';
    out << "field_term: " << num(rep.field_term) << '\n';
    out << "jump_term: " << num(rep.jump_term) << '\n';
    out << "growth: " << num(rep.growth) << '\n';
    out << "K: " << num(rep.K) << '\n';
    if (!opt.with_solve) return kOk;
    const auto [traj, report] = solve_mild(inst.problem, cfg.discretization, cfg.picard);
    const double sigma = traj.sigma_norm();
    out << "sigma_norm: " << num(sigma) << '\n';
    const bool ok = sigma <= rep.K;
    out << (ok ? "DOMINATED" : "NOT DOMINATED") << '\n';
    return ok ? kOk : kViolation;
}

int cmd_bound(const Options& opt, std::ostream& out) {
    const RunConfig cfg = load(opt);
    const ProblemInstance inst = instantiate(cfg);
    const DependenceKind kind = parse_dependence_kind(opt.kind);
    print_header(out, cfg);
    const SemigroupBound sg = semigroup_of(inst.problem);
    const ImpulsiveProblem& a = inst.problem;
    const Index n = a.dimension;
    out << "kind: " << to_string(kind) << '\n';

    PerturbationGaps gaps;
    ImpulsiveProblem b = a;
    switch (kind) {
        case DependenceKind::initial:
            if (!(opt.gap >= 0.0)) throw ConfigError("--gap", "must be nonnegative");
            gaps.history = opt.gap;
            b = shift_history(a, Vector::Constant(n, opt.gap));
            out << "history_gap: " << num(opt.gap) << '\n';
            break;
        case DependenceKind::parameter: {
            if (!(opt.rho_gap >= 0.0) || !(opt.mu_gap >= 0.0)) throw ConfigError("--rho-gap/--mu-gap", "must be nonnegative");
            gaps.rho = opt.rho_gap;
            gaps.mu = opt.mu_gap;
            out << "rho_gap: " << num(opt.rho_gap) << '\n' << "mu_gap: " << num(opt.mu_gap) << '\n';
            if (opt.empirical) {
                const auto entry = find_entry(cfg.problem_name);
                Parameters p = entry->resolve(cfg.parameters);
                auto move_parameter = [&](const std::string& name, double gap) {
                    if (gap == 0.0) return;
                    if (!p.contains(name))
                        throw ConfigError("--" + name + "-gap", "problem '" + cfg.problem_name + "' has no parameter " + name);
                    for (const auto& range : entry->free_parameters)
                        if (range.name == name) p[name] = p[name] + gap <= range.upper ? p[name] + gap : p[name] - gap;
                };
                move_parameter("rho", opt.rho_gap);
                move_parameter("mu", opt.mu_gap);
                RunConfig moved = cfg;
                moved.parameters = p;
                b = instantiate(moved).problem;
            }
            break;
        }
        case DependenceKind::function: {
            if (!(opt.vfield_gap >= 0.0) || !(opt.history_gap >= 0.0) || !(opt.jump_gap >= 0.0))
                throw ConfigError("--vfield-gap/--history-gap/--jump-gap", "must be nonnegative");
            gaps.field = opt.vfield_gap;
            gaps.history = opt.history_gap;
            gaps.jumps.assign(a.impulse_count(), opt.jump_gap);
            b = shift_history(shift_field(a, Vector::Constant(n, opt.vfield_gap)), Vector::Constant(n, opt.history_gap));
            b = shift_jumps(b, std::vector<Vector>(a.impulse_count(), Vector::Constant(n, opt.jump_gap)));
            out << "field_gap: " << num(opt.vfield_gap) << '\n'
                << "history_gap: " << num(opt.history_gap) << '\n'
                << "jump_gap: " << num(opt.jump_gap) << '\n';
            break;
        }
    }

    if (!opt.empirical) {
        double theoretical = 0.0;
        switch (kind) {
            case DependenceKind::initial:
                theoretical = dependence_initial_bound(a, inst.lipschitz, sg, gaps.history);
                break;
            case DependenceKind::parameter:
                theoretical = dependence_parameter_bound(a, inst.lipschitz, sg, gaps.rho, gaps.mu);
                break;
            case DependenceKind::function: {
                LipschitzData dev = inst.lipschitz;
                dev.field_deviation = gaps.field;
                dev.history_deviation = gaps.history;
                dev.jump_deviation = gaps.jumps;
                theoretical = dependence_function_bound(a, dev, sg);
                break;
            }
        }
        out << "theoretical: " << num(theoretical) << '\n';
        return kOk;
    }
    const DependenceReport rep =
        check_dependence(kind, a, b, inst.lipschitz, sg, gaps, cfg.discretization, cfg.picard);
    out << "theoretical: " << num(rep.theoretical) << '\n';
    out << "empirical: " << num(rep.empirical) << '\n';
    out << "residual_budget: " << num(rep.budget) << '\n';
    out << (rep.dominated ? "DOMINATED" : "NOT DOMINATED") << '\n';
    return rep.dominated ? kOk : kViolation;
}

int cmd_inequality(const Options& opt, std::ostream& out) {
    std::uint64_t seed = 0;
    double step = 1e-3;
    std::string path = opt.out_path;
    if (!opt.configs.empty()) {
        const RunConfig cfg = load(opt);
        seed = cfg.seed;
        step = cfg.discretization.step;
        if (path.empty()) path = cfg.output_path;
    }
    if (opt.seed) seed = *opt.seed;
    out << "generator: " << CounterRng::kName << '\n';
    out << "seed: " << seed << '\n';
    out << "samples: " << opt.samples << '\n';
    out << "step: " << num(step) << '\n';
    out << "tolerance: " << num(campaign_tolerance(step)) << '\n';
    const CampaignSummary summary = run_campaign(opt.samples, seed, step);
    for (const auto& row : summary.rows) {
        out << "instance " << row.instance_id << ": m=" << row.num_impulses << " C_k=[";
        for (std::size_t k = 0; k < row.Ck.size(); ++k) out << (k ? " " : "") << num(row.Ck[k]);
        out << "] max_violation=" << num(row.max_violation) << " at t=" << num(row.t_max_violation)
            << " bound(T)=" << num(row.bound_at_horizon) << '\n';
    }
    out << "max_violation: " << num(summary.max_violation) << '\n';
    if (!path.empty()) {
        write_file(path, [&](std::ostream& f) { write_campaign_csv(f, summary); });
        out << "csv: " << path << '\n';
    }
    out << (summary.passed ? "PASS" : "FAIL") << '\n';
    return summary.passed ? kOk : kViolation;
}

int cmd_compare(const Options& opt, std::ostream& out) {
    if (opt.configs.size() != 2) throw ConfigError("--config", "compare needs exactly two configs");
    const RunConfig ca = load(opt, 0);
    const RunConfig cb = load(opt, 1);
    const auto [ta, ra] = solve_mild(instantiate(ca).problem, ca.discretization, ca.picard);
    const auto [tb, rb] = solve_mild(instantiate(cb).problem, cb.discretization, cb.picard);
    out << "a: " << ca.problem_name << " residual " << num(ra.final_residual) << '\n';
    out << "b: " << cb.problem_name << " residual " << num(rb.final_residual) << '\n';
    const auto gaps = block_gaps(ta, tb);
    for (std::size_t k = 0; k < gaps.size(); ++k) out << "segment " << k << ": " << num(gaps[k]) << '\n';
    out << "sigma_diff: " << num(sigma_diff(ta, tb)) << '\n';
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Impulsive delay Volterra equations: mild solutions and bound checks", "idie"};
    app.require_subcommand(1);
    Options opt;

    auto with_config = [&](CLI::App* sub, bool required) {
        auto* o = sub->add_option("--config", opt.configs, "JSON run configuration")->check(CLI::ExistingFile);
        if (required) o->required();
        sub->add_option("--param", opt.params, "override a problem parameter, NAME=VALUE");
    };
    auto* solve = app.add_subcommand("solve", "solve and write the trajectory CSV");
    with_config(solve, true);
    solve->add_option("--out", opt.out_path, "trajectory CSV path");
    auto* certify = app.add_subcommand("certify", "existence certificate");
    with_config(certify, true);
    auto* apriori = app.add_subcommand("apriori", "a-priori solution bound");
    with_config(apriori, true);
    apriori->add_flag("--with-solve", opt.with_solve, "also solve and check domination");
    auto* bound = app.add_subcommand("bound", "dependence bounds");
    with_config(bound, true);
    bound->add_option("--kind", opt.kind, "initial | parameter | function")->required();
    bound->add_flag("--empirical", opt.empirical, "solve the perturbed pair and check domination");
    bound->add_option("--gap", opt.gap, "history gap (initial)");
    bound->add_option("--rho-gap", opt.rho_gap, "|rho_1 - rho_2| (parameter)");
    bound->add_option("--mu-gap", opt.mu_gap, "|mu_1 - mu_2| (parameter)");
    bound->add_option("--vfield-gap", opt.vfield_gap, "field deviation P (function)");
    bound->add_option("--history-gap", opt.history_gap, "history deviation J (function)");
    bound->add_option("--jump-gap", opt.jump_gap, "jump map deviation N_k, all k (function)");
    auto* inequality = app.add_subcommand("inequality", "randomized Pachpatte domination campaign");
    with_config(inequality, false);
    inequality->add_option("--samples", opt.samples, "number of random instances");
    inequality->add_option("--seed", opt.seed, "campaign seed (overrides the config)");
    inequality->add_option("--out", opt.out_path, "campaign CSV path");
    auto* compare = app.add_subcommand("compare", "sigma distance between two solves");
    compare->add_option("--config", opt.configs, "two JSON configurations")->required()->expected(1)->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)->check(
        CLI::ExistingFile);
    compare->add_option("--param", opt.params, "override a problem parameter in both, NAME=VALUE");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*solve) return cmd_solve(opt, out);
        if (*certify) return cmd_certify(opt, out);
        if (*apriori) return cmd_apriori(opt, out);
        if (*bound) return cmd_bound(opt, out);
        if (*inequality) return cmd_inequality(opt, out);
        if (*compare) return cmd_compare(opt, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kUsage;
    } catch (const ConvergenceError& e) {
        err << "solver error: " << e.what() << '\n';
        return kNoConvergence;
    } catch (const DivergenceError& e) {
        err << "oracle error: " << e.what() << '\n';
        return kViolation;
    } catch (const StructuralError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

}  // namespace idie::cli
