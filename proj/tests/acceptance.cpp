// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "idie/cli.hpp"
#include "idie/counter_rng.hpp"
#include "idie/csv.hpp"
#include "idie/estimates.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include <unistd.h>

namespace fs = std::filesystem;
using namespace idie;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

fs::path scratch_dir() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / ("idie_acceptance_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
    const auto p = scratch_dir() / name;
    std::ofstream(p) << text;
    return p.string();
}

// Value of a "key: value" line in CLI output; NaN when absent.
double field(const std::string& out, const std::string& key) {
    std::istringstream in(out);
    std::string line;
    while (std::getline(in, line))
        if (line.rfind(key + ": ", 0) == 0) return std::stod(line.substr(key.size() + 2));
    return std::nan("");
}

bool has_line(const std::string& out, const std::string& token) {
    std::istringstream in(out);
    std::string line;
    while (std::getline(in, line))
        if (line == token) return true;
    return false;
}

ProblemInstance entry(const std::string& name, const Parameters& params = {}) {
    return find_entry(name)->instantiate(params);
}

SemigroupBound bound_for(const ImpulsiveProblem& p) { return operator_norm_bound(p.generator, p.horizon); }

bool certified(const ProblemInstance& inst) {
    return existence_certificate(inst.problem, inst.lipschitz, bound_for(inst.problem)).pass;
}

// ---------------------------------------------------------------------------

Outcome certificate() {
    const auto cfg = write_file("c1.json", R"({"problem": {"name": "paper_example", "parameters": {"L_G": 0.01}}})");
    std::ostringstream out, err, out5, err5;
    const int code = cli::run({"certify", "--config", cfg}, out, err);
    const int code5 = cli::run({"certify", "--config", cfg, "--param", "L_G=0.05"}, out5, err5);
    const double m = field(out.str(), "M");
    const double lhs = field(out.str(), "lhs");
    const double e2 = std::exp(2.0);
    const bool m_ok = m >= e2 * (1.0 - 1e-9) && m <= e2 * (1.0 + 1e-6) * (1.0 + 1e-9);
    const bool pass = m_ok && lhs >= 0.2955 && lhs <= 0.2957 && has_line(out.str(), "PASS") && code == 0 &&
                      has_line(out5.str(), "FAIL") && code5 == cli::kCertificateFail;
    return {pass, "M=" + fmt("%.10g", m) + " lhs=" + fmt("%.6f", lhs) + " (L_G=0.05 lhs=" +
                      fmt("%.6f", field(out5.str(), "lhs")) + ", exit " + std::to_string(code5) + ")"};
}

Outcome example_jump() {
    const auto csv = (scratch_dir() / "c2.csv").string();
    const auto cfg = write_file("c2.json", R"({"problem": {"name": "paper_example", "parameters": {"L_G": 0.01}},
        "discretization": {"step": 0.001}, "output_path": ")" + csv + "\"}");
    std::ostringstream out, err;
    const int code = cli::run({"solve", "--config", cfg}, out, err);
    if (code != 0) return {false, "solve exited " + std::to_string(code) + ": " + err.str()};
    std::ifstream in(csv);
    const auto traj = read_trajectory_csv(in);
    const double jump = sup_norm(traj.jump(0));
    return {jump <= 1e-12, "|dw(1)|=" + fmt("%.3g", jump) + " from the CSV at h=1e-3"};
}

// w' = w(t - 1), history 1, closed form up to t = 3.
double steps_exact(double t) {
    if (t <= 1.0) return 1.0 + t;
    if (t <= 2.0) return 1.0 + t + (t - 1.0) * (t - 1.0) / 2.0;
    const double u = t - 2.0;
    return 1.0 + t + (t - 1.0) * (t - 1.0) / 2.0 + u * u * u / 6.0;
}

double steps_error(double horizon, double step) {
    const auto p = entry("method_of_steps", {{"horizon", horizon}}).problem;
    const auto [traj, report] = solve_mild(p, {step}, {});
    double err = 0.0;
    for (std::size_t k = 0; k < traj.block_count(); ++k)
        for (std::size_t i = 0; i < traj.block(k).size(); ++i)
            err = std::max(err, std::abs(traj.block(k).values[i](0) - steps_exact(traj.block(k).times[i])));
    return err;
}

Outcome method_of_steps() {
    // On [0, 2] the trapezoid rule integrates the piecewise-linear delayed
    // term exactly, so the error sits at roundoff and the halving ratio is
    // not informative there; the order is read off [0, 3], where the delayed
    // term is quadratic.
    constexpr double kRoundoff = 1e-12;
    const double e1 = steps_error(2.0, 1e-3);
    const double e2 = steps_error(2.0, 5e-4);
    const double f1 = steps_error(3.0, 2e-3);
    const double f2 = steps_error(3.0, 1e-3);
    const double ratio = e1 / e2;
    const double order_ratio = f1 / f2;
    const bool halving_ok = ratio >= 3.0 || e2 <= kRoundoff;
    const bool pass = e1 <= 1e-5 && halving_ok && order_ratio >= 3.0;
    return {pass, "b=2 err(h)=" + fmt("%.3g", e1) + " err(h/2)=" + fmt("%.3g", e2) + " ratio=" + fmt("%.3g", ratio) +
                      (e2 <= kRoundoff ? " (exact to roundoff)" : "") + "; b=3 err(h)=" + fmt("%.3g", f1) +
                      " ratio=" + fmt("%.4g", order_ratio)};
}

Outcome semigroup() {
    CounterRng rng(4, 0);
    double worst_rel = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        Matrix v(4, 4);
        for (Index i = 0; i < 4; ++i)
            for (Index j = 0; j < 4; ++j) v(i, j) = rng.uniform(-1.0, 1.0);
        v += 2.5 * Matrix::Identity(4, 4);  // keeps the eigenbasis well conditioned
        Vector lambda(4), x(4);
        for (Index i = 0; i < 4; ++i) lambda(i) = rng.uniform(-2.0, 2.0);
        for (Index i = 0; i < 4; ++i) x(i) = rng.uniform(-1.0, 1.0);
        const double t = rng.uniform(0.0, 1.0);
        const Matrix a = v * lambda.asDiagonal() * v.inverse();
        const Vector c = v.partialPivLu().solve(x);
        const Vector want = v * (lambda.array() * t).exp().matrix().cwiseProduct(c);
        worst_rel = std::max(worst_rel, sup_norm(evolve(a, t, x) - want) / sup_norm(want));
    }
    double worst_law = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        Matrix a(4, 4);
        for (Index i = 0; i < 4; ++i)
            for (Index j = 0; j < 4; ++j) a(i, j) = rng.uniform(-1.0, 1.0);
        a *= rng.uniform(0.0, 2.0) / induced_sup_norm(a);
        Vector x(4);
        for (Index i = 0; i < 4; ++i) x(i) = rng.uniform(-3.0, 3.0);
        const double s = rng.uniform(0.0, 1.0), t = rng.uniform(0.0, 1.0);
        const double d = sup_norm(evolve(a, s, evolve(a, t, x)) - evolve(a, s + t, x)) / (1.0 + sup_norm(x));
        worst_law = std::max(worst_law, d);
    }
    return {worst_rel <= 1e-9 && worst_law <= 1e-10,
            "spectral rel err " + fmt("%.3g", worst_rel) + ", semigroup law " + fmt("%.3g", worst_law)};
}

Outcome domination() {
    constexpr double step = 1e-3;
    const auto summary = run_campaign(100, 20240611, step);
    std::size_t impulses = 0;
    for (const auto& row : summary.rows) impulses += row.num_impulses;
    return {summary.passed && summary.rows.size() == 100,
            "max(u* - bound)=" + fmt("%.3g", summary.max_violation) + " tolerance " +
                fmt("%.3g", campaign_tolerance(step)) + ", " + std::to_string(impulses) + " impulses over 100 instances"};
}

Outcome gronwall() {
    CounterRng rng(31, 0);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const double a = rng.uniform(0.0, 1.0), c = rng.uniform(-a, a);
        const double w = rng.uniform(0.5, 8.0), ph = rng.uniform(0.0, 6.3);
        const double n0 = rng.uniform(0.5, 2.0), n1 = rng.uniform(0.0, 1.0), l = rng.uniform(0.1, 3.0);
        PachpatteInstance inst;
        inst.horizon = rng.uniform(0.5, 1.5);
        inst.f = [=](double t) { return a + c * std::sin(w * t + ph); };
        inst.n = [=](double t) { return n0 + n1 * (1.0 - std::exp(-l * t)); };
        // Impulses with beta = 0 leave only exp(Phi(t_k) - Phi(t_{k-1})), which must telescope.
        const long m = rng.integer(0, 2);
        for (long k = 1; k <= m; ++k) {
            inst.impulse_times.push_back(inst.horizon * static_cast<double>(k) / static_cast<double>(m + 1));
            inst.beta.push_back(0.0);
            inst.theta.push_back(0.0);
            inst.tau.push_back(0.0);
        }
        const PachpatteEvaluator ev(inst);
        for (int q = 0; q < 20; ++q) {
            const double t = q == 19 ? inst.horizon : rng.uniform(0.0, inst.horizon);
            const double integral = a * t + c / w * (std::cos(ph) - std::cos(w * t + ph));
            const double want = inst.n(t) * std::exp(integral);
            worst = std::max(worst, std::abs(ev.bound(t).value - want) / want);
        }
    }
    return {worst <= 1e-10, "worst relative gap " + fmt("%.3g", worst) + " over 20 f x 20 times"};
}

Outcome uniqueness() {
    constexpr double eps = 1e-10;
    double worst = 0.0;
    std::string detail;
    std::size_t checked = 0;
    for (const auto& e : build_catalog()) {
        const auto inst = e.instantiate();
        if (!certified(inst)) continue;
        PicardControl constant, ramp;
        constant.tolerance = ramp.tolerance = eps;
        ramp.initial = InitialIterate::ramp;
        const auto [a, ra] = solve_mild(inst.problem, {1e-3}, constant);
        const auto [b, rb] = solve_mild(inst.problem, {1e-3}, ramp);
        const double d = sigma_diff(a, b);
        worst = std::max(worst, d);
        detail += " " + e.name + "=" + fmt("%.2g", d);
        ++checked;
    }
    return {checked > 0 && worst <= 10.0 * eps, std::to_string(checked) + " problems;" + detail};
}

Outcome dependence() {
    // Coarser grid than the default keeps 150 solves inside the time budget;
    // the residual budget scales with it.
    const Discretization disc{2.5e-3};
    const PicardControl control{};
    CounterRng rng(77, 0);

    struct Base {
        ProblemInstance inst;
        SemigroupBound sg;
        PiecewiseTrajectory solution;
        double residual;
    };
    auto make = [&](const std::string& name) {
        auto inst = entry(name);
        const auto sg = bound_for(inst.problem);
        auto [traj, report] = solve_mild(inst.problem, disc, control);
        return Base{std::move(inst), sg, std::move(traj), report.final_residual};
    };
    const Base example = make("paper_example");
    const Base two_d = make("integral_impulse");
    if (!certified(example.inst) || !certified(two_d.inst)) return {false, "base problems fail the certificate"};

    auto offset = [&](Index n, double size) {
        Vector v(n);
        for (Index i = 0; i < n; ++i) v(i) = rng.uniform(-size, size);
        v(rng.integer(0, n - 1)) = std::copysign(size, rng.uniform(-1.0, 1.0));  // sup norm is exactly `size`
        return v;
    };

    std::size_t failures = 0, total = 0;
    double worst_ratio = 0.0;
    auto record = [&](const DependenceReport& r) {
        ++total;
        if (!r.dominated) ++failures;
        worst_ratio = std::max(worst_ratio, r.empirical / (r.theoretical + r.budget));
    };

    for (int i = 0; i < 50; ++i) {
        const Base& base = i % 2 ? two_d : example;
        const double size = rng.uniform(0.01, 0.2);
        PerturbationGaps gaps;
        gaps.history = size;
        const auto b = shift_history(base.inst.problem, offset(base.inst.problem.dimension, size));
        record(check_dependence(DependenceKind::initial, base.solution, base.residual, base.inst.problem, b,
                                base.inst.lipschitz, base.sg, gaps, disc, control));
    }
    const double rho_a = 1.0, mu_a = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double rho_b = rho_a + rng.uniform(-0.2, 0.2);
        const double mu_b = mu_a + rng.uniform(-0.3, 0.3);
        const auto b = entry("integral_impulse", {{"rho", rho_b}, {"mu", mu_b}}).problem;
        PerturbationGaps gaps;
        gaps.rho = std::abs(rho_b - rho_a);
        gaps.mu = std::abs(mu_b - mu_a);
        record(check_dependence(DependenceKind::parameter, two_d.solution, two_d.residual, two_d.inst.problem, b,
                                two_d.inst.lipschitz, two_d.sg, gaps, disc, control));
    }
    for (int i = 0; i < 50; ++i) {
        const Base& base = i % 2 ? two_d : example;
        const auto& pa = base.inst.problem;
        PerturbationGaps gaps;
        gaps.field = rng.uniform(0.0, 0.1);
        gaps.history = rng.uniform(0.0, 0.1);
        std::vector<Vector> jumps;
        for (std::size_t k = 0; k < pa.impulse_count(); ++k) {
            gaps.jumps.push_back(rng.uniform(0.0, 0.1));
            jumps.push_back(offset(pa.dimension, gaps.jumps.back()));
        }
        auto b = shift_field(pa, offset(pa.dimension, gaps.field));
        b = shift_history(b, offset(pa.dimension, gaps.history));
        b = shift_jumps(b, jumps);
        record(check_dependence(DependenceKind::function, base.solution, base.residual, pa, b, base.inst.lipschitz,
                                base.sg, gaps, disc, control));
    }

    const double one = dependence_initial_bound(two_d.inst.problem, two_d.inst.lipschitz, two_d.sg, 0.05);
    const double two = dependence_initial_bound(two_d.inst.problem, two_d.inst.lipschitz, two_d.sg, 0.1);
    const double linear = std::abs(two / one - 2.0);
    return {failures == 0 && total == 150 && linear <= 1e-12,
            std::to_string(total - failures) + "/" + std::to_string(total) + " dominated, max empirical/(bound+budget)=" +
                fmt("%.3g", worst_ratio) + ", linearity |ratio-2|=" + fmt("%.2g", linear)};
}

Outcome apriori() {
    std::string detail;
    bool pass = true;
    std::size_t checked = 0;
    for (const auto& e : build_catalog()) {
        const auto inst = e.instantiate();
        if (!certified(inst)) continue;
        const auto sg = bound_for(inst.problem);
        const auto r = apriori_bound(inst.problem, inst.lipschitz, sg, {1e-3});
        const auto [traj, report] = solve_mild(inst.problem, {1e-3}, {});
        const double s = traj.sigma_norm();
        pass = pass && s <= r.K;
        detail += " " + e.name + " " + fmt("%.4g", s) + "<=" + fmt("%.4g", r.K);
        ++checked;
    }
    return {pass && checked > 0, std::to_string(checked) + " problems;" + detail};
}

Outcome residuals() {
    constexpr double eps = 1e-10;
    constexpr double h = 2e-3;
    bool pass = true;
    std::string detail;
    for (const auto& e : build_catalog()) {
        const auto p = e.instantiate().problem;
        PicardControl control;
        control.tolerance = eps;
        const auto [a, ra] = solve_mild(p, {h}, control);
        const auto [b, rb] = solve_mild(p, {h / 2}, control);
        // C from the coarse solve; the fine one must sit under C (h/2)^2 with
        // an order allowance of 2^0.1 (observed order >= 1.9).
        const double c = ra.final_residual / (h * h);
        const double limit = c * (h / 2) * (h / 2) * std::pow(2.0, 0.1) + 10.0 * eps;
        pass = pass && rb.final_residual <= limit;
        detail += " " + e.name + " C=" + fmt("%.3g", c) + " order=" + fmt("%.3g", std::log2(ra.final_residual / rb.final_residual));
    }

    // Corrupt the method-of-steps solution by +0.1 on [1, 2].
    const auto ms = entry("method_of_steps").problem;
    const auto [traj, report] = solve_mild(ms, {1e-3}, {});
    auto bad = traj.block(0);
    for (std::size_t i = 0; i < bad.size(); ++i)
        if (bad.times[i] >= 1.0) bad.values[i](0) += 0.1;
    const double corrupted = mild_residual(ms, PiecewiseTrajectory({}, traj.history(), {bad}), {1e-3});
    pass = pass && corrupted >= 0.05;
    return {pass, "corrupted residual " + fmt("%.3g", corrupted) + ";" + detail};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        double budget_seconds;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, 1.0, certificate},   {2, 10.0, example_jump}, {3, 10.0, method_of_steps}, {4, 5.0, semigroup},
        {5, 60.0, domination},   {6, 60.0, gronwall},     {7, 30.0, uniqueness},       {8, 300.0, dependence},
        {9, 30.0, apriori},      {10, 600.0, residuals},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs <= c.budget_seconds;
        const bool pass = o.pass && in_time;
        if (!pass) ++failed;
        std::cout << "criterion " << c.id << ": " << (pass ? "PASS" : "FAIL") << " (" << o.detail << ") ["
                  << fmt("%.2f", secs) << " s" << (in_time ? "" : ", over the " + fmt("%.0f", c.budget_seconds) + " s budget")
                  << "]" << std::endl;
    }
    fs::remove_all(scratch_dir());
    return failed == 0 ? 0 : 1;
}
