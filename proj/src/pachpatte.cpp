#include "idie/pachpatte.hpp"

#include "idie/counter_rng.hpp"
#include "idie/grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace idie {

namespace {

constexpr std::array<double, 5> kGaussNodes = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                               0.9061798459386640};
constexpr std::array<double, 5> kGaussWeights = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                                 0.4786286704993665, 0.2369268850561891};

template <typename F>
double gauss(double a, double b, F&& fn) {
    if (b == a) return 0.0;
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t q = 0; q < kGaussNodes.size(); ++q) sum += kGaussWeights[q] * fn(mid + half * kGaussNodes[q]);
    return half * sum;
}

std::vector<double> breakpoints_of(const PachpatteInstance& inst) {
    std::vector<double> out;
    for (std::size_t k = 0; k < inst.impulse_count(); ++k) {
        out.push_back(inst.impulse_times[k]);
        out.push_back(inst.window_begin(k));
        out.push_back(inst.window_end(k));
    }
    return out;
}

}  // namespace

std::vector<Violation> validate(const PachpatteInstance& inst, std::size_t samples) {
    std::vector<Violation> out;
    const std::size_t m = inst.impulse_count();
    if (!(inst.horizon > 0.0)) out.push_back({"horizon must be positive"});
    if (!inst.n || !inst.f || !inst.g) out.push_back({"n, f and g must be set"});
    if (inst.beta.size() != m || inst.theta.size() != m || inst.tau.size() != m)
        out.push_back({"beta, theta and tau need one entry per impulse time"});
    if (!out.empty()) return out;
    for (std::size_t k = 0; k < m; ++k) {
        const long idx = static_cast<long>(k) + 1;
        const double prev = k == 0 ? 0.0 : inst.impulse_times[k - 1];
        if (!(inst.impulse_times[k] > prev)) out.push_back({"impulse times must be strictly increasing and positive", idx});
        if (!(inst.impulse_times[k] <= inst.horizon)) out.push_back({"impulse time beyond the horizon", idx});
        if (!(inst.beta[k] >= 0.0)) out.push_back({"beta_k must be nonnegative", idx});
        if (!(inst.theta[k] >= 0.0 && inst.theta[k] <= inst.tau[k]))
            out.push_back({"need 0 <= theta_k <= tau_k", idx});
        if (!(inst.tau[k] <= inst.impulse_times[k] - prev)) out.push_back({"tau_k must not exceed t_k - t_{k-1}", idx});
    }
    const std::size_t count = std::max<std::size_t>(samples, 2);
    double last_n = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const double t = inst.horizon * static_cast<double>(i) / static_cast<double>(count - 1);
        const double n = inst.n(t);
        if (!(n > 0.0)) {
            out.push_back({"n must be positive"});
            break;
        }
        if (i > 0 && n < last_n) {
            out.push_back({"n must be nondecreasing"});
            break;
        }
        last_n = n;
    }
    for (std::size_t i = 0; i < count; ++i) {
        const double t = inst.horizon * static_cast<double>(i) / static_cast<double>(count - 1);
        if (!(inst.f(t) >= 0.0) || !(inst.g(t) >= 0.0)) {
            out.push_back({"f and g must be nonnegative"});
            break;
        }
    }
    return out;
}

PachpatteEvaluator::PachpatteEvaluator(PachpatteInstance inst, std::size_t panels) : inst_(std::move(inst)) {
    if (const auto violations = validate(inst_); !violations.empty())
        throw StructuralError("invalid Pachpatte instance: " + violations.front().what);
    if (panels < 1) throw StructuralError("bound grid needs at least one panel");
    nodes_ = aligned_grid(0.0, inst_.horizon, breakpoints_of(inst_), inst_.horizon / static_cast<double>(panels));

    g_cum_.assign(nodes_.size(), 0.0);
    for (std::size_t j = 0; j + 1 < nodes_.size(); ++j)
        g_cum_[j + 1] = g_cum_[j] + gauss(nodes_[j], nodes_[j + 1], inst_.g);
    phi_cum_.assign(nodes_.size(), 0.0);
    for (std::size_t j = 0; j + 1 < nodes_.size(); ++j)
        phi_cum_[j + 1] = phi_cum_[j] + gauss(nodes_[j], nodes_[j + 1], [this](double s) { return phi(s); });

    ck_.resize(inst_.impulse_count());
    for (std::size_t k = 1; k <= ck_.size(); ++k) ck_[k - 1] = compute_Ck(k);
}

std::size_t PachpatteEvaluator::panel_of(double t) const {
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
    const auto j = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, it - nodes_.begin() - 1));
    return std::min(j, nodes_.size() - 2);
}

double PachpatteEvaluator::g_integral(double t) const {
    const std::size_t j = panel_of(t);
    return g_cum_[j] + gauss(nodes_[j], t, inst_.g);
}

double PachpatteEvaluator::phi(double t) const { return inst_.f(t) * (1.0 + g_integral(t)); }

double PachpatteEvaluator::Phi(double t) const {
    const std::size_t j = panel_of(t);
    return phi_cum_[j] + gauss(nodes_[j], t, [this](double s) { return phi(s); });
}

double PachpatteEvaluator::compute_Ck(std::size_t k) const {
    const double start = k == 1 ? 0.0 : inst_.impulse_times[k - 2];
    const double end = inst_.impulse_times[k - 1];
    const double phi_start = Phi(start);
    double window = 0.0;
    const double lo = inst_.window_begin(k - 1);
    const double hi = inst_.window_end(k - 1);
    if (hi > lo) {
        auto first = std::lower_bound(nodes_.begin(), nodes_.end(), lo);
        for (auto it = first; it + 1 != nodes_.end() && *it < hi; ++it)
            window += gauss(*it, *(it + 1), [&](double s) { return std::exp(Phi(s) - phi_start); });
    }
    return std::exp(Phi(end) - phi_start) + inst_.beta[k - 1] * window;
}

BoundReport PachpatteEvaluator::bound(double t) const {
    if (t < 0.0 || t > inst_.horizon) throw DomainError("Pachpatte bound queried outside [0, T]");
    BoundReport out;
    out.Ck = ck_;
    out.alpha_index = alpha_index(inst_.impulse_times, t);
    double product = 1.0;
    for (long k = 0; k < out.alpha_index; ++k) product *= ck_[static_cast<std::size_t>(k)];
    const double t_alpha = out.alpha_index == 0 ? 0.0 : inst_.impulse_times[static_cast<std::size_t>(out.alpha_index - 1)];
    out.value = inst_.n(t) * product * std::exp(Phi(t) - Phi(t_alpha));
    return out;
}

long alpha_index(const std::vector<double>& impulse_times, double t) {
    return static_cast<long>(std::lower_bound(impulse_times.begin(), impulse_times.end(), t) - impulse_times.begin());
}

double compute_Ck(const PachpatteInstance& inst, std::size_t k, std::size_t panels) {
    if (k < 1 || k > inst.impulse_count()) throw StructuralError("C_k index out of range");
    return PachpatteEvaluator(inst, panels).Ck(k);
}

BoundReport pachpatte_bound(const PachpatteInstance& inst, double t, std::size_t panels) {
    return PachpatteEvaluator(inst, panels).bound(t);
}

std::vector<double> pachpatte_grid(const PachpatteInstance& inst, double step) {
    return aligned_grid(0.0, inst.horizon, breakpoints_of(inst), step);
}

MaximalSolution maximal_solution(const PachpatteInstance& inst, const std::vector<double>& grid) {
    if (const auto violations = validate(inst); !violations.empty())
        throw StructuralError("invalid Pachpatte instance: " + violations.front().what);
    if (grid.size() < 2 || grid.front() != 0.0 || grid.back() != inst.horizon)
        throw StructuralError("oracle grid must run from 0 to the horizon");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw StructuralError("oracle grid must be strictly increasing");
    const std::size_t m = inst.impulse_count();
    auto index_of = [&](double t) {
        const auto it = std::lower_bound(grid.begin(), grid.end(), t);
        if (it == grid.end() || *it != t) throw StructuralError("oracle grid misses an impulse or window point");
        return static_cast<std::size_t>(it - grid.begin());
    };
    std::vector<std::size_t> at_impulse(m), win_lo(m), win_hi(m);
    std::vector<long> impulse_at(grid.size(), -1);
    for (std::size_t k = 0; k < m; ++k) {
        at_impulse[k] = index_of(inst.impulse_times[k]);
        win_lo[k] = index_of(inst.window_begin(k));
        win_hi[k] = index_of(inst.window_end(k));
        impulse_at[at_impulse[k]] = static_cast<long>(k);
    }

    const std::size_t count = grid.size();
    std::vector<double> n(count), f(count), g(count);
    for (std::size_t i = 0; i < count; ++i) {
        n[i] = inst.n(grid[i]);
        f[i] = inst.f(grid[i]);
        g[i] = inst.g(grid[i]);
    }

    MaximalSolution out;
    out.times = grid;
    auto& u = out.values;
    auto& ur = out.right_values;
    u.assign(count, 0.0);
    ur.assign(count, 0.0);

    // Window integral of u with right limits at the left end of each panel.
    auto window_sum = [&](std::size_t k, const std::vector<double>& left, const std::vector<double>& right) {
        double sum = 0.0;
        for (std::size_t j = win_lo[k]; j < win_hi[k]; ++j)
            sum += 0.5 * (grid[j + 1] - grid[j]) * (right[j] + left[j + 1]);
        return sum;
    };
    auto check = [](double v) {
        if (!std::isfinite(v)) throw DivergenceError("maximal solution overflowed");
    };

    // Forward substitution: the trapezoid relation is linear in u_i.
    double i1 = 0.0, i2 = 0.0, i3 = 0.0, jumps = 0.0;
    u[0] = ur[0] = n[0];
    for (std::size_t i = 1; i < count; ++i) {
        const double h = grid[i] - grid[i - 1];
        const double known = n[i] + i1 + 0.5 * h * f[i - 1] * ur[i - 1] + i3 + 0.5 * h * f[i - 1] * i2 +
                             0.5 * h * f[i] * (i2 + 0.5 * h * g[i - 1] * ur[i - 1]) + jumps;
        const double diag = 1.0 - 0.5 * h * f[i] - 0.25 * h * h * f[i] * g[i];
        if (!(diag > 0.0)) throw DivergenceError("oracle step too coarse for f, g");
        u[i] = known / diag;
        check(u[i]);
        i1 += 0.5 * h * (f[i - 1] * ur[i - 1] + f[i] * u[i]);
        const double i2_next = i2 + 0.5 * h * (g[i - 1] * ur[i - 1] + g[i] * u[i]);
        i3 += 0.5 * h * (f[i - 1] * i2 + f[i] * i2_next);
        i2 = i2_next;
        ur[i] = u[i];
        if (impulse_at[i] >= 0) {
            const auto k = static_cast<std::size_t>(impulse_at[i]);
            const double add = inst.beta[k] * window_sum(k, u, ur);
            jumps += add;
            ur[i] = u[i] + add;
            check(ur[i]);
        }
    }

    // Corrective sweeps of the full relation.
    std::vector<double> nu(count), nur(count);
    constexpr std::size_t kMaxSweeps = 1000000;
    for (;;) {
        double a1 = 0.0, a2 = 0.0, a3 = 0.0, s = 0.0;
        nu[0] = nur[0] = n[0];
        for (std::size_t i = 1; i < count; ++i) {
            const double h = grid[i] - grid[i - 1];
            a1 += 0.5 * h * (f[i - 1] * ur[i - 1] + f[i] * u[i]);
            const double a2_next = a2 + 0.5 * h * (g[i - 1] * ur[i - 1] + g[i] * u[i]);
            a3 += 0.5 * h * (f[i - 1] * a2 + f[i] * a2_next);
            a2 = a2_next;
            nu[i] = n[i] + a1 + a3 + s;
            nur[i] = nu[i];
            if (impulse_at[i] >= 0) {
                const auto k = static_cast<std::size_t>(impulse_at[i]);
                const double add = inst.beta[k] * window_sum(k, u, ur);
                s += add;
                nur[i] += add;
            }
        }
        double change = 0.0, scale = 1.0;
        for (std::size_t i = 0; i < count; ++i) {
            check(nu[i]);
            check(nur[i]);
            change = std::max({change, std::abs(nu[i] - u[i]), std::abs(nur[i] - ur[i])});
            scale = std::max(scale, std::abs(nur[i]));
        }
        u.swap(nu);
        ur.swap(nur);
        ++out.sweeps;
        out.last_change = change;
        if (change <= 1e-12 * scale) break;
        if (out.sweeps >= kMaxSweeps) throw DivergenceError("maximal solution sweeps did not settle");
    }
    return out;
}

double campaign_tolerance(double step) { return 1e-8 + 10.0 * step * step; }

PachpatteInstance random_instance(std::uint64_t seed, std::uint64_t id) {
    CounterRng rng(seed, id);
    PachpatteInstance inst;
    inst.horizon = rng.uniform(0.5, 1.5);

    auto smooth = [&rng]() -> ScalarFn {
        const double a = rng.uniform(0.0, 1.0);
        const double c = rng.uniform(-a, a);
        const double w = rng.uniform(0.5, 6.0);
        const double p = rng.uniform(0.0, 2.0 * std::numbers::pi);
        return [a, c, w, p](double t) { return a + c * std::sin(w * t + p); };
    };
    inst.f = smooth();
    inst.g = smooth();
    const double n0 = rng.uniform(0.5, 2.0);
    const double n1 = rng.uniform(0.0, 1.0);
    const double rate = rng.uniform(0.5, 3.0);
    inst.n = [n0, n1, rate](double t) { return n0 + n1 * (1.0 - std::exp(-rate * t)); };

    const auto m = static_cast<std::size_t>(rng.integer(0, 3));
    std::vector<double> weights(m + 1);
    double total = 0.0;
    for (auto& w : weights) total += (w = rng.uniform(0.5, 1.5));
    double acc = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        acc += weights[k];
        inst.impulse_times.push_back(inst.horizon * acc / total);
    }
    for (std::size_t k = 0; k < m; ++k) {
        const double prev = k == 0 ? 0.0 : inst.impulse_times[k - 1];
        const double tau = rng.uniform(0.0, 1.0) * (inst.impulse_times[k] - prev);
        inst.tau.push_back(tau);
        inst.theta.push_back(rng.uniform(0.0, 1.0) * tau);
        inst.beta.push_back(rng.uniform(0.0, 2.0));
    }
    return inst;
}

CampaignSummary run_campaign(std::size_t samples, std::uint64_t seed, double step) {
    CampaignSummary summary;
    summary.max_violation = -std::numeric_limits<double>::infinity();
    const double tol = campaign_tolerance(step);
    for (std::size_t id = 0; id < samples; ++id) {
        const PachpatteInstance inst = random_instance(seed, id);
        const PachpatteEvaluator eval(inst);
        const MaximalSolution oracle = maximal_solution(inst, pachpatte_grid(inst, step));
        CampaignRow row;
        row.instance_id = id;
        row.num_impulses = inst.impulse_count();
        row.max_violation = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < oracle.times.size(); ++i) {
            const double gap = oracle.values[i] - eval.bound(oracle.times[i]).value;
            if (gap > row.max_violation) {
                row.max_violation = gap;
                row.t_max_violation = oracle.times[i];
            }
        }
        row.bound_at_horizon = eval.bound(inst.horizon).value;
        row.Ck = eval.all_Ck();
        summary.max_violation = std::max(summary.max_violation, row.max_violation);
        if (row.max_violation > tol) summary.passed = false;
        summary.rows.push_back(std::move(row));
    }
    if (samples == 0) summary.max_violation = 0.0;
    return summary;
}

}  // namespace idie
