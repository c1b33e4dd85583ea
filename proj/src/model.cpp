#include "idie/model.hpp"

#include "idie/grid.hpp"

#include <algorithm>
#include <cmath>

namespace idie {

namespace {

double max_increment(const HistoryFn& history, double r, std::size_t n) {
    double sup = 0.0;
    Vector prev = history(-r);
    for (std::size_t i = 1; i <= n; ++i) {
        const double t = i == n ? 0.0 : -r + r * static_cast<double>(i) / static_cast<double>(n);
        Vector cur = history(t);
        sup = std::max(sup, sup_norm(cur - prev));
        prev = std::move(cur);
    }
    return sup;
}

}  // namespace

std::vector<Violation> validate(const ImpulsiveProblem& p, std::size_t samples) {
    std::vector<Violation> out;
    const std::size_t m = p.impulse_times.size();

    if (p.dimension <= 0) out.push_back({"dimension must be positive"});
    if (p.generator.rows() != p.dimension || p.generator.cols() != p.dimension)
        out.push_back({"generator must be an n x n matrix"});
    if (!(p.delay > 0.0)) out.push_back({"delay must be positive"});
    if (!(p.horizon > 0.0)) out.push_back({"horizon must be positive"});
    for (double lag : p.lags)
        if (!(lag > 0.0 && lag <= p.delay)) out.push_back({"read lags must lie in (0, r]"});
    if (!p.field) out.push_back({"field V is not set"});
    if (!p.kernel) out.push_back({"kernel U is not set"});
    if (!p.window_integrand) out.push_back({"window integrand G is not set"});
    if (!p.history) out.push_back({"history is not set"});
    if (p.jump_maps.size() != m) out.push_back({"one jump map per impulse time is required"});
    if (p.window_theta.size() != m || p.window_tau.size() != m)
        out.push_back({"window offsets theta/tau need one entry per impulse time"});

    for (std::size_t k = 0; k < m; ++k) {
        const long idx = static_cast<long>(k) + 1;
        const double prev = k == 0 ? 0.0 : p.impulse_times[k - 1];
        if (!(p.impulse_times[k] > prev)) out.push_back({"impulse times must be strictly increasing and positive", idx});
        if (!(p.impulse_times[k] < p.horizon)) out.push_back({"impulse time must lie before the horizon", idx});
        if (k < p.window_theta.size() && k < p.window_tau.size()) {
            const double th = p.window_theta[k];
            const double ta = p.window_tau[k];
            if (!(th >= 0.0)) out.push_back({"theta_k must be nonnegative", idx});
            if (!(th <= ta)) out.push_back({"theta_k must not exceed tau_k", idx});
            if (!(ta <= p.impulse_times[k] - prev)) out.push_back({"tau_k must not exceed t_k - t_{k-1}", idx});
        }
    }
    if (!out.empty()) return out;

    // Shape checks on zero inputs.
    const Vector zero = Vector::Zero(p.dimension);
    const auto flat = HistorySegment::constant(zero, p.delay);
    auto check_size = [&](const char* what, auto&& call, long idx = -1) {
        try {
            if (call().size() != p.dimension) out.push_back({std::string(what) + " returns a vector of the wrong length", idx});
        } catch (const std::exception& e) {
            out.push_back({std::string(what) + " threw: " + e.what(), idx});
        }
    };
    check_size("history", [&] { return p.history(0.0); });
    check_size("field V", [&] { return p.field(0.0, flat, zero); });
    check_size("kernel U", [&] { return p.kernel(0.0, 0.0, flat); });
    check_size("window integrand G", [&] { return p.window_integrand(0.0, flat); });
    for (std::size_t k = 0; k < m; ++k)
        check_size("jump map", [&] { return p.jump_maps[k](zero); }, static_cast<long>(k) + 1);
    if (!out.empty()) return out;

    // Sampled continuity: a genuine jump keeps its size under refinement.
    const std::size_t coarse = std::max<std::size_t>(samples, 8);
    const double d_coarse = max_increment(p.history, p.delay, coarse);
    const double d_fine = max_increment(p.history, p.delay, 4 * coarse);
    if (d_fine > 1e-8 && d_fine > 0.5 * d_coarse) out.push_back({"history is not continuous on [-r, 0]"});
    return out;
}

std::vector<Violation> validate(const LipschitzData& lip, std::size_t m, double horizon, std::size_t samples) {
    std::vector<Violation> out;
    auto scalar = [&](double v, const char* name) {
        if (!(v >= 0.0)) out.push_back({std::string(name) + " must be nonnegative"});
    };
    scalar(lip.window_lipschitz, "L_G");
    scalar(lip.field_parameter_sensitivity, "Omega_1");
    scalar(lip.window_parameter_sensitivity, "Omega_2");
    scalar(lip.window_lipschitz_tilde, "L_G tilde");
    scalar(lip.field_deviation, "P");
    scalar(lip.history_deviation, "J");
    if (lip.jump_lipschitz.size() != m) out.push_back({"D_k needs one entry per impulse"});
    if (!lip.jump_deviation.empty() && lip.jump_deviation.size() != m)
        out.push_back({"N_k needs one entry per impulse (or none)"});
    for (std::size_t k = 0; k < lip.jump_lipschitz.size(); ++k)
        if (!(lip.jump_lipschitz[k] >= 0.0)) out.push_back({"D_k must be nonnegative", static_cast<long>(k) + 1});
    for (std::size_t k = 0; k < lip.jump_deviation.size(); ++k)
        if (!(lip.jump_deviation[k] >= 0.0)) out.push_back({"N_k must be nonnegative", static_cast<long>(k) + 1});
    auto modulus = [&](const ScalarFn& fn, const char* name) {
        if (!fn) {
            out.push_back({std::string(name) + " is not set"});
            return;
        }
        for (std::size_t i = 0; i <= samples; ++i) {
            const double t = horizon * static_cast<double>(i) / static_cast<double>(samples);
            if (!(fn(t) >= 0.0)) {
                out.push_back({std::string(name) + " must be nonnegative on [0, b]"});
                return;
            }
        }
    };
    modulus(lip.field_lipschitz, "N_V");
    modulus(lip.kernel_lipschitz, "N_U");
    modulus(lip.field_lipschitz_tilde, "N_V tilde");
    return out;
}

TrajectoryBlock sample_history(const ImpulsiveProblem& p, double step) {
    const std::size_t n = interval_count(p.delay, step);
    TrajectoryBlock block;
    block.times.resize(n + 1);
    block.values.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        const double t = i == 0 ? -p.delay : (i == n ? 0.0 : -p.delay + p.delay * static_cast<double>(i) / static_cast<double>(n));
        block.times[i] = t;
        block.values[i] = p.history(t);
    }
    return block;
}

double history_norm(const ImpulsiveProblem& p, std::size_t samples) {
    double sup = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const double t = i + 1 == samples ? 0.0 : -p.delay + p.delay * static_cast<double>(i) / static_cast<double>(samples - 1);
        sup = std::max(sup, sup_norm(p.history(t)));
    }
    return sup;
}

}  // namespace idie
