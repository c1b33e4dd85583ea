#pragma once

#include "idie/trajectory.hpp"
#include "idie/types.hpp"

#include <functional>
#include <string>
#include <vector>

namespace idie {

/// Right-hand side V(t, w_t, z) where z is the Volterra integral.
using FieldFn = std::function<Vector(double t, const HistorySegment& w_t, const Vector& z)>;
/// Volterra kernel U(t, s, w_s).
using KernelFn = std::function<Vector(double t, double s, const HistorySegment& w_s)>;
/// Jump integrand G(t, w_t).
using WindowFn = std::function<Vector(double t, const HistorySegment& w_t)>;
/// Jump map I_k.
using JumpFn = std::function<Vector(const Vector& x)>;
/// Initial history on [-r, 0].
using HistoryFn = std::function<Vector(double t)>;
/// Nonnegative scalar function of time (Lipschitz moduli).
using ScalarFn = std::function<double(double t)>;

/// One instance of
///
///     w'(t) = A w(t) + V(t, w_t, int_0^t U(t, s, w_s) ds),   t in [0, b], t != t_k
///     w(t)  = history(t),                                   t in [-r, 0]
///     Delta w(t_k) = I_k( int_{t_k - tau_k}^{t_k - theta_k} G(s, w_s) ds )
///
/// on R^n with the sup norm. Callables must be pure.
struct ImpulsiveProblem {
    Index dimension = 1;
    Matrix generator;
    FieldFn field;
    KernelFn kernel;
    WindowFn window_integrand;
    std::vector<JumpFn> jump_maps;
    std::vector<double> impulse_times;
    std::vector<double> window_theta;
    std::vector<double> window_tau;
    double delay = 1.0;
    /// Offsets ell in (0, r] at which the callables read w(t - ell). A jump at
    /// t_k makes the integrands jump at t_k + ell, so those times become grid
    /// nodes. Empty means {delay}.
    std::vector<double> lags;
    HistoryFn history;
    double horizon = 1.0;

    std::size_t impulse_count() const { return impulse_times.size(); }
    /// [t_k - tau_k, t_k - theta_k] for zero-based impulse index k.
    double window_begin(std::size_t k) const { return impulse_times.at(k) - window_tau.at(k); }
    double window_end(std::size_t k) const { return impulse_times.at(k) - window_theta.at(k); }
    std::vector<double> read_lags() const { return lags.empty() ? std::vector<double>{delay} : lags; }
    /// t_k with t_0 = 0 and t_{m+1} = b; `i` runs over 0..m+1.
    double breakpoint(std::size_t i) const {
        if (i == 0) return 0.0;
        if (i > impulse_times.size()) return horizon;
        return impulse_times[i - 1];
    }
};

/// Lipschitz moduli and perturbation sizes feeding the a-priori and
/// dependence estimates. Parameter-sensitivity factors are already folded
/// into field_lipschitz_tilde / window_lipschitz_tilde.
struct LipschitzData {
    ScalarFn field_lipschitz = [](double) { return 0.0; };         // N_V
    ScalarFn kernel_lipschitz = [](double) { return 0.0; };        // N_U
    double window_lipschitz = 0.0;                                 // L_G
    std::vector<double> jump_lipschitz;                            // D_k
    double field_parameter_sensitivity = 0.0;                      // Omega_1
    double window_parameter_sensitivity = 0.0;                     // Omega_2
    ScalarFn field_lipschitz_tilde = [](double) { return 0.0; };   // N_V tilde
    double window_lipschitz_tilde = 0.0;                           // L_G tilde
    double field_deviation = 0.0;                                  // P
    double history_deviation = 0.0;                                // J
    std::vector<double> jump_deviation;                            // N_k
};

struct Violation {
    std::string what;
    long index = -1;  // offending (one-based) impulse index, -1 when not applicable
};

/// Every broken standing assumption of the problem; empty means valid.
std::vector<Violation> validate(const ImpulsiveProblem& problem, std::size_t samples = 64);

/// Negative constants, wrong list lengths, or negative moduli on [0, b].
std::vector<Violation> validate(const LipschitzData& lip, std::size_t impulse_count, double horizon,
                                std::size_t samples = 64);

/// Samples the history on a uniform grid of [-r, 0] with spacing at most `step`.
TrajectoryBlock sample_history(const ImpulsiveProblem& problem, double step);

/// sup of |history| over a fine grid of [-r, 0].
double history_norm(const ImpulsiveProblem& problem, std::size_t samples = 2049);

}  // namespace idie
