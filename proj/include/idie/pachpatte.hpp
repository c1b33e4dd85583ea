#pragma once

#include "idie/model.hpp"

#include <cstdint>
#include <vector>

namespace idie {

/// Data of the impulsive Pachpatte inequality
///
///   u(t) <= n(t) + int_0^t f u + int_0^t f(s) int_0^s g u + sum_{0<t_k<t} beta_k int_{t_k-tau_k}^{t_k-theta_k} u
///
/// with n positive nondecreasing and f, g >= 0.
struct PachpatteInstance {
    ScalarFn n = [](double) { return 1.0; };
    ScalarFn f = [](double) { return 0.0; };
    ScalarFn g = [](double) { return 0.0; };
    std::vector<double> impulse_times;
    std::vector<double> beta;
    std::vector<double> theta;
    std::vector<double> tau;
    double horizon = 1.0;

    std::size_t impulse_count() const { return impulse_times.size(); }
    double window_begin(std::size_t k) const { return impulse_times.at(k) - tau.at(k); }
    double window_end(std::size_t k) const { return impulse_times.at(k) - theta.at(k); }
};

std::vector<Violation> validate(const PachpatteInstance& inst, std::size_t samples = 256);

struct BoundReport {
    std::vector<double> Ck;   // one per impulse, one-based in the formula
    long alpha_index = 0;     // number of impulse times strictly before t; t_alpha = 0 when 0
    double value = 0.0;
};

/// Panels of the aligned grid used for every bound integral.
inline constexpr std::size_t kBoundPanels = 2048;

/// Precomputed Phi(t) = int_0^t f(s) [1 + int_0^s g] ds on an aligned grid.
/// Integrals use 5-point Gauss-Legendre on each panel.
class PachpatteEvaluator {
public:
    explicit PachpatteEvaluator(PachpatteInstance inst, std::size_t panels = kBoundPanels);

    const PachpatteInstance& instance() const { return inst_; }

    double g_integral(double t) const;  // int_0^t g
    double phi(double t) const;         // f(t) [1 + int_0^t g]
    double Phi(double t) const;         // int_0^t phi

    /// C_k for one-based k.
    double Ck(std::size_t k) const { return ck_.at(k - 1); }
    const std::vector<double>& all_Ck() const { return ck_; }

    /// n(t) prod_{t_k < t} C_k exp(Phi(t) - Phi(t_alpha)).
    BoundReport bound(double t) const;

private:
    double compute_Ck(std::size_t k) const;
    std::size_t panel_of(double t) const;

    PachpatteInstance inst_;
    std::vector<double> nodes_;
    std::vector<double> g_cum_;
    std::vector<double> phi_cum_;
    std::vector<double> ck_;
};

/// Number of impulse times strictly below t.
long alpha_index(const std::vector<double>& impulse_times, double t);

double compute_Ck(const PachpatteInstance& inst, std::size_t k, std::size_t panels = kBoundPanels);
BoundReport pachpatte_bound(const PachpatteInstance& inst, double t, std::size_t panels = kBoundPanels);

/// Uniform pieces of spacing <= step on [0, T] with t_k and window endpoints as nodes.
std::vector<double> pachpatte_grid(const PachpatteInstance& inst, double step);

struct MaximalSolution {
    std::vector<double> times;
    std::vector<double> values;        // u*(t_i), left-continuous
    std::vector<double> right_values;  // u*(t_i^+); differs at impulse nodes
    std::size_t sweeps = 0;
    double last_change = 0.0;
};

/// Discrete solution of the hypothesis taken with equality: trapezoid sums
/// solved node by node (the relation is implicit only through the diagonal
/// weight), then corrective sweeps of the full relation until successive
/// sweeps differ by <= 1e-12 relative. Throws DivergenceError on overflow,
/// a nonpositive diagonal, or more than 10^6 sweeps.
MaximalSolution maximal_solution(const PachpatteInstance& inst, const std::vector<double>& grid);

// Randomized domination campaign.

struct CampaignRow {
    std::size_t instance_id = 0;
    double t_max_violation = 0.0;
    double max_violation = 0.0;  // max over the grid of u* - bound; passes when <= tolerance
    std::size_t num_impulses = 0;
    double bound_at_horizon = 0.0;
    std::vector<double> Ck;
};

struct CampaignSummary {
    std::vector<CampaignRow> rows;
    double max_violation = 0.0;
    bool passed = true;
};

/// Tolerance of the campaign check: 1e-8 + 10 h^2.
double campaign_tolerance(double step);

/// Instance `id` drawn from stream `id` of the counter generator under `seed`:
/// horizon in [0.5, 1.5], up to 3 impulses, beta_k in [0, 2],
/// f, g = a + c sin(w t + p) with 0 <= |c| <= a <= 1, n = n0 + n1 (1 - e^{-l t}).
PachpatteInstance random_instance(std::uint64_t seed, std::uint64_t id);

CampaignSummary run_campaign(std::size_t samples, std::uint64_t seed, double step = 1e-3);

}  // namespace idie
