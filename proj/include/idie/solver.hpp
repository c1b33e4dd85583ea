#pragma once

#include "idie/model.hpp"
#include "idie/trajectory.hpp"

#include <span>
#include <utility>
#include <vector>

namespace idie {

enum class Quadrature { trapezoid };

struct Discretization {
    double step = 1e-3;
    Quadrature quadrature = Quadrature::trapezoid;
};

enum class InitialIterate {
    constant,  // w(t) = w(t_k^+) on the whole segment
    ramp,      // w(t) = w(t_k^+) + (t - t_k) * (1, ..., 1)
};

struct PicardControl {
    double tolerance = 1e-10;
    std::size_t max_iterations = 500;
    InitialIterate initial = InitialIterate::constant;
};

struct SolveReport {
    std::vector<std::size_t> iterations_per_segment;
    double final_residual = 0.0;
    /// Jump added at each impulse time, I_k(int G).
    std::vector<Vector> jumps;
};

/// Everything solved so far: history plus completed blocks, and the
/// post-jump value the next segment starts from.
class TrajectoryPrefix final : public StateSource {
public:
    TrajectoryPrefix(const ImpulsiveProblem& problem, const Discretization& disc);

    std::size_t completed_segments() const { return blocks_.size() - 1; }
    std::span<const TrajectoryBlock> blocks() const { return blocks_; }
    const Vector& start_value() const { return start_value_; }

    void append(TrajectoryBlock block);
    void set_start_value(Vector value) { start_value_ = std::move(value); }

    Vector left(double t) const override { return detail::left_value(blocks_, t); }
    Vector right(double t) const override { return detail::right_value(blocks_, t); }
    void append_nodes(double a, double b, std::vector<double>& out) const override {
        detail::collect_nodes(blocks_, a, b, out);
    }

private:
    std::vector<TrajectoryBlock> blocks_;
    Vector start_value_;
};

struct SegmentResult {
    TrajectoryBlock block;
    std::size_t iterations = 0;
    double last_gap = 0.0;
};

/// Times t_k + ell (ell a read lag) inside (0, b) where a jump of the state
/// makes the integrands jump; sorted, unique.
std::vector<double> integrand_breaks(const ImpulsiveProblem& problem);

/// Solver grid for segment k: [t_k, t_{k+1}] with the closing impulse's
/// window endpoints and the integrand breaks as exact nodes.
std::vector<double> segment_grid(const ImpulsiveProblem& problem, std::size_t k, double step);

/// int_0^t U(t, s, w_s) ds by the trapezoid rule on the trajectory's nodes.
Vector volterra_term(const ImpulsiveProblem& problem, const PiecewiseTrajectory& traj, double t);

/// int over [t_k - tau_k, t_k - theta_k] of G(s, w_s) ds; zero-based impulse index.
Vector window_integral(const ImpulsiveProblem& problem, const StateSource& path, std::size_t k,
                       std::span<const double> nodes);
Vector window_integral(const ImpulsiveProblem& problem, const PiecewiseTrajectory& traj, std::size_t k);

/// I_k(window_integral); the jump added at t_k.
Vector jump_value(const ImpulsiveProblem& problem, const PiecewiseTrajectory& traj, std::size_t k);

/// Picard iteration of the segment map
///   w(t) = T(t - t_k) w(t_k^+) + int_{t_k}^t T(t - s) V(s, w_s, int_0^s U(s, r, w_r) dr) ds
/// on [t_k, t_{k+1}], with k = prefix.completed_segments().
/// Throws ConvergenceError when max_iterations is reached.
SegmentResult solve_segment(const ImpulsiveProblem& problem, const TrajectoryPrefix& prefix, const Discretization& disc,
                            const PicardControl& control);

/// Mild solution on [-r, b], segment by segment with jumps applied at each t_k.
/// Throws StructuralError for an invalid problem and ConvergenceError on failure.
std::pair<PiecewiseTrajectory, SolveReport> solve_mild(const ImpulsiveProblem& problem, const Discretization& disc,
                                                       const PicardControl& control);

/// sup over a grid twice as fine as `disc` of the defect in the mild-solution
/// identity; at impulse times the right limit is checked as well.
double mild_residual(const ImpulsiveProblem& problem, const PiecewiseTrajectory& traj, const Discretization& disc);

}  // namespace idie
