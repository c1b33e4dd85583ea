#pragma once

#include "idie/types.hpp"

#include <span>
#include <vector>

namespace idie {

/// Nodes and values of one continuous piece of a trajectory.
///
/// Values between nodes are linearly interpolated; queries outside
/// [front(), back()] are clamped to the nearest endpoint.
struct TrajectoryBlock {
    std::vector<double> times;
    std::vector<Vector> values;

    double front() const { return times.front(); }
    double back() const { return times.back(); }
    std::size_t size() const { return times.size(); }

    Vector interpolate(double t) const;
};

/// Anything that can be read as a left-continuous path with right limits.
///
/// Both a finished PiecewiseTrajectory and the solver's partially built
/// iterate implement this, so history segments can view either one.
class StateSource {
public:
    virtual ~StateSource() = default;

    /// Left-continuous value w(t); at an impulse time this is w(t_k^-).
    virtual Vector left(double t) const = 0;
    /// Right limit w(t^+).
    virtual Vector right(double t) const = 0;
    /// Appends every stored node time in [a, b] (duplicates allowed).
    virtual void append_nodes(double a, double b, std::vector<double>& out) const = 0;
};

/// The delayed state w_t(theta) = w(t + theta), theta in [-r, 0].
///
/// Either owns a sampled copy (theta grid + values) or is a lightweight view
/// onto a StateSource anchored at t. Views are what the solver hands to the
/// problem callables; they must not outlive the source they point into.
class HistorySegment {
public:
    HistorySegment(std::vector<double> theta_grid, std::vector<Vector> values);

    /// View of `source` anchored at `anchor`. With `right_limit` set every read
    /// returns w((anchor + theta)^+), i.e. the limit of w_s as s decreases to
    /// the anchor; otherwise reads are left-continuous.
    HistorySegment(const StateSource& source, double anchor, double delay, bool right_limit = false) noexcept
        : source_(&source), anchor_(anchor), delay_(delay), right_limit_(right_limit) {}

    static HistorySegment constant(const Vector& value, double delay);

    Vector operator()(double theta) const;

    double delay() const { return delay_; }
    bool is_view() const { return source_ != nullptr; }

    /// sup over samples of the sup norm (the C([-r,0]) norm on the node grid).
    double norm() const;

    /// Sampled copy; a no-op copy for already sampled segments.
    HistorySegment materialize() const;

    /// Sample points; only valid for sampled segments.
    const std::vector<double>& theta_grid() const;
    const std::vector<Vector>& values() const;

private:
    TrajectoryBlock samples_;
    const StateSource* source_ = nullptr;
    double anchor_ = 0.0;
    double delay_ = 0.0;
    bool right_limit_ = false;
};

namespace detail {

// blocks[0] is the history block on [-r, 0]; blocks[1..] are consecutive
// solution blocks sharing endpoints.
Vector left_value(std::span<const TrajectoryBlock> blocks, double t);
Vector right_value(std::span<const TrajectoryBlock> blocks, double t);
void collect_nodes(std::span<const TrajectoryBlock> blocks, double a, double b, std::vector<double>& out);

}  // namespace detail

/// Left-continuous piecewise-continuous function on [-r, b].
///
/// Holds one history block on [-r, 0] followed by m + 1 blocks on
/// [t_k, t_{k+1}] (t_0 = 0, t_{m+1} = b). The last node of block k - 1 is
/// w(t_k) = w(t_k^-); the first node of block k is the right limit w(t_k^+).
class PiecewiseTrajectory final : public StateSource {
public:
    /// Throws StructuralError when the blocks do not tile [-r, b] consistently.
    PiecewiseTrajectory(std::vector<double> impulse_times, TrajectoryBlock history, std::vector<TrajectoryBlock> blocks);

    Index dimension() const { return dimension_; }
    double delay() const { return -history().front(); }
    double horizon() const { return blocks_.back().back(); }
    const std::vector<double>& impulse_times() const { return impulse_times_; }
    std::size_t impulse_count() const { return impulse_times_.size(); }

    const TrajectoryBlock& history() const { return blocks_.front(); }
    /// Solution block k on [t_k, t_{k+1}], k = 0..m.
    const TrajectoryBlock& block(std::size_t k) const { return blocks_.at(k + 1); }
    std::size_t block_count() const { return blocks_.size() - 1; }
    /// History block followed by the solution blocks.
    std::span<const TrajectoryBlock> all_blocks() const { return blocks_; }

    /// w(t_k^+) for impulse index k = 0..m-1 (impulse t_{k+1} in one-based terms).
    const Vector& right_limit(std::size_t k) const { return blocks_.at(k + 2).values.front(); }
    /// w(t_k^+) - w(t_k^-).
    Vector jump(std::size_t k) const { return right_limit(k) - blocks_.at(k + 1).values.back(); }

    /// Left-continuous value; DomainError outside [-r, b].
    Vector eval(double t) const;
    /// Right limit; DomainError outside [-r, b).
    Vector eval_right(double t) const;

    /// w_t sampled on the native nodes of [t - r, t]; DomainError outside [0, b].
    HistorySegment history_segment(double t) const;

    /// Max over solution blocks of the sup norm of node values (history excluded).
    double sigma_norm() const;

    Vector left(double t) const override { return eval(t); }
    Vector right(double t) const override;
    void append_nodes(double a, double b, std::vector<double>& out) const override;

private:
    std::vector<double> impulse_times_;
    std::vector<TrajectoryBlock> blocks_;
    Index dimension_ = 0;
};

/// Sigma-norm of a - b on the union of both node grids, block by block.
/// Throws StructuralError unless dimension, horizon and impulse times match.
double sigma_diff(const PiecewiseTrajectory& a, const PiecewiseTrajectory& b);

/// Per-block sup of |a - b| (same grid union as sigma_diff).
std::vector<double> block_gaps(const PiecewiseTrajectory& a, const PiecewiseTrajectory& b);

}  // namespace idie
