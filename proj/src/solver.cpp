#include "idie/solver.hpp"

#include "idie/grid.hpp"
#include "idie/semigroup.hpp"

#include <algorithm>
#include <sstream>

namespace idie {

namespace {

/// Read-only path over a block list whose first entry is the history.
class BlockPath final : public StateSource {
public:
    explicit BlockPath(std::span<const TrajectoryBlock> blocks) : blocks_(blocks) {}

    Vector left(double t) const override { return detail::left_value(blocks_, t); }
    Vector right(double t) const override { return detail::right_value(blocks_, t); }
    void append_nodes(double a, double b, std::vector<double>& out) const override {
        detail::collect_nodes(blocks_, a, b, out);
    }

private:
    std::span<const TrajectoryBlock> blocks_;
};

bool is_break(const std::vector<double>& breaks, double t) {
    return std::binary_search(breaks.begin(), breaks.end(), t);
}

/// Composite trapezoid over one block piece. The integrand receives the node
/// and the history view there. Panels to the right of the first node and of
/// every break read right limits, so a jump of the integrand at a node costs
/// nothing.
template <typename F>
Vector trapezoid(std::span<const double> nodes, const StateSource& path, double delay,
                 const std::vector<double>& breaks, Index n, F&& integrand) {
    Vector sum = Vector::Zero(n);
    if (nodes.size() < 2) return sum;
    Vector from = integrand(nodes[0], HistorySegment(path, nodes[0], delay, true));
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        Vector to = integrand(nodes[i], HistorySegment(path, nodes[i], delay));
        sum += (0.5 * (nodes[i] - nodes[i - 1])) * (from + to);
        if (i + 1 == nodes.size()) break;
        from = is_break(breaks, nodes[i]) ? integrand(nodes[i], HistorySegment(path, nodes[i], delay, true))
                                          : std::move(to);
    }
    return sum;
}

/// {lo} + nodes strictly inside (lo, hi) + {hi}.
std::vector<double> piece_nodes(const std::vector<double>& times, double lo, double hi) {
    std::vector<double> out{lo};
    if (hi <= lo) return out;
    auto first = std::upper_bound(times.begin(), times.end(), lo);
    auto last = std::lower_bound(times.begin(), times.end(), hi);
    if (first < last) out.insert(out.end(), first, last);
    out.push_back(hi);
    return out;
}

void require_valid(const ImpulsiveProblem& problem) {
    const auto violations = validate(problem);
    if (violations.empty()) return;
    std::ostringstream msg;
    msg << "invalid problem:";
    for (const auto& v : violations) {
        msg << ' ' << v.what;
        if (v.index >= 0) msg << " (k=" << v.index << ')';
        msg << ';';
    }
    throw StructuralError(msg.str());
}

}  // namespace

TrajectoryPrefix::TrajectoryPrefix(const ImpulsiveProblem& problem, const Discretization& disc) {
    blocks_.push_back(sample_history(problem, disc.step));
    start_value_ = blocks_.front().values.back();
}

void TrajectoryPrefix::append(TrajectoryBlock block) {
    if (block.times.empty() || block.front() != blocks_.back().back())
        throw StructuralError("appended block must start where the prefix ends");
    blocks_.push_back(std::move(block));
}

std::vector<double> integrand_breaks(const ImpulsiveProblem& problem) {
    std::vector<double> out;
    for (double tk : problem.impulse_times)
        for (double lag : problem.read_lags())
            if (tk + lag < problem.horizon) out.push_back(tk + lag);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<double> segment_grid(const ImpulsiveProblem& problem, std::size_t k, double step) {
    if (k > problem.impulse_count()) throw StructuralError("segment index out of range");
    std::vector<double> inner = integrand_breaks(problem);
    if (k < problem.impulse_count()) {
        inner.push_back(problem.window_begin(k));
        inner.push_back(problem.window_end(k));
    }
    return aligned_grid(problem.breakpoint(k), problem.breakpoint(k + 1), std::move(inner), step);
}

Vector volterra_term(const ImpulsiveProblem& problem, const PiecewiseTrajectory& traj, double t) {
    if (t < 0.0 || t > traj.horizon()) throw DomainError("volterra_term at t outside [0, b]");
    Vector sum = Vector::Zero(problem.dimension);
    auto kernel = [&](double s, const HistorySegment& w) { return problem.kernel(t, s, w); };
    const auto breaks = integrand_breaks(problem);
    for (std::size_t k = 0; k < traj.block_count(); ++k) {
        const auto& block = traj.block(k);
        if (block.front() >= t) break;
        const auto nodes = piece_nodes(block.times, block.front(), std::min(block.back(), t));
        sum += trapezoid(nodes, traj, problem.delay, breaks, problem.dimension, kernel);
    }
    return sum;
}

Vector window_integral(const ImpulsiveProblem& problem, const StateSource& path, std::size_t k,
                       std::span<const double> nodes) {
    if (k >= problem.impulse_count()) throw StructuralError("impulse index out of range");
    if (problem.window_theta[k] == problem.window_tau[k]) return Vector::Zero(problem.dimension);
    return trapezoid(nodes, path, problem.delay, integrand_breaks(problem), problem.dimension,
                     [&](double s, const HistorySegment& w) { return problem.window_integrand(s, w); });
}

Vector window_integral(const ImpulsiveProblem& problem, const PiecewiseTrajectory& traj, std::size_t k) {
    if (k >= problem.impulse_count()) throw StructuralError("impulse index out of range");
    const auto nodes = piece_nodes(traj.block(k).times, problem.window_begin(k), problem.window_end(k));
    return window_integral(problem, traj, k, nodes);
}

Vector jump_value(const ImpulsiveProblem& problem, const PiecewiseTrajectory& traj, std::size_t k) {
    return problem.jump_maps.at(k)(window_integral(problem, traj, k));
}

SegmentResult solve_segment(const ImpulsiveProblem& problem, const TrajectoryPrefix& prefix, const Discretization& disc,
                            const PicardControl& control) {
    if (!(control.tolerance > 0.0) || control.max_iterations < 1)
        throw StructuralError("Picard control needs tolerance > 0 and max_iterations >= 1");
    const std::size_t k = prefix.completed_segments();
    const Index n = problem.dimension;
    const double delay = problem.delay;
    const double t_start = problem.breakpoint(k);
    const auto breaks = integrand_breaks(problem);

    std::vector<TrajectoryBlock> work(prefix.blocks().begin(), prefix.blocks().end());
    work.push_back({segment_grid(problem, k, disc.step), {}});
    const std::vector<double> nodes = work.back().times;
    const std::size_t count = nodes.size();
    const BlockPath path(work);
    const Vector& start = prefix.start_value();

    auto& iterate = work.back().values;
    iterate.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        iterate[i] = start;
        if (control.initial == InitialIterate::ramp) iterate[i].array() += nodes[i] - t_start;
    }

    // T(t - t_k) w(t_k^+) and the one-step propagators.
    std::vector<Vector> free_part(count);
    std::vector<Matrix> step_prop(count - 1);
    free_part[0] = start;
    for (std::size_t i = 1; i < count; ++i) free_part[i] = evolve(problem.generator, nodes[i] - t_start, start);
    for (std::size_t i = 0; i + 1 < count; ++i) step_prop[i] = propagator(problem.generator, nodes[i + 1] - nodes[i]);

    // Volterra contribution of the finished blocks; fixed during the iteration.
    std::vector<Vector> volterra_prefix(count, Vector::Zero(n));
    for (std::size_t i = 0; i < count; ++i) {
        auto kernel = [&](double s, const HistorySegment& w) { return problem.kernel(nodes[i], s, w); };
        for (std::size_t j = 1; j + 1 < work.size(); ++j)
            volterra_prefix[i] += trapezoid(work[j].times, path, delay, breaks, n, kernel);
    }

    // Field values seen from the left and from the right of each node; they
    // differ only at the block start and at breaks.
    std::vector<Vector> from_left(count);
    std::vector<Vector> from_right(count);
    std::vector<Vector> next(count);
    SegmentResult result;
    for (std::size_t it = 1; it <= control.max_iterations; ++it) {
        for (std::size_t i = 0; i < count; ++i) {
            auto kernel = [&](double s, const HistorySegment& w) { return problem.kernel(nodes[i], s, w); };
            const Vector z = volterra_prefix[i] +
                             trapezoid(std::span<const double>(nodes.data(), i + 1), path, delay, breaks, n, kernel);
            from_left[i] = problem.field(nodes[i], HistorySegment(path, nodes[i], delay), z);
            from_right[i] = (i == 0 || is_break(breaks, nodes[i]))
                                ? problem.field(nodes[i], HistorySegment(path, nodes[i], delay, true), z)
                                : from_left[i];
        }
        // int_{t_k}^{s_i} T(s_i - s) F(s) ds, one panel at a time.
        Vector duhamel = Vector::Zero(n);
        next[0] = start;
        for (std::size_t i = 0; i + 1 < count; ++i) {
            const double h = nodes[i + 1] - nodes[i];
            duhamel = step_prop[i] * (duhamel + (0.5 * h) * from_right[i]) + (0.5 * h) * from_left[i + 1];
            next[i + 1] = free_part[i + 1] + duhamel;
        }
        double gap = 0.0;
        for (std::size_t i = 0; i < count; ++i) gap = std::max(gap, sup_norm(next[i] - iterate[i]));
        iterate.swap(next);
        result.iterations = it;
        result.last_gap = gap;
        if (gap <= control.tolerance) {
            result.block = std::move(work.back());
            return result;
        }
    }
    throw ConvergenceError(k, result.iterations, result.last_gap);
}

std::pair<PiecewiseTrajectory, SolveReport> solve_mild(const ImpulsiveProblem& problem, const Discretization& disc,
                                                       const PicardControl& control) {
    require_valid(problem);
    if (!(disc.step > 0.0)) throw StructuralError("discretization step must be positive");
    const std::size_t m = problem.impulse_count();

    TrajectoryPrefix prefix(problem, disc);
    SolveReport report;
    for (std::size_t k = 0; k <= m; ++k) {
        SegmentResult segment = solve_segment(problem, prefix, disc, control);
        report.iterations_per_segment.push_back(segment.iterations);
        const Vector end_value = segment.block.values.back();
        std::vector<double> window_nodes;
        if (k < m) window_nodes = piece_nodes(segment.block.times, problem.window_begin(k), problem.window_end(k));
        prefix.append(std::move(segment.block));
        if (k < m) {
            const Vector jump = problem.jump_maps[k](window_integral(problem, prefix, k, window_nodes));
            report.jumps.push_back(jump);
            prefix.set_start_value(end_value + jump);
        }
    }

    const auto blocks = prefix.blocks();
    std::vector<TrajectoryBlock> solution(blocks.begin() + 1, blocks.end());
    PiecewiseTrajectory traj(problem.impulse_times, blocks.front(), std::move(solution));
    report.final_residual = mild_residual(problem, traj, disc);
    return {std::move(traj), std::move(report)};
}

double mild_residual(const ImpulsiveProblem& problem, const PiecewiseTrajectory& traj, const Discretization& disc) {
    const double fine = 0.5 * disc.step;
    const std::size_t m = problem.impulse_count();
    const Index n = problem.dimension;
    const double delay = problem.delay;
    const Vector initial = problem.history(0.0);
    const auto breaks = integrand_breaks(problem);

    std::vector<std::vector<double>> grids(m + 1);
    for (std::size_t k = 0; k <= m; ++k) grids[k] = segment_grid(problem, k, fine);

    std::vector<Vector> jump_terms;
    Vector duhamel = Vector::Zero(n);
    double residual = 0.0;
    for (std::size_t k = 0; k <= m; ++k) {
        const auto& nodes = grids[k];
        const std::size_t count = nodes.size();
        std::vector<Vector> from_left(count);
        std::vector<Vector> from_right(count);
        for (std::size_t i = 0; i < count; ++i) {
            auto kernel = [&](double s, const HistorySegment& w) { return problem.kernel(nodes[i], s, w); };
            Vector z = Vector::Zero(n);
            for (std::size_t j = 0; j < k; ++j) z += trapezoid(grids[j], traj, delay, breaks, n, kernel);
            z += trapezoid(std::span<const double>(nodes.data(), i + 1), traj, delay, breaks, n, kernel);
            from_left[i] = problem.field(nodes[i], HistorySegment(traj, nodes[i], delay), z);
            from_right[i] = (i == 0 || is_break(breaks, nodes[i]))
                                ? problem.field(nodes[i], HistorySegment(traj, nodes[i], delay, true), z)
                                : from_left[i];
        }
        for (std::size_t i = 0; i < count; ++i) {
            if (i > 0) {
                const double h = nodes[i] - nodes[i - 1];
                duhamel = propagator(problem.generator, h) * (duhamel + (0.5 * h) * from_right[i - 1]) +
                          (0.5 * h) * from_left[i];
            }
            Vector rhs = evolve(problem.generator, nodes[i], initial) + duhamel;
            for (std::size_t j = 0; j < jump_terms.size(); ++j)
                rhs += evolve(problem.generator, nodes[i] - problem.impulse_times[j], jump_terms[j]);
            const Vector w = (k > 0 && i == 0) ? traj.eval_right(nodes[i]) : traj.eval(nodes[i]);
            residual = std::max(residual, sup_norm(w - rhs));
        }
        if (k < m) {
            const auto window = piece_nodes(nodes, problem.window_begin(k), problem.window_end(k));
            jump_terms.push_back(problem.jump_maps[k](window_integral(problem, traj, k, window)));
        }
    }
    return residual;
}

}  // namespace idie
