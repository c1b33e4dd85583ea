#include "idie/trajectory.hpp"

#include <algorithm>
#include <cmath>

namespace idie {

Vector TrajectoryBlock::interpolate(double t) const {
    if (t <= times.front()) return values.front();
    if (t >= times.back()) return values.back();
    const auto upper = std::upper_bound(times.begin(), times.end(), t);
    const auto i = static_cast<std::size_t>(upper - times.begin()) - 1;
    if (times[i] == t) return values[i];
    const double w = (t - times[i]) / (times[i + 1] - times[i]);
    return values[i] + w * (values[i + 1] - values[i]);
}

HistorySegment::HistorySegment(std::vector<double> theta_grid, std::vector<Vector> values) {
    if (theta_grid.empty() || theta_grid.size() != values.size())
        throw StructuralError("history segment needs matching, non-empty theta grid and values");
    if (theta_grid.back() != 0.0)
        throw StructuralError("history segment theta grid must end at 0");
    for (std::size_t i = 1; i < theta_grid.size(); ++i)
        if (!(theta_grid[i] > theta_grid[i - 1]))
            throw StructuralError("history segment theta grid must be strictly increasing");
    delay_ = -theta_grid.front();
    samples_.times = std::move(theta_grid);
    samples_.values = std::move(values);
}

HistorySegment HistorySegment::constant(const Vector& value, double delay) {
    if (delay <= 0.0) return HistorySegment({0.0}, {value});
    return HistorySegment({-delay, 0.0}, {value, value});
}

Vector HistorySegment::operator()(double theta) const {
    if (theta > 0.0 || theta < -delay_ * (1.0 + 1e-12) - 1e-14)
        throw DomainError("history segment read at theta = " + std::to_string(theta) + " outside [-r, 0]");
    theta = std::max(theta, -delay_);
    if (source_ == nullptr) return samples_.interpolate(theta);
    return right_limit_ ? source_->right(anchor_ + theta) : source_->left(anchor_ + theta);
}

double HistorySegment::norm() const {
    if (source_ != nullptr) return materialize().norm();
    double sup = 0.0;
    for (const auto& v : samples_.values) sup = std::max(sup, sup_norm(v));
    return sup;
}

HistorySegment HistorySegment::materialize() const {
    if (source_ == nullptr) return *this;
    std::vector<double> nodes;
    source_->append_nodes(anchor_ - delay_, anchor_, nodes);
    nodes.push_back(anchor_ - delay_);
    nodes.push_back(anchor_);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    std::vector<double> theta;
    std::vector<Vector> values;
    theta.reserve(nodes.size());
    values.reserve(nodes.size());
    const double start = anchor_ - delay_;
    for (double tau : nodes) {
        if (tau < start) continue;
        // Endpoints map exactly onto -r and 0.
        const double th = tau == anchor_ ? 0.0 : (tau == start ? -delay_ : std::max(-delay_, tau - anchor_));
        if (!theta.empty() && !(th > theta.back())) continue;
        theta.push_back(th);
        values.push_back((*this)(th));
    }
    return HistorySegment(std::move(theta), std::move(values));
}

const std::vector<double>& HistorySegment::theta_grid() const {
    if (source_ != nullptr) throw StructuralError("theta_grid() on a history view; materialize() first");
    return samples_.times;
}

const std::vector<Vector>& HistorySegment::values() const {
    if (source_ != nullptr) throw StructuralError("values() on a history view; materialize() first");
    return samples_.values;
}

namespace detail {

Vector left_value(std::span<const TrajectoryBlock> blocks, double t) {
    if (t <= blocks[0].back()) return blocks[0].interpolate(t);
    for (std::size_t j = 1; j < blocks.size(); ++j)
        if (t <= blocks[j].back()) return blocks[j].interpolate(t);
    return blocks.back().values.back();
}

Vector right_value(std::span<const TrajectoryBlock> blocks, double t) {
    if (blocks.size() == 1 || t < blocks[1].front()) return blocks[0].interpolate(t);
    for (std::size_t j = 1; j < blocks.size(); ++j)
        if (t >= blocks[j].front() && t < blocks[j].back()) return blocks[j].interpolate(t);
    return left_value(blocks, t);
}

void collect_nodes(std::span<const TrajectoryBlock> blocks, double a, double b, std::vector<double>& out) {
    for (const auto& block : blocks) {
        if (block.back() < a || block.front() > b) continue;
        const auto lo = std::lower_bound(block.times.begin(), block.times.end(), a);
        const auto hi = std::upper_bound(block.times.begin(), block.times.end(), b);
        out.insert(out.end(), lo, hi);
    }
}

}  // namespace detail

namespace {

void check_block(const TrajectoryBlock& block, Index n, const char* what) {
    if (block.times.empty() || block.times.size() != block.values.size())
        throw StructuralError(std::string(what) + ": block needs matching, non-empty times and values");
    for (std::size_t i = 1; i < block.times.size(); ++i)
        if (!(block.times[i] > block.times[i - 1]))
            throw StructuralError(std::string(what) + ": node times must be strictly increasing");
    for (const auto& v : block.values)
        if (v.size() != n) throw StructuralError(std::string(what) + ": inconsistent state dimension");
}

}  // namespace

PiecewiseTrajectory::PiecewiseTrajectory(std::vector<double> impulse_times, TrajectoryBlock history,
                                         std::vector<TrajectoryBlock> blocks)
    : impulse_times_(std::move(impulse_times)) {
    if (blocks.size() != impulse_times_.size() + 1)
        throw StructuralError("trajectory needs exactly one block per inter-impulse interval");
    if (history.values.empty()) throw StructuralError("trajectory history block is empty");
    dimension_ = history.values.front().size();
    check_block(history, dimension_, "history");
    if (history.back() != 0.0 || !(history.front() < 0.0))
        throw StructuralError("history block must cover [-r, 0] with r > 0");
    for (const auto& block : blocks) check_block(block, dimension_, "solution");
    if (blocks.front().front() != 0.0) throw StructuralError("first solution block must start at 0");
    if (blocks.front().values.front() != history.values.back())
        throw StructuralError("solution must agree with the history at t = 0");
    for (std::size_t k = 0; k < impulse_times_.size(); ++k) {
        if (blocks[k].back() != impulse_times_[k] || blocks[k + 1].front() != impulse_times_[k])
            throw StructuralError("block boundaries must coincide with impulse times");
    }
    if (!(blocks.back().back() > 0.0)) throw StructuralError("horizon must be positive");
    blocks_.reserve(blocks.size() + 1);
    blocks_.push_back(std::move(history));
    for (auto& block : blocks) blocks_.push_back(std::move(block));
}

Vector PiecewiseTrajectory::eval(double t) const {
    if (t < -delay() || t > horizon()) throw DomainError("eval at t = " + std::to_string(t) + " outside [-r, b]");
    return detail::left_value(blocks_, t);
}

Vector PiecewiseTrajectory::eval_right(double t) const {
    if (t < -delay() || t >= horizon())
        throw DomainError("eval_right at t = " + std::to_string(t) + " outside [-r, b)");
    return detail::right_value(blocks_, t);
}

Vector PiecewiseTrajectory::right(double t) const {
    return t >= horizon() ? eval(t) : eval_right(t);
}

void PiecewiseTrajectory::append_nodes(double a, double b, std::vector<double>& out) const {
    detail::collect_nodes(blocks_, a, b, out);
}

HistorySegment PiecewiseTrajectory::history_segment(double t) const {
    if (t < 0.0 || t > horizon())
        throw DomainError("history_segment at t = " + std::to_string(t) + " outside [0, b]");
    if (t == 0.0) {
        const auto& h = history();
        return HistorySegment(h.times, h.values);
    }
    return HistorySegment(*this, t, delay()).materialize();
}

double PiecewiseTrajectory::sigma_norm() const {
    double sup = 0.0;
    for (std::size_t j = 1; j < blocks_.size(); ++j)
        for (const auto& v : blocks_[j].values) sup = std::max(sup, sup_norm(v));
    return sup;
}

std::vector<double> block_gaps(const PiecewiseTrajectory& a, const PiecewiseTrajectory& b) {
    if (a.dimension() != b.dimension()) throw StructuralError("sigma_diff: dimension mismatch");
    if (a.horizon() != b.horizon()) throw StructuralError("sigma_diff: horizon mismatch");
    if (a.impulse_times() != b.impulse_times()) throw StructuralError("sigma_diff: impulse schedule mismatch");
    std::vector<double> gaps(a.block_count(), 0.0);
    std::vector<double> nodes;
    for (std::size_t k = 0; k < a.block_count(); ++k) {
        const auto& ba = a.block(k);
        const auto& bb = b.block(k);
        nodes.assign(ba.times.begin(), ba.times.end());
        nodes.insert(nodes.end(), bb.times.begin(), bb.times.end());
        std::sort(nodes.begin(), nodes.end());
        nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
        for (double t : nodes) gaps[k] = std::max(gaps[k], sup_norm(ba.interpolate(t) - bb.interpolate(t)));
    }
    return gaps;
}

double sigma_diff(const PiecewiseTrajectory& a, const PiecewiseTrajectory& b) {
    const auto gaps = block_gaps(a, b);
    return gaps.empty() ? 0.0 : *std::max_element(gaps.begin(), gaps.end());
}

}  // namespace idie
