#include "idie/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace idie {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_trajectory_csv(std::ostream& out, const PiecewiseTrajectory& traj) {
    out << "t,segment_index,is_right_limit";
    for (Index i = 0; i < traj.dimension(); ++i) out << ",w_" << i;
    out << '\n';
    auto rows = [&](const TrajectoryBlock& block, long segment) {
        for (std::size_t j = 0; j < block.size(); ++j) {
            out << format_double(block.times[j]) << ',' << segment << ',' << (segment >= 1 && j == 0 ? 1 : 0);
            for (Index i = 0; i < block.values[j].size(); ++i) out << ',' << format_double(block.values[j](i));
            out << '\n';
        }
    };
    rows(traj.history(), -1);
    for (std::size_t k = 0; k < traj.block_count(); ++k) rows(traj.block(k), static_cast<long>(k));
}

PiecewiseTrajectory read_trajectory_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw StructuralError("trajectory CSV is empty");
    std::vector<std::string> header;
    {
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) header.push_back(cell);
    }
    if (header.size() < 4 || header[0] != "t" || header[1] != "segment_index" || header[2] != "is_right_limit")
        throw StructuralError("trajectory CSV header must start with t,segment_index,is_right_limit");
    const std::size_t n = header.size() - 3;
    for (std::size_t i = 0; i < n; ++i)
        if (header[3 + i] != "w_" + std::to_string(i)) throw StructuralError("unexpected column '" + header[3 + i] + "'");

    std::map<long, TrajectoryBlock> blocks;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream cells(line);
        std::string cell;
        std::vector<std::string> fields;
        while (std::getline(cells, cell, ',')) fields.push_back(cell);
        if (fields.size() != header.size())
            throw StructuralError("trajectory CSV line " + std::to_string(line_no) + " has the wrong column count");
        const double t = std::strtod(fields[0].c_str(), nullptr);
        const long segment = std::strtol(fields[1].c_str(), nullptr, 10);
        Vector w(static_cast<Index>(n));
        for (std::size_t i = 0; i < n; ++i) w(static_cast<Index>(i)) = std::strtod(fields[3 + i].c_str(), nullptr);
        auto& block = blocks[segment];
        block.times.push_back(t);
        block.values.push_back(std::move(w));
    }
    if (!blocks.contains(-1)) throw StructuralError("trajectory CSV has no history rows");
    TrajectoryBlock history = std::move(blocks[-1]);
    blocks.erase(-1);
    std::vector<TrajectoryBlock> solution;
    std::vector<double> impulses;
    long expected = 0;
    for (auto& [segment, block] : blocks) {
        if (segment != expected++) throw StructuralError("trajectory CSV segment indices are not contiguous");
        if (segment > 0) impulses.push_back(block.front());
        solution.push_back(std::move(block));
    }
    return PiecewiseTrajectory(std::move(impulses), std::move(history), std::move(solution));
}

void write_campaign_csv(std::ostream& out, const CampaignSummary& summary) {
    out << "instance_id,t_max_violation,max_violation,num_impulses,bound_at_horizon\n";
    for (const auto& row : summary.rows)
        out << row.instance_id << ',' << format_double(row.t_max_violation) << ',' << format_double(row.max_violation)
            << ',' << row.num_impulses << ',' << format_double(row.bound_at_horizon) << '\n';
}

}  // namespace idie
