#pragma once

#include "idie/pachpatte.hpp"
#include "idie/trajectory.hpp"

#include <iosfwd>
#include <string>

namespace idie {

/// Shortest-safe decimal form: 17 significant digits, round-trips exactly.
std::string format_double(double v);

/// Header `t,segment_index,is_right_limit,w_0,...,w_{n-1}`. History rows carry
/// segment_index -1; the first row of block k >= 1 is the right limit at t_k.
void write_trajectory_csv(std::ostream& out, const PiecewiseTrajectory& traj);
PiecewiseTrajectory read_trajectory_csv(std::istream& in);

/// Header `instance_id,t_max_violation,max_violation,num_impulses,bound_at_horizon`.
void write_campaign_csv(std::ostream& out, const CampaignSummary& summary);

}  // namespace idie
