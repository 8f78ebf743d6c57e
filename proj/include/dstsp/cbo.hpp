#pragma once

#include <vector>

#include "dstsp/dynamics.hpp"
#include "dstsp/grid_field.hpp"

namespace dstsp::cbo {

struct CostTrajectory {
  Trajectory trajectory;
  double cost_length = 0.0;
};

// Composite midpoint rule with step at most cell_size / (4 c).
double cost_length(const DynamicsModel& model, const Trajectory& traj, const GridField& cost);

// Cost of the steer between two targets, both lifted with heading 0.
double pair_cost(const DynamicsModel& model, const GridField& cost, const WorkspacePoint& a, const WorkspacePoint& b);

// Start at a random target and keep moving to the cheapest unvisited one while the budget lasts.
std::size_t greedy_orienteering(const DynamicsModel& model, const GridField& cost,
                                const std::vector<WorkspacePoint>& targets, double lambda, Rng& rng);

// Exact over all ordered subsets of at most 8 targets.
std::size_t brute_cbo_small(const DynamicsModel& model, const GridField& cost,
                            const std::vector<WorkspacePoint>& targets, double lambda);

double cbo_bound(double beta, double lambda, double n, double gamma, double delta);

}  // namespace dstsp::cbo
