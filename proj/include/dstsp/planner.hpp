#pragma once

#include <cstdint>
#include <vector>

#include "dstsp/dynamics.hpp"
#include "dstsp/hcs.hpp"

namespace dstsp::planner {

struct Visit {
  std::size_t target = 0;
  double time = 0.0;
  WorkspacePoint position{};
};

struct Tour {
  Trajectory trajectory;
  std::vector<Visit> visited;  // in visit order
  double total_time = 0.0;
  double roots_time = 0.0;  // time spent moving between root anchors
  double cells_time = 0.0;  // time spent inside root cells
};

struct RootTour {
  std::vector<std::size_t> order;
  double time = 0.0;
};

// Open path through all anchors: nearest neighbour, then 2-opt over near-neighbour lists.
RootTour roots_tour(const DynamicsModel& model, const std::vector<Configuration>& anchors);

struct SolveOptions {
  bool record_trajectory = true;
  unsigned threads = 1;
};

class DstspPlanner {
 public:
  DstspPlanner(DynamicsModel model, hcs::HcsCover cover);

  Tour solve(const std::vector<WorkspacePoint>& targets, const SolveOptions& opt = {}) const;

  const DynamicsModel& model() const { return model_; }
  const hcs::HcsCover& cover() const { return cover_; }
  const RootTour& root_tour() const { return root_tour_; }

 private:
  DynamicsModel model_;
  hcs::HcsCover cover_;
  RootTour root_tour_;
};

Tour solve_dstsp(const DynamicsModel& model, const hcs::HcsCover& cover, const std::vector<WorkspacePoint>& targets,
                 const SolveOptions& opt = {});

// HCP depth used for a root holding n targets: ceil(log_b n) + 1.
int root_depth(std::size_t n, int b);

// Sum over roots of 6 s eps0 n_j^(1 - 1/gamma) for the targets' root counts.
double cells_bound(const hcs::HcsCover& cover, const std::vector<WorkspacePoint>& targets);

// eps0 = clamp(c0 n^(-1/gamma), eps_min, eps_max), then adjusted so the first cover region
// tiles exactly along x with boxes of the largest admissible width.
double choose_eps0(const DynamicsModel& model, const hcs::Box& support, std::size_t n, double c0 = 1.0,
                   double eps_min = 1e-4, double eps_max = 1.0);

// Held-Karp over (visited set, last target, last heading); open path, free start.
double exact_small_tsp(const DynamicsModel& model, const std::vector<WorkspacePoint>& targets, int headings = 8);

// C n with C = 1.2 x the largest steer time between 512 sampled support configurations.
double trivial_bound(std::size_t n, const DynamicsModel& model, const hcs::Box& support, std::size_t samples = 512);

}  // namespace dstsp::planner
