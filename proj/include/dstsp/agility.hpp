#pragma once

#include <cstdint>
#include <vector>

#include "dstsp/dynamics.hpp"
#include "dstsp/grid_field.hpp"
#include "dstsp/rng.hpp"

namespace dstsp::agility {

struct AgilityEstimate {
  double gamma_hat = 0.0;
  double g_hat = 0.0;
  std::vector<double> epsilons;  // strictly decreasing
  std::vector<double> volumes;
  double fit_r2 = 0.0;
};

struct VolumeOptions {
  // Box side along axis i is (adapted length scale at eps) / divisor.
  double divisor = 20.0;
  unsigned threads = 1;
};

// Occupied boxes times box volume; the box side is `resolution` on each of `dim` axes.
double grid_volume(const std::vector<WorkspacePoint>& points, double resolution, int dim = 2);
// Anisotropic boxes: side resolutions[i] on axis i.
double grid_volume(const std::vector<WorkspacePoint>& points, const std::vector<double>& resolutions);

// Adapted length scale of each workspace axis at time eps (forward, lateral for heading models).
std::vector<double> axis_scales(const DynamicsModel& model, double eps);

// Workspace points expressed relative to project(q), rotated into the heading frame of q.
std::vector<WorkspacePoint> body_frame(const DynamicsModel& model, const Configuration& q,
                                       const std::vector<WorkspacePoint>& points);

// Volume of the sampled eps-reachable set from q.
double reachable_volume(const DynamicsModel& model, const Configuration& q, double eps, std::size_t n, Rng& rng,
                        const VolumeOptions& opt = {});

// eps ladder eps0 * 2^-k, k = 0..count-1.
std::vector<double> eps_ladder(double eps0, int count = 5);

// Least-squares log-volume slope and g from the two smallest eps; throws DegenerateFit if r^2 < 0.9.
AgilityEstimate fit_volumes(std::vector<double> epsilons, std::vector<double> volumes);

AgilityEstimate estimate_gamma(const DynamicsModel& model, const Configuration& q, const std::vector<double>& eps_list,
                               std::size_t n, Rng& rng, const VolumeOptions& opt = {});

// Per-cell g from Vol(eps) / eps^gamma with the model's gamma, maximized over
// `headings` evenly spaced headings for heading models.
GridField agility_field(const DynamicsModel& model, const GridField& grid, double eps, std::size_t n, Rng& rng,
                        int headings = 8, const VolumeOptions& opt = {});

// Closed-form g where it is known (euclidean and scaled models); throws otherwise.
double analytic_agility(const DynamicsModel& model, const WorkspacePoint& x);
bool has_analytic_agility(const DynamicsModel& model);
GridField analytic_agility_field(const DynamicsModel& model, const GridField& grid);

}  // namespace dstsp::agility
