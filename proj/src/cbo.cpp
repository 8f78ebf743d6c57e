#include "dstsp/cbo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "dstsp/error.hpp"

namespace dstsp::cbo {
namespace {

std::vector<double> cost_matrix(const DynamicsModel& model, const GridField& cost,
                                const std::vector<WorkspacePoint>& targets) {
  const std::size_t n = targets.size();
  std::vector<double> w(n * n, 0.0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (a != b) w[a * n + b] = pair_cost(model, cost, targets[a], targets[b]);
  return w;
}

}  // namespace

double cost_length(const DynamicsModel& model, const Trajectory& traj, const GridField& cost) {
  const double max_step = cost.cell_size / (4.0 * model.speed_limit());
  double total = 0.0;
  Configuration q = traj.start;
  for (const auto& seg : traj.segments) {
    if (seg.duration <= 0.0) continue;
    const auto steps = static_cast<std::size_t>(std::ceil(seg.duration / max_step));
    const double h = seg.duration / static_cast<double>(steps);
    for (std::size_t k = 0; k < steps; ++k) {
      const auto p = project(model, integrate(model, q, seg.control, (static_cast<double>(k) + 0.5) * h));
      total += cost.at(p[0], p[1]) * h;
    }
    q = integrate(model, q, seg.control, seg.duration);
  }
  return total;
}

double pair_cost(const DynamicsModel& model, const GridField& cost, const WorkspacePoint& a, const WorkspacePoint& b) {
  return cost_length(model, steer(model, lift(model, a), lift(model, b)), cost);
}

std::size_t greedy_orienteering(const DynamicsModel& model, const GridField& cost,
                                const std::vector<WorkspacePoint>& targets, double lambda, Rng& rng) {
  if (lambda < 0.0) fail(ErrorKind::InvalidArgument, "lambda must be nonnegative");
  const std::size_t n = targets.size();
  if (n == 0) return 0;
  std::vector<char> used(n, 0);
  std::size_t cur = static_cast<std::size_t>(rng.below(n));
  used[cur] = 1;
  std::size_t count = 1;
  double budget = lambda;
  while (count < n) {
    std::size_t best = n;
    double best_c = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j]) continue;
      const double c = pair_cost(model, cost, targets[cur], targets[j]);
      if (c < best_c) {
        best_c = c;
        best = j;
      }
    }
    if (best_c > budget) break;
    budget -= best_c;
    used[best] = 1;
    cur = best;
    ++count;
  }
  return count;
}

std::size_t brute_cbo_small(const DynamicsModel& model, const GridField& cost,
                            const std::vector<WorkspacePoint>& targets, double lambda) {
  const std::size_t n = targets.size();
  if (n > 8) fail(ErrorKind::TooLarge, "brute-force CBO supports at most 8 targets");
  if (n == 0) return 0;
  const auto w = cost_matrix(model, cost, targets);
  std::size_t best = 1;
  std::vector<char> used(n, 0);
  std::function<void(std::size_t, std::size_t, double)> dfs = [&](std::size_t cur, std::size_t depth, double spent) {
    best = std::max(best, depth);
    if (best == n) return;
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j] || spent + w[cur * n + j] > lambda) continue;
      used[j] = 1;
      dfs(j, depth + 1, spent + w[cur * n + j]);
      used[j] = 0;
    }
  };
  for (std::size_t s = 0; s < n && best < n; ++s) {
    used[s] = 1;
    dfs(s, 1, 0.0);
    used[s] = 0;
  }
  return best;
}

double cbo_bound(double beta, double lambda, double n, double gamma, double delta) {
  if (n <= 0.0) return 0.0;
  return (1.0 + delta) * beta * lambda * std::pow(n, 1.0 / gamma);
}

}  // namespace dstsp::cbo
