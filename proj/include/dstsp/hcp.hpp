#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace dstsp::hcp {

struct HcpParams {
  int b = 4;  // branch factor
  int s = 2;  // scale

  double gamma() const;
  // Threshold s/(s-1) above which a vertex is entered.
  double threshold() const;
  void validate() const;
};

// Root-to-leaf child indices; indices past the stored depth read as 0.
struct TargetPath {
  std::vector<int> child;

  int at(std::size_t level) const { return level < child.size() ? child[level] : 0; }
  bool has_prefix(const std::vector<int>& prefix) const;
};

bool same_path(const TargetPath& a, const TargetPath& b);

struct HcpInstance {
  HcpParams params;
  std::vector<TargetPath> targets;

  std::size_t n() const { return targets.size(); }
  std::size_t stored_depth() const;
  // Throws InvalidArgument on out-of-range indices or duplicate targets.
  void validate() const;
};

struct Action {
  enum class Kind { Down, Up, Collect };
  Kind kind = Kind::Up;
  int arg = 0;  // child index for Down, target id for Collect

  static Action down(int child) { return {Kind::Down, child}; }
  static Action up() { return {Kind::Up, 0}; }
  static Action collect(int target) { return {Kind::Collect, target}; }
  bool operator==(const Action&) const = default;
};

using Plan = std::vector<Action>;

// Per-level tally of a plan cost: value = sum_k coeff[k] * s^-k.
struct ExactCost {
  int s = 2;
  std::vector<std::int64_t> coeff;

  void add(std::size_t level, std::int64_t units);
  double value() const;
  // Integer cost scaled by s^depth; depth must be >= highest used level.
  std::int64_t scaled(std::size_t depth) const;
  friend bool operator==(const ExactCost& a, const ExactCost& b);
};

// Validates against the instance and returns the exact tally.
ExactCost plan_cost_exact(const Plan& plan, const HcpInstance& instance);
double plan_cost(const Plan& plan, const HcpInstance& instance);

std::size_t targets_through(const HcpInstance& instance, const std::vector<int>& prefix);

// Depth-first tour of the vertices with n_v > s/(s-1). When max_depth is
// set, the tour never descends below it; otherwise targets must be distinct.
Plan construct_optimal_plan(const HcpInstance& instance,
                            std::optional<std::size_t> max_depth = std::nullopt);

struct BruteForceResult {
  Plan plan;
  double cost = 0.0;
  ExactCost exact;
};

BruteForceResult brute_force_optimal(const HcpInstance& instance, int depth_limit);

Plan level_k_plan(const HcpInstance& instance, int k_star);
// Closed-form cost of level_k_plan.
double level_k_cost(std::size_t n, const HcpParams& params, int k_star);
// ceil(log_b n) - 1, clamped at 0.
int default_k_star(std::size_t n, const HcpParams& params);

double hcp_star_bound(std::size_t n, const HcpParams& params);

// Number of times each edge (identified by child vertex prefix) is crossed.
std::vector<std::pair<std::vector<int>, int>> edge_crossings(const Plan& plan);
// Vertices entered by the plan, root included.
std::vector<std::vector<int>> entered_vertices(const Plan& plan);

}  // namespace dstsp::hcp
