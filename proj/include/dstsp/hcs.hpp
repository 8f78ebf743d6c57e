#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "dstsp/dynamics.hpp"
#include "dstsp/hcp.hpp"
#include "dstsp/rng.hpp"

namespace dstsp::hcs {

// Half-open axis-aligned workspace box [lo, hi).
struct Box {
  std::array<double, 3> lo{0, 0, 0};
  std::array<double, 3> hi{0, 0, 0};
  int dim = 2;

  static Box unit(int dim = 2);
  double width(int i) const { return hi[i] - lo[i]; }
  double volume() const;
  WorkspacePoint center() const;
  bool contains(const WorkspacePoint& x) const;
  // Closed containment with tolerance, for points on the upper faces.
  bool contains_closed(const WorkspacePoint& x, double tol = 1e-12) const;
};

struct Cell {
  Configuration anchor;
  double eps = 0.0;
  Box box;
  int depth = 0;
  std::vector<Cell> children;
};

// Constant-speed strip of the support tiled by k[0] x k[1] x k[2] root cells.
struct CoverRegion {
  Box box;
  std::array<int, 3> k{1, 1, 1};
  std::size_t first_root = 0;
};

struct HcsCover {
  ModelKind model = ModelKind::Euclidean2;
  Box support;
  double eps0 = 0.0;
  double rho = 0.0;
  int s = 2;
  int gamma = 2;
  std::vector<int> weights;
  std::vector<Cell> roots;  // depth 0, children not expanded
  std::vector<CoverRegion> regions;

  int branching() const;  // s^gamma
  hcp::HcpParams hcp_params() const { return {branching(), s}; }
};

// Coefficients a_i with box half-width a_i * L_i(eps), where L = (c eps, c eps[, c eps]) for
// euclidean models and (c eps, (c eps)^2 / r) for reeds_shepp.
std::vector<double> box_coefficients(const DynamicsModel& model);
// Largest admissible half-widths at eps for local speed scale sigma.
std::vector<double> max_half_widths(const DynamicsModel& model, double eps, double sigma = 1.0);
bool supports_hcs(const DynamicsModel& model);

// Children of a box in mixed-radix order: axis 0 varies fastest, axis i split into s^w_i parts.
std::vector<Box> split_box(const Box& box, const std::vector<int>& weights, int s);
int child_index(const Box& box, const std::vector<int>& weights, int s, const WorkspacePoint& x);
Box child_box(const Box& box, const std::vector<int>& weights, int s, int index);

Cell build_hcs(const DynamicsModel& model, const Configuration& anchor, double eps0, int depth, int s = 2);

HcsCover build_cover(const DynamicsModel& model, const Box& support, double eps0, double rho = 0.0, int s = 2);

struct Location {
  std::size_t root = 0;
  hcp::TargetPath path;
};

std::size_t locate_root(const HcsCover& cover, const WorkspacePoint& x);
Location locate_path(const HcsCover& cover, const WorkspacePoint& x, int depth);
// Box and anchor of the vertex reached from a root by the child prefix.
Box vertex_box(const HcsCover& cover, std::size_t root, const std::vector<int>& prefix);
Configuration vertex_anchor(const HcsCover& cover, std::size_t root, const std::vector<int>& prefix);

struct AlphaMeasure {
  double alpha = 0.0;
  double reachable_fraction = 0.0;
};

// alpha = Vol(box) / (g_hat eps^gamma); throws CellNotContained if fewer than 99% of
// uniform box points are reachable from the anchor within eps keeping the anchor heading.
AlphaMeasure measure_alpha(const Cell& cell, const DynamicsModel& model, double g_hat, std::size_t n, Rng& rng);

// Boxes of side 2 * half-width(eps) needed per axis to span the 2 eps-reachable set, multiplied.
int measured_branching(const DynamicsModel& model, double eps);

std::string cover_to_json(const HcsCover& cover);

}  // namespace dstsp::hcs
