#pragma once

#include <optional>
#include <vector>

#include "dstsp/grid_field.hpp"
#include "dstsp/rng.hpp"

namespace dstsp::bounds {

// Minimal (1/zeta)-Lipschitz envelope above max(h, zeta).
GridField upper_reg(const GridField& h, double zeta);
// Maximal (1/zeta)-Lipschitz envelope below min(h, 1/zeta).
GridField lower_reg(const GridField& h, double zeta);
// Reference O(cells^2) versions without window pruning.
GridField upper_reg_exhaustive(const GridField& h, double zeta);
GridField lower_reg_exhaustive(const GridField& h, double zeta);

// Midpoint rule for the integral of f^(1-1/gamma) g^(-1/gamma) over cells with f > 0.
double interaction_integral(const GridField& f, const GridField& g, double gamma);

struct Beta {
  double xi = 0.0;
  double beta = 0.0;
};

// Natural log by default; natural_log = false uses log base 2.
Beta beta_constant(double b, double gamma, bool symmetric, bool natural_log = true);

struct BoundReport {
  double n = 0, gamma = 0, beta = 0, s = 0, alpha = 0, J = 0, int_g_inv = 0, delta = 0;
  double lower = 0, upper = 0, adversarial_lower = 0, adversarial_upper = 0;
};

BoundReport bound_report(double n, double delta, double beta, double s, double alpha, double gamma, double J,
                         double int_g_inv);

// Axis-aligned workspace rectangle; cells whose centre lies inside belong to it.
struct Region {
  double x0, y0, x1, y1;
  bool contains(double x, double y) const { return x >= x0 && x < x1 && y >= y0 && y < y1; }
};

double integral_inverse(const GridField& g, const std::optional<Region>& region = std::nullopt);
GridField worst_case_density(const GridField& g, const std::optional<Region>& region = std::nullopt);
double holder_gap(const GridField& f, const GridField& g, double gamma, const std::optional<Region>& region = std::nullopt);

GridField cost_field(const GridField& f, const GridField& g, double zeta, double gamma);

// Rescales a nonnegative field to integrate to 1.
GridField normalized(GridField f);

std::vector<WorkspacePoint> sample_density(const GridField& f, std::size_t n, Rng& rng);

}  // namespace dstsp::bounds
