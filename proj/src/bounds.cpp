#include "dstsp/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "dstsp/error.hpp"
#include "dstsp/parallel.hpp"

namespace dstsp::bounds {
namespace {

void check_zeta(double zeta) {
  if (!(zeta > 0.0)) fail(ErrorKind::NonpositiveZeta, "zeta must be positive");
}

// Envelope core. sign = +1: sup of (v - L d); sign = -1: inf of (v + L d).
GridField envelope(const GridField& h, double zeta, int sign, bool windowed) {
  check_zeta(zeta);
  const double lip = 1.0 / zeta;
  GridField base = h;
  for (double& v : base.values) v = sign > 0 ? std::max(v, zeta) : std::min(v, 1.0 / zeta);
  const double extreme = sign > 0 ? base.max() : base.min();
  GridField out = base;
  const auto nx = static_cast<long>(base.nx), ny = static_cast<long>(base.ny);
  const double cs = base.cell_size;
  parallel_for(base.size(), resolve_threads(0), [&](std::size_t cell) {
    const long ix = static_cast<long>(cell % base.nx), iy = static_cast<long>(cell / base.nx);
    double best = base.values[base.index(ix, iy)];
    long x0 = 0, x1 = nx - 1, y0 = 0, y1 = ny - 1;
    if (windowed) {
      const double reach = std::fabs(extreme - best) / lip;
      const long w = static_cast<long>(std::ceil(reach / cs)) + 1;
      x0 = std::max(0L, ix - w);
      x1 = std::min(nx - 1, ix + w);
      y0 = std::max(0L, iy - w);
      y1 = std::min(ny - 1, iy + w);
    }
    for (long jy = y0; jy <= y1; ++jy) {
      const double dy = static_cast<double>(jy - iy) * cs;
      for (long jx = x0; jx <= x1; ++jx) {
        const double dx = static_cast<double>(jx - ix) * cs;
        const double d = std::sqrt(dx * dx + dy * dy);
        const double v = base.values[base.index(jx, jy)];
        if (sign > 0) {
          best = std::max(best, v - lip * d);
        } else {
          best = std::min(best, v + lip * d);
        }
      }
    }
    out.values[out.index(ix, iy)] = best;
  });
  return out;
}

bool in_region(const GridField& g, std::size_t i, const std::optional<Region>& region) {
  if (!region) return true;
  auto c = g.center(i);
  return region->contains(c[0], c[1]);
}

}  // namespace

GridField upper_reg(const GridField& h, double zeta) { return envelope(h, zeta, +1, true); }
GridField lower_reg(const GridField& h, double zeta) { return envelope(h, zeta, -1, true); }
GridField upper_reg_exhaustive(const GridField& h, double zeta) { return envelope(h, zeta, +1, false); }
GridField lower_reg_exhaustive(const GridField& h, double zeta) { return envelope(h, zeta, -1, false); }

double interaction_integral(const GridField& f, const GridField& g, double gamma) {
  if (!f.same_geometry(g)) fail(ErrorKind::GridMismatch, "f and g grids differ");
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.values[i] <= 0.0) continue;
    if (!(g.values[i] > 0.0)) fail(ErrorKind::InvalidArgument, "agility must be positive on the support");
    sum += std::pow(f.values[i], 1.0 - 1.0 / gamma) * std::pow(g.values[i], -1.0 / gamma);
  }
  return sum * f.cell_measure();
}

Beta beta_constant(double b, double gamma, bool symmetric, bool natural_log) {
  if (!(b >= 2.0)) fail(ErrorKind::InvalidArgument, "branching factor must be >= 2");
  const double r = symmetric ? 1.5 : 2.0;
  const double rg = std::pow(r, gamma);
  const double lb = natural_log ? std::log(b) : std::log2(b);
  Beta out;
  out.xi = lb > rg ? 3.0 * lb / rg : 3.0 * std::sqrt(lb / rg);
  out.beta = (1.0 + out.xi) * rg;
  return out;
}

BoundReport bound_report(double n, double delta, double beta, double s, double alpha, double gamma, double J,
                         double int_g_inv) {
  if (!(alpha > 0.0) || alpha > 1.0 + 1e-12) fail(ErrorKind::AlphaOutOfRange, "alpha must lie in (0, 1]");
  if (!(delta > 0.0) || !(beta > 0.0) || !(s > 0.0) || !(gamma > 0.0))
    fail(ErrorKind::InvalidArgument, "bound inputs must be positive");
  BoundReport r{n, gamma, beta, s, alpha, J, int_g_inv, delta};
  if (n <= 0.0) return r;
  const double growth = std::pow(n, 1.0 - 1.0 / gamma);
  const double adv = std::pow(int_g_inv, 1.0 / gamma);
  const double a = std::pow(alpha, -1.0 / gamma);
  r.lower = (1.0 - delta) / beta * growth * J;
  r.upper = (1.0 + delta) * 12.0 * s * a * growth * J;
  r.adversarial_lower = (1.0 - delta) / beta * growth * adv;
  r.adversarial_upper = (1.0 + delta) * 6.0 * s * a * growth * adv;
  return r;
}

double integral_inverse(const GridField& g, const std::optional<Region>& region) {
  double sum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!in_region(g, i, region)) continue;
    if (!(g.values[i] > 0.0)) fail(ErrorKind::InvalidArgument, "agility must be positive on the region");
    sum += 1.0 / g.values[i];
  }
  return sum * g.cell_measure();
}

GridField worst_case_density(const GridField& g, const std::optional<Region>& region) {
  const double total = integral_inverse(g, region);
  if (!(total > 0.0)) fail(ErrorKind::InvalidArgument, "region contains no cells");
  GridField f = g;
  for (std::size_t i = 0; i < f.size(); ++i) f.values[i] = in_region(g, i, region) ? (1.0 / g.values[i]) / total : 0.0;
  return f;
}

double holder_gap(const GridField& f, const GridField& g, double gamma, const std::optional<Region>& region) {
  return std::pow(integral_inverse(g, region), 1.0 / gamma) - interaction_integral(f, g, gamma);
}

GridField cost_field(const GridField& f, const GridField& g, double zeta, double gamma) {
  if (!f.same_geometry(g)) fail(ErrorKind::GridMismatch, "f and g grids differ");
  GridField fu = upper_reg(f, zeta), gu = upper_reg(g, zeta);
  for (std::size_t i = 0; i < fu.size(); ++i) fu.values[i] = std::pow(fu.values[i] * gu.values[i], 1.0 / gamma);
  return fu;
}

GridField normalized(GridField f) {
  const double total = f.integral();
  if (!(total > 0.0)) fail(ErrorKind::InvalidArgument, "density has no mass");
  for (double& v : f.values) {
    if (v < 0.0) fail(ErrorKind::InvalidArgument, "density must be nonnegative");
    v /= total;
  }
  return f;
}

std::vector<WorkspacePoint> sample_density(const GridField& f, std::size_t n, Rng& rng) {
  std::vector<double> cdf(f.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.values[i] < 0.0) fail(ErrorKind::InvalidArgument, "density must be nonnegative");
    acc += f.values[i];
    cdf[i] = acc;
  }
  if (!(acc > 0.0)) fail(ErrorKind::InvalidArgument, "density has no mass");
  std::vector<WorkspacePoint> pts;
  pts.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double u = rng.uniform() * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), f.size() - 1);
    while (f.values[i] <= 0.0 && i + 1 < f.size()) ++i;
    const std::size_t ix = i % f.nx, iy = i / f.nx;
    WorkspacePoint p{};
    p[0] = f.origin[0] + (static_cast<double>(ix) + rng.uniform()) * f.cell_size;
    p[1] = f.rank == 1 ? 0.0 : f.origin[1] + (static_cast<double>(iy) + rng.uniform()) * f.cell_size;
    pts.push_back(p);
  }
  return pts;
}

}  // namespace dstsp::bounds
