#include "dstsp/agility.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_set>

#include "dstsp/error.hpp"
#include "dstsp/parallel.hpp"

namespace dstsp::agility {
namespace {

struct KeyHash {
  std::size_t operator()(const std::array<std::int64_t, 3>& k) const {
    std::uint64_t h = mix64(static_cast<std::uint64_t>(k[0]));
    h = mix64(h ^ static_cast<std::uint64_t>(k[1]));
    return static_cast<std::size_t>(mix64(h ^ static_cast<std::uint64_t>(k[2])));
  }
};

}  // namespace

double grid_volume(const std::vector<WorkspacePoint>& points, double resolution, int dim) {
  if (dim < 1 || dim > 3) fail(ErrorKind::InvalidArgument, "grid dimension must be 1, 2 or 3");
  return grid_volume(points, std::vector<double>(static_cast<std::size_t>(dim), resolution));
}

double grid_volume(const std::vector<WorkspacePoint>& points, const std::vector<double>& resolutions) {
  if (points.empty()) fail(ErrorKind::EmptyPointSet, "no points to measure");
  if (resolutions.empty() || resolutions.size() > 3) fail(ErrorKind::InvalidArgument, "need 1 to 3 resolutions");
  for (double r : resolutions)
    if (!(r > 0.0)) fail(ErrorKind::InvalidArgument, "resolution must be positive");
  std::unordered_set<std::array<std::int64_t, 3>, KeyHash> occupied;
  occupied.reserve(points.size());
  for (const auto& p : points) {
    std::array<std::int64_t, 3> key{0, 0, 0};
    for (std::size_t i = 0; i < resolutions.size(); ++i)
      key[i] = static_cast<std::int64_t>(std::floor(p[i] / resolutions[i]));
    occupied.insert(key);
  }
  double box = 1.0;
  for (double r : resolutions) box *= r;
  return static_cast<double>(occupied.size()) * box;
}

std::vector<double> axis_scales(const DynamicsModel& model, double eps) {
  const double v = model.speed_limit() * eps;
  switch (model.kind()) {
    case ModelKind::Euclidean2:
    case ModelKind::ScaledEuclidean2: return {v, v};
    case ModelKind::Euclidean3: return {v, v, v};
    case ModelKind::ReedsShepp: return {v, v * v / model.r_min()};
    case ModelKind::DiffDrive: return {v, v * model.omega_max() * eps};
  }
  return {v, v};
}

std::vector<WorkspacePoint> body_frame(const DynamicsModel& model, const Configuration& q,
                                       const std::vector<WorkspacePoint>& points) {
  const auto o = project(model, q);
  const double th = model.has_heading() ? q.theta() : 0.0;
  const double c = std::cos(th), s = std::sin(th);
  std::vector<WorkspacePoint> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    const double dx = p[0] - o[0], dy = p[1] - o[1];
    out.push_back({c * dx + s * dy, -s * dx + c * dy, p[2] - o[2]});
  }
  return out;
}

double reachable_volume(const DynamicsModel& model, const Configuration& q, double eps, std::size_t n, Rng& rng,
                        const VolumeOptions& opt) {
  auto pts = body_frame(model, q, sample_reachable(model, q, eps, n, rng));
  auto res = axis_scales(model, eps);
  for (double& r : res) r /= opt.divisor;
  return grid_volume(pts, res);
}

std::vector<double> eps_ladder(double eps0, int count) {
  std::vector<double> out;
  for (int k = 0; k < count; ++k) out.push_back(eps0 * std::pow(2.0, -k));
  return out;
}

AgilityEstimate fit_volumes(std::vector<double> epsilons, std::vector<double> volumes) {
  if (epsilons.size() != volumes.size() || epsilons.size() < 2)
    fail(ErrorKind::InvalidArgument, "need matching eps and volume lists");
  for (double v : volumes)
    if (!(v > 0.0)) fail(ErrorKind::DegenerateFit, "volumes must be positive");
  AgilityEstimate est;
  est.epsilons = std::move(epsilons);
  est.volumes = std::move(volumes);
  const double m = static_cast<double>(est.epsilons.size());
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < est.epsilons.size(); ++k) {
    mx += std::log(est.epsilons[k]);
    my += std::log(est.volumes[k]);
  }
  mx /= m;
  my /= m;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t k = 0; k < est.epsilons.size(); ++k) {
    const double dx = std::log(est.epsilons[k]) - mx, dy = std::log(est.volumes[k]) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  est.gamma_hat = sxy / sxx;
  est.fit_r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  if (est.fit_r2 < 0.9) fail(ErrorKind::DegenerateFit, "log-volume fit r^2 below 0.9");
  const std::size_t last = est.epsilons.size() - 1;
  const double a = est.volumes[last] / std::pow(est.epsilons[last], est.gamma_hat);
  const double b = est.volumes[last - 1] / std::pow(est.epsilons[last - 1], est.gamma_hat);
  est.g_hat = 0.5 * (a + b);
  return est;
}

AgilityEstimate estimate_gamma(const DynamicsModel& model, const Configuration& q, const std::vector<double>& eps_list,
                               std::size_t n, Rng& rng, const VolumeOptions& opt) {
  if (eps_list.size() < 4) fail(ErrorKind::InvalidArgument, "need at least 4 eps values");
  AgilityEstimate est;
  est.epsilons = eps_list;
  std::sort(est.epsilons.begin(), est.epsilons.end(), std::greater<>());
  for (std::size_t i = 0; i < est.epsilons.size(); ++i) {
    if (!(est.epsilons[i] > 0.0)) fail(ErrorKind::InvalidArgument, "eps values must be positive");
    if (i > 0 && !(est.epsilons[i] < est.epsilons[i - 1])) fail(ErrorKind::InvalidArgument, "eps values must be distinct");
  }
  const std::uint64_t base = rng();
  est.volumes.assign(est.epsilons.size(), 0.0);
  parallel_for(est.epsilons.size(), opt.threads, [&](std::size_t k) {
    Rng local = Rng::substream(base, k);
    est.volumes[k] = reachable_volume(model, q, est.epsilons[k], n, local, opt);
  });

  return fit_volumes(est.epsilons, est.volumes);
}

GridField agility_field(const DynamicsModel& model, const GridField& grid, double eps, std::size_t n, Rng& rng,
                        int headings, const VolumeOptions& opt) {
  if (headings < 1) fail(ErrorKind::InvalidArgument, "need at least one heading");
  GridField g = grid;
  const int h = model.has_heading() ? headings : 1;
  const double gamma = model.gamma();
  const std::uint64_t base = rng();
  parallel_for(g.size(), opt.threads, [&](std::size_t i) {
    const auto c = g.center(i);
    double best = 0.0;
    for (int k = 0; k < h; ++k) {
      Rng local = Rng::substream(base, i * static_cast<std::size_t>(h) + static_cast<std::size_t>(k));
      const double th = 2.0 * std::numbers::pi * k / h;
      const auto q = lift(model, {c[0], c[1], 0.0}, th);
      best = std::max(best, reachable_volume(model, q, eps, n, local, opt) / std::pow(eps, gamma));
    }
    g.values[i] = best;
  });
  return g;
}

bool has_analytic_agility(const DynamicsModel& model) {
  return model.kind() == ModelKind::Euclidean2 || model.kind() == ModelKind::Euclidean3 ||
         model.kind() == ModelKind::ScaledEuclidean2;
}

double analytic_agility(const DynamicsModel& model, const WorkspacePoint& x) {
  const double c = model.c();
  switch (model.kind()) {
    case ModelKind::Euclidean2: return std::numbers::pi * c * c;
    case ModelKind::Euclidean3: return 4.0 / 3.0 * std::numbers::pi * c * c * c;
    case ModelKind::ScaledEuclidean2: {
      const double s = c * model.sigma().at(x[0]);
      return std::numbers::pi * s * s;
    }
    default: fail(ErrorKind::InvalidArgument, "no closed-form agility for " + model.id());
  }
}

GridField analytic_agility_field(const DynamicsModel& model, const GridField& grid) {
  GridField g = grid;
  for (std::size_t i = 0; i < g.size(); ++i) {
    auto c = g.center(i);
    g.values[i] = analytic_agility(model, {c[0], c[1], 0.0});
  }
  return g;
}

}  // namespace dstsp::agility
