#include "dstsp/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dstsp/error.hpp"
#include "dstsp/reeds_shepp.hpp"

namespace dstsp {
namespace {

constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * pi;
constexpr double control_tol = 1e-12;

void check_unit(double value) {
  if (!(std::fabs(value) <= 1.0 + control_tol)) fail(ErrorKind::ControlOutOfRange, "control component outside [-1, 1]");
}

void check_norm(const Control& u, int dim) {
  double norm2 = 0.0;
  for (int i = 0; i < dim; ++i) norm2 += u[i] * u[i];
  if (!(norm2 <= 1.0 + 2 * control_tol)) fail(ErrorKind::ControlOutOfRange, "control norm exceeds 1");
}

// Moves along a circular arc of signed curvature kappa by signed arc length s.
Configuration arc(const Configuration& q, double s, double kappa) {
  Configuration out = q;
  const double th = q.theta();
  if (std::fabs(kappa * s) < 1e-12) {
    out.v[0] += s * std::cos(th);
    out.v[1] += s * std::sin(th);
    out.v[2] = normalize_angle(th + kappa * s);
    return out;
  }
  const double th1 = th + kappa * s;
  out.v[0] += (std::sin(th1) - std::sin(th)) / kappa;
  out.v[1] -= (std::cos(th1) - std::cos(th)) / kappa;
  out.v[2] = normalize_angle(th1);
  return out;
}

// Straight motion at speed c*sigma(x) along unit-norm-bounded u.
Configuration scaled_move(const ScaleField& sigma, double c, const Configuration& q, const Control& u, double dt) {
  Configuration out = q;
  double remaining = dt;
  const double ux = u[0], uy = u[1];
  for (int guard = 0; remaining > 0.0 && guard < 1 << 20; ++guard) {
    const double x = out.v[0];
    std::size_t i;
    if (ux < 0) {
      i = static_cast<std::size_t>(std::lower_bound(sigma.breaks.begin(), sigma.breaks.end(), x) - sigma.breaks.begin());
    } else {
      i = sigma.stripe(x);
    }
    const double speed = c * sigma.values[i];
    double t_edge = remaining;
    double edge = 0.0;
    bool hits = false;
    if (ux > 0 && i < sigma.breaks.size()) {
      edge = sigma.breaks[i];
      double t = (edge - x) / (speed * ux);
      if (t < remaining) { t_edge = t; hits = true; }
    } else if (ux < 0 && i > 0) {
      edge = sigma.breaks[i - 1];
      double t = (edge - x) / (speed * ux);
      if (t < remaining) { t_edge = t; hits = true; }
    }
    out.v[1] += speed * uy * t_edge;
    out.v[0] = hits ? edge : out.v[0] + speed * ux * t_edge;
    remaining -= t_edge;
  }
  return out;
}

// Time to traverse the segment a->b at speed c*sigma(x).
double scaled_line_time(const ScaleField& sigma, double c, const WorkspacePoint& a, const WorkspacePoint& b) {
  const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
  if (len == 0.0) return 0.0;
  double x0 = a[0], x1 = b[0];
  if (x0 > x1) std::swap(x0, x1);
  if (x1 - x0 <= 0.0) return len / (c * sigma.at(x0));
  double time = 0.0;
  double lo = x0;
  while (lo < x1) {
    std::size_t i = sigma.stripe(lo);
    double hi = (i < sigma.breaks.size()) ? std::min(x1, sigma.breaks[i]) : x1;
    time += (hi - lo) / (x1 - x0) * len / (c * sigma.values[i]);
    lo = hi;
  }
  return time;
}

double rs_heading_time(const DynamicsModel& model, const Configuration& q, const WorkspacePoint& x, double theta) {
  Configuration target = lift(model, x, theta);
  return steer_time(model, q, target);
}

}  // namespace

double Trajectory::duration() const {
  double total = 0.0;
  for (const auto& s : segments) total += s.duration;
  return total;
}

ScaleField ScaleField::constant(double sigma) { return ScaleField{{}, {sigma}}; }

ScaleField ScaleField::split(double x_split, double left, double right) { return ScaleField{{x_split}, {left, right}}; }

std::size_t ScaleField::stripe(double x) const {
  return static_cast<std::size_t>(std::upper_bound(breaks.begin(), breaks.end(), x) - breaks.begin());
}

double ScaleField::min() const { return *std::min_element(values.begin(), values.end()); }
double ScaleField::max() const { return *std::max_element(values.begin(), values.end()); }

DynamicsModel DynamicsModel::euclidean2(double c_pi) {
  DynamicsModel m;
  m.kind_ = ModelKind::Euclidean2;
  m.c_ = c_pi;
  return m;
}

DynamicsModel DynamicsModel::euclidean3(double c_pi) {
  DynamicsModel m = euclidean2(c_pi);
  m.kind_ = ModelKind::Euclidean3;
  return m;
}

DynamicsModel DynamicsModel::scaled_euclidean2(ScaleField sigma, double c) {
  if (sigma.values.size() != sigma.breaks.size() + 1 || sigma.min() <= 0.0)
    fail(ErrorKind::InvalidArgument, "scale field needs positive values, one per stripe");
  if (!std::is_sorted(sigma.breaks.begin(), sigma.breaks.end()))
    fail(ErrorKind::InvalidArgument, "scale field breaks must ascend");
  DynamicsModel m = euclidean2(c);
  m.kind_ = ModelKind::ScaledEuclidean2;
  m.sigma_ = std::move(sigma);
  return m;
}

DynamicsModel DynamicsModel::reeds_shepp(double r_min, double c_pi) {
  if (r_min <= 0.0) fail(ErrorKind::InvalidArgument, "r_min must be positive");
  DynamicsModel m = euclidean2(c_pi);
  m.kind_ = ModelKind::ReedsShepp;
  m.r_min_ = r_min;
  return m;
}

DynamicsModel DynamicsModel::diff_drive(double v_max, double omega_max) {
  if (omega_max <= 0.0) fail(ErrorKind::InvalidArgument, "omega_max must be positive");
  DynamicsModel m = euclidean2(v_max);
  m.kind_ = ModelKind::DiffDrive;
  m.omega_max_ = omega_max;
  return m;
}

std::string DynamicsModel::id() const {
  switch (kind_) {
    case ModelKind::Euclidean2: return "euclidean2";
    case ModelKind::Euclidean3: return "euclidean3";
    case ModelKind::ScaledEuclidean2: return "scaled_euclidean2";
    case ModelKind::ReedsShepp: return "reeds_shepp";
    case ModelKind::DiffDrive: return "diff_drive";
  }
  return "unknown";
}

ModelKind parse_model_kind(const std::string& id) {
  if (id == "euclidean2") return ModelKind::Euclidean2;
  if (id == "euclidean3") return ModelKind::Euclidean3;
  if (id == "scaled_euclidean2") return ModelKind::ScaledEuclidean2;
  if (id == "reeds_shepp") return ModelKind::ReedsShepp;
  if (id == "diff_drive") return ModelKind::DiffDrive;
  fail(ErrorKind::ConfigError, "unknown model '" + id + "'");
}

int DynamicsModel::config_dim() const { return kind_ == ModelKind::Euclidean2 || kind_ == ModelKind::ScaledEuclidean2 ? 2 : 3; }

int DynamicsModel::workspace_dim() const { return kind_ == ModelKind::Euclidean3 ? 3 : 2; }

int DynamicsModel::gamma() const {
  switch (kind_) {
    case ModelKind::Euclidean2:
    case ModelKind::ScaledEuclidean2: return 2;
    default: return 3;
  }
}

std::vector<int> DynamicsModel::box_weights() const {
  switch (kind_) {
    case ModelKind::Euclidean2:
    case ModelKind::ScaledEuclidean2: return {1, 1};
    case ModelKind::Euclidean3: return {1, 1, 1};
    default: return {1, 2};
  }
}

double DynamicsModel::speed_limit() const {
  return kind_ == ModelKind::ScaledEuclidean2 ? c_ * sigma_.max() : c_;
}

double normalize_angle(double theta) {
  double t = std::fmod(theta, two_pi);
  if (t < 0) t += two_pi;
  if (t >= two_pi) t -= two_pi;
  return t;
}

double angle_difference(double a, double b) {
  double d = std::fmod(a - b, two_pi);
  if (d <= -pi) d += two_pi;
  if (d > pi) d -= two_pi;
  return d;
}

Configuration integrate(const DynamicsModel& model, const Configuration& q, const Control& u, double dt) {
  if (dt < 0.0) fail(ErrorKind::InvalidArgument, "negative duration");
  Configuration out = q;
  switch (model.kind()) {
    case ModelKind::Euclidean2:
    case ModelKind::Euclidean3: {
      const int d = model.workspace_dim();
      check_norm(u, d);
      for (int i = 0; i < d; ++i) out.v[i] += model.c() * u[i] * dt;
      return out;
    }
    case ModelKind::ScaledEuclidean2:
      check_norm(u, 2);
      return scaled_move(model.sigma(), model.c(), q, u, dt);
    case ModelKind::ReedsShepp:
      check_unit(u[0]);
      check_unit(u[1]);
      return arc(q, model.c() * u[0] * dt, u[1] / model.r_min());
    case ModelKind::DiffDrive: {
      check_unit(u[0]);
      check_unit(u[1]);
      const double s = model.c() * u[0] * dt;
      const double turn = model.omega_max() * u[1] * dt;
      if (s == 0.0) {
        out.v[2] = normalize_angle(q.theta() + turn);
        return out;
      }
      return arc(q, s, turn / s);
    }
  }
  return out;
}

WorkspacePoint project(const DynamicsModel& model, const Configuration& q) {
  WorkspacePoint x{};
  for (int i = 0; i < model.workspace_dim(); ++i) x[i] = q.v[i];
  return x;
}

Configuration lift(const DynamicsModel& model, const WorkspacePoint& x, double theta) {
  Configuration q;
  for (int i = 0; i < model.workspace_dim(); ++i) q.v[i] = x[i];
  if (model.has_heading()) q.v[2] = normalize_angle(theta);
  return q;
}

Configuration endpoint(const DynamicsModel& model, const Trajectory& traj) {
  Configuration q = traj.start;
  for (const auto& s : traj.segments) q = integrate(model, q, s.control, s.duration);
  return q;
}

Configuration state_at(const DynamicsModel& model, const Trajectory& traj, double t) {
  Configuration q = traj.start;
  for (const auto& s : traj.segments) {
    if (t <= s.duration) return integrate(model, q, s.control, std::max(t, 0.0));
    q = integrate(model, q, s.control, s.duration);
    t -= s.duration;
  }
  return q;
}

Trajectory steer(const DynamicsModel& model, const Configuration& q0, const Configuration& q1) {
  Trajectory traj;
  traj.start = q0;
  switch (model.kind()) {
    case ModelKind::Euclidean2:
    case ModelKind::Euclidean3:
    case ModelKind::ScaledEuclidean2: {
      const int d = model.workspace_dim();
      double len = 0.0;
      Control u{};
      for (int i = 0; i < d; ++i) {
        u[i] = q1.v[i] - q0.v[i];
        len += u[i] * u[i];
      }
      len = std::sqrt(len);
      if (len == 0.0) return traj;
      for (int i = 0; i < d; ++i) u[i] /= len;
      double time = model.kind() == ModelKind::ScaledEuclidean2
                        ? scaled_line_time(model.sigma(), model.c(), project(model, q0), project(model, q1))
                        : len / model.c();
      traj.segments.push_back({u, time});
      return traj;
    }
    case ModelKind::ReedsShepp: {
      const double r = model.r_min();
      const double c0 = std::cos(q0.theta()), s0 = std::sin(q0.theta());
      const double dx = q1.x() - q0.x(), dy = q1.y() - q0.y();
      const double x = (dx * c0 + dy * s0) / r, y = (-dx * s0 + dy * c0) / r;
      const rs::Word w = rs::shortest(x, y, angle_difference(q1.theta(), q0.theta()));
      for (int i = 0; i < 5; ++i) {
        if (w.types[i] == rs::Seg::None || w.lengths[i] == 0.0) continue;
        const double dir = w.lengths[i] > 0 ? 1.0 : -1.0;
        const double steer_dir = w.types[i] == rs::Seg::Left ? 1.0 : w.types[i] == rs::Seg::Right ? -1.0 : 0.0;
        traj.segments.push_back({{dir, steer_dir, 0.0}, std::fabs(w.lengths[i]) * r / model.c()});
      }
      return traj;
    }
    case ModelKind::DiffDrive: {
      const double dx = q1.x() - q0.x(), dy = q1.y() - q0.y();
      const double d = std::hypot(dx, dy);
      if (d == 0.0) {
        const double turn = angle_difference(q1.theta(), q0.theta());
        if (turn != 0.0) traj.segments.push_back({{0.0, turn > 0 ? 1.0 : -1.0, 0.0}, std::fabs(turn) / model.omega_max()});
        return traj;
      }
      const double heading = std::atan2(dy, dx);
      double best = std::numeric_limits<double>::infinity();
      double best_t1 = 0.0, best_t2 = 0.0, best_dir = 1.0;
      for (double dir : {1.0, -1.0}) {
        const double h = dir > 0 ? heading : heading + pi;
        const double t1 = angle_difference(h, q0.theta());
        const double t2 = angle_difference(q1.theta(), h);
        const double cost = (std::fabs(t1) + std::fabs(t2)) / model.omega_max() + d / model.c();
        if (cost < best) {
          best = cost;
          best_t1 = t1;
          best_t2 = t2;
          best_dir = dir;
        }
      }
      if (best_t1 != 0.0) traj.segments.push_back({{0.0, best_t1 > 0 ? 1.0 : -1.0, 0.0}, std::fabs(best_t1) / model.omega_max()});
      traj.segments.push_back({{best_dir, 0.0, 0.0}, d / model.c()});
      if (best_t2 != 0.0) traj.segments.push_back({{0.0, best_t2 > 0 ? 1.0 : -1.0, 0.0}, std::fabs(best_t2) / model.omega_max()});
      return traj;
    }
  }
  return traj;
}

double steer_time(const DynamicsModel& model, const Configuration& q0, const Configuration& q1) {
  switch (model.kind()) {
    case ModelKind::Euclidean2:
    case ModelKind::Euclidean3:
      return workspace_distance(project(model, q0), project(model, q1)) / model.c();
    case ModelKind::ScaledEuclidean2:
      return scaled_line_time(model.sigma(), model.c(), project(model, q0), project(model, q1));
    case ModelKind::ReedsShepp: {
      const double r = model.r_min();
      const double c0 = std::cos(q0.theta()), s0 = std::sin(q0.theta());
      const double dx = q1.x() - q0.x(), dy = q1.y() - q0.y();
      const rs::Word w = rs::shortest((dx * c0 + dy * s0) / r, (-dx * s0 + dy * c0) / r,
                                      angle_difference(q1.theta(), q0.theta()));
      return w.total * r / model.c();
    }
    case ModelKind::DiffDrive:
      return steer(model, q0, q1).duration();
  }
  return 0.0;
}

double point_reach_time(const DynamicsModel& model, const Configuration& q, const WorkspacePoint& x) {
  switch (model.kind()) {
    case ModelKind::Euclidean2:
    case ModelKind::Euclidean3:
    case ModelKind::ScaledEuclidean2:
      return steer_time(model, q, lift(model, x));
    case ModelKind::DiffDrive: {
      const double dx = x[0] - q.x(), dy = x[1] - q.y();
      const double d = std::hypot(dx, dy);
      if (d == 0.0) return 0.0;
      const double turn = std::fabs(angle_difference(std::atan2(dy, dx), q.theta()));
      return std::min(turn, pi - turn) / model.omega_max() + d / model.c();
    }
    case ModelKind::ReedsShepp: {
      constexpr int coarse = 72;
      double best = std::numeric_limits<double>::infinity();
      int best_k = 0;
      for (int k = 0; k < coarse; ++k) {
        double t = rs_heading_time(model, q, x, two_pi * k / coarse);
        if (t < best) {
          best = t;
          best_k = k;
        }
      }
      // Golden-section refinement around the best coarse heading.
      const double step = two_pi / coarse;
      double a = two_pi * best_k / coarse - step, b = a + 2 * step;
      const double g = (std::sqrt(5.0) - 1.0) / 2.0;
      double c1 = b - g * (b - a), c2 = a + g * (b - a);
      double f1 = rs_heading_time(model, q, x, c1), f2 = rs_heading_time(model, q, x, c2);
      for (int it = 0; it < 40; ++it) {
        if (f1 < f2) {
          b = c2; c2 = c1; f2 = f1; c1 = b - g * (b - a); f1 = rs_heading_time(model, q, x, c1);
        } else {
          a = c1; c1 = c2; f1 = f2; c2 = a + g * (b - a); f2 = rs_heading_time(model, q, x, c2);
        }
      }
      return std::min({best, f1, f2});
    }
  }
  return 0.0;
}

Trajectory reverse_trajectory(const DynamicsModel& model, const Trajectory& traj) {
  if (!model.symmetric()) fail(ErrorKind::NotSymmetric, "model has no exact reversal");
  Trajectory rev;
  rev.start = endpoint(model, traj);
  rev.segments.reserve(traj.segments.size());
  for (auto it = traj.segments.rbegin(); it != traj.segments.rend(); ++it) {
    Segment s = *it;
    switch (model.kind()) {
      case ModelKind::ReedsShepp:
        s.control[0] = -s.control[0];
        break;
      default:
        for (double& c : s.control) c = -c;
        break;
    }
    rev.segments.push_back(s);
  }
  return rev;
}

std::vector<WorkspacePoint> sample_reachable(const DynamicsModel& model, const Configuration& q, double eps,
                                             std::size_t n, Rng& rng) {
  if (!(eps > 0.0)) fail(ErrorKind::InvalidArgument, "eps must be positive");
  if (n == 0) fail(ErrorKind::InvalidArgument, "sample count must be >= 1");
  std::vector<WorkspacePoint> out;
  out.reserve(n);
  const int d = model.workspace_dim();
  for (std::size_t i = 0; i < n; ++i) {
    if (!model.has_heading()) {
      Control u{};
      double norm = 0.0;
      do {
        norm = 0.0;
        for (int k = 0; k < d; ++k) {
          u[k] = rng.normal();
          norm += u[k] * u[k];
        }
      } while (norm == 0.0);
      norm = std::sqrt(norm);
      for (int k = 0; k < d; ++k) u[k] /= norm;
      const double duration = eps * std::pow(rng.uniform(), 1.0 / d);
      out.push_back(project(model, integrate(model, q, u, duration)));
      continue;
    }
    const int switches = 1 + static_cast<int>(rng.below(4));
    std::array<double, 6> times{};
    times[0] = 0.0;
    for (int k = 1; k <= switches; ++k) times[k] = eps * rng.uniform();
    times[switches + 1] = eps;
    std::sort(times.begin() + 1, times.begin() + switches + 1);
    Configuration cur = q;
    for (int k = 0; k <= switches; ++k) {
      Control u{};
      if (model.kind() == ModelKind::ReedsShepp) {
        u[0] = rng.below(2) ? 1.0 : -1.0;
        u[1] = static_cast<double>(rng.below(3)) - 1.0;
      } else {
        u[0] = static_cast<double>(rng.below(3)) - 1.0;
        u[1] = static_cast<double>(rng.below(3)) - 1.0;
      }
      cur = integrate(model, cur, u, times[k + 1] - times[k]);
    }
    out.push_back(project(model, cur));
  }
  return out;
}

double workspace_distance(const WorkspacePoint& a, const WorkspacePoint& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double config_gap(const DynamicsModel& model, const Configuration& a, const Configuration& b) {
  double gap = 0.0;
  for (int i = 0; i < model.config_dim(); ++i) {
    double d = (model.has_heading() && i == 2) ? angle_difference(a.v[i], b.v[i]) : a.v[i] - b.v[i];
    gap = std::max(gap, std::fabs(d));
  }
  return gap;
}

}  // namespace dstsp
