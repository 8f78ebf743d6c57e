#pragma once

#include <array>
#include <string>
#include <vector>

#include "dstsp/rng.hpp"

namespace dstsp {

using Vec3 = std::array<double, 3>;

// Model-dependent meaning: (x, y[, z]) for euclidean, (x, y, theta) otherwise.
struct Configuration {
  Vec3 v{};
  double x() const { return v[0]; }
  double y() const { return v[1]; }
  double theta() const { return v[2]; }
};

using WorkspacePoint = Vec3;  // unused trailing coordinates are 0
using Control = Vec3;

struct Segment {
  Control control{};
  double duration = 0.0;
};

struct Trajectory {
  Configuration start;
  std::vector<Segment> segments;
  double duration() const;
};

enum class ModelKind { Euclidean2, Euclidean3, ScaledEuclidean2, ReedsShepp, DiffDrive };

// Piecewise-constant speed scale over vertical stripes in x:
// values[i] holds on [breaks[i-1], breaks[i]).
struct ScaleField {
  std::vector<double> breaks;
  std::vector<double> values{1.0};

  static ScaleField constant(double sigma);
  static ScaleField split(double x_split, double left, double right);
  std::size_t stripe(double x) const;
  double at(double x) const { return values[stripe(x)]; }
  double min() const;
  double max() const;
};

class DynamicsModel {
 public:
  static DynamicsModel euclidean2(double c_pi = 1.0);
  static DynamicsModel euclidean3(double c_pi = 1.0);
  static DynamicsModel scaled_euclidean2(ScaleField sigma, double c = 1.0);
  static DynamicsModel reeds_shepp(double r_min = 1.0, double c_pi = 1.0);
  static DynamicsModel diff_drive(double v_max = 1.0, double omega_max = 1.0);

  ModelKind kind() const { return kind_; }
  std::string id() const;
  int config_dim() const;
  int workspace_dim() const;
  bool symmetric() const { return true; }
  bool has_heading() const { return kind_ == ModelKind::ReedsShepp || kind_ == ModelKind::DiffDrive; }
  // Workspace small-time constraint factor of the model.
  int gamma() const;
  // Per-axis box exponents in adapted workspace coordinates.
  std::vector<int> box_weights() const;
  // Maximum workspace speed.
  double speed_limit() const;

  double c() const { return c_; }
  double r_min() const { return r_min_; }
  double omega_max() const { return omega_max_; }
  const ScaleField& sigma() const { return sigma_; }

 private:
  ModelKind kind_ = ModelKind::Euclidean2;
  double c_ = 1.0;
  double r_min_ = 1.0;
  double omega_max_ = 1.0;
  ScaleField sigma_;
};

ModelKind parse_model_kind(const std::string& id);

double normalize_angle(double theta);          // into [0, 2pi)
double angle_difference(double a, double b);   // a - b wrapped into (-pi, pi]

Configuration integrate(const DynamicsModel& model, const Configuration& q, const Control& u, double dt);
WorkspacePoint project(const DynamicsModel& model, const Configuration& q);
Configuration lift(const DynamicsModel& model, const WorkspacePoint& x, double theta = 0.0);

Configuration endpoint(const DynamicsModel& model, const Trajectory& traj);
Configuration state_at(const DynamicsModel& model, const Trajectory& traj, double t);

Trajectory steer(const DynamicsModel& model, const Configuration& q0, const Configuration& q1);
double steer_time(const DynamicsModel& model, const Configuration& q0, const Configuration& q1);
// Least time from q to any configuration above workspace point x.
double point_reach_time(const DynamicsModel& model, const Configuration& q, const WorkspacePoint& x);

Trajectory reverse_trajectory(const DynamicsModel& model, const Trajectory& traj);

// Endpoints of random admissible controls of total duration <= eps.
std::vector<WorkspacePoint> sample_reachable(const DynamicsModel& model, const Configuration& q, double eps,
                                             std::size_t n, Rng& rng);

double workspace_distance(const WorkspacePoint& a, const WorkspacePoint& b);
// Max coordinate gap, with theta compared modulo 2pi for heading models.
double config_gap(const DynamicsModel& model, const Configuration& a, const Configuration& b);

}  // namespace dstsp
