#include <cmath>
#include <numbers>

#include "doctest.h"
#include "dstsp/dynamics.hpp"
#include "dstsp/error.hpp"

using namespace dstsp;
constexpr double pi = std::numbers::pi;

namespace {

Configuration cfg(double x, double y, double t = 0.0) { return Configuration{{x, y, t}}; }

Configuration random_config(const DynamicsModel& m, Rng& rng, double span) {
  Configuration q{{rng.uniform(-span, span), rng.uniform(-span, span), 0.0}};
  if (m.kind() == ModelKind::Euclidean3) q.v[2] = rng.uniform(-span, span);
  if (m.has_heading()) q.v[2] = rng.uniform(0.0, 2 * pi);
  return q;
}

std::vector<DynamicsModel> all_models() {
  return {DynamicsModel::euclidean2(1.5), DynamicsModel::euclidean3(), DynamicsModel::scaled_euclidean2(ScaleField::split(0.1, 1.0, 2.0)),
          DynamicsModel::reeds_shepp(0.7, 1.3), DynamicsModel::diff_drive(1.0, 2.0)};
}

}  // namespace

TEST_CASE("closed-form integration") {
  auto e2 = DynamicsModel::euclidean2();
  auto q = integrate(e2, cfg(0, 0), {1, 0, 0}, 2.0);
  CHECK(q.x() == doctest::Approx(2.0));
  CHECK(q.y() == doctest::Approx(0.0));
  CHECK_THROWS_AS(integrate(e2, cfg(0, 0), {1, 1, 0}, 1.0), Error);

  auto rs = DynamicsModel::reeds_shepp(1.0);
  q = integrate(rs, cfg(0, 0, 0), {1, 1, 0}, pi / 2);
  CHECK(q.x() == doctest::Approx(1.0));
  CHECK(q.y() == doctest::Approx(1.0));
  CHECK(q.theta() == doctest::Approx(pi / 2));

  // Fine-step explicit integration of the same arc.
  double x = 0, y = 0, th = 0;
  const int steps = 200000;
  const double dt = (pi / 2) / steps;
  for (int i = 0; i < steps; ++i) {
    double mid = th + 0.5 * dt;
    x += std::cos(mid) * dt;
    y += std::sin(mid) * dt;
    th += dt;
  }
  CHECK(q.x() == doctest::Approx(x).epsilon(1e-9));
  CHECK(q.y() == doctest::Approx(y).epsilon(1e-9));

  auto dd = DynamicsModel::diff_drive(1.0, 1.0);
  q = integrate(dd, cfg(0, 0, 0), {0, 1, 0}, pi);
  CHECK(q.x() == 0.0);
  CHECK(q.theta() == doctest::Approx(pi));
  CHECK_THROWS_AS(integrate(rs, cfg(0, 0, 0), {1.5, 0, 0}, 1.0), Error);
}

TEST_CASE("projection drops heading") {
  auto p = project(DynamicsModel::euclidean2(), cfg(3, 4));
  CHECK(p[0] == 3.0);
  CHECK(p[1] == 4.0);
  p = project(DynamicsModel::reeds_shepp(), cfg(1, 2, 0.5));
  CHECK(p[0] == 1.0);
  CHECK(p[2] == 0.0);
  p = project(DynamicsModel::diff_drive(), cfg(0, 0, pi));
  CHECK(p[0] == 0.0);
  CHECK(p[1] == 0.0);
}

TEST_CASE("steering worked examples") {
  CHECK(steer(DynamicsModel::euclidean2(), cfg(0, 0), cfg(3, 4)).duration() == doctest::Approx(5.0));
  auto rs = DynamicsModel::reeds_shepp(1.0);
  CHECK(steer(rs, cfg(0, 0, 0), cfg(0.8, 0, 0)).duration() == doctest::Approx(0.8));
  CHECK(steer_time(rs, cfg(0, 0, 0), cfg(-2.5, 0, 0)) == doctest::Approx(2.5));
  auto dd = DynamicsModel::diff_drive(1.0, 1.0);
  CHECK(steer(dd, cfg(0, 0, 0), cfg(1, 1, pi / 4)).duration() == doctest::Approx(pi / 4 + std::sqrt(2.0)));
  CHECK(point_reach_time(dd, cfg(0, 0, 0), {1, 1, 0}) == doctest::Approx(pi / 4 + std::sqrt(2.0)));
  auto sc = DynamicsModel::scaled_euclidean2(ScaleField::split(0.5, 1.0, 2.0));
  CHECK(steer_time(sc, cfg(0.25, 0.3), cfg(0.75, 0.3)) == doctest::Approx(0.25 + 0.125));
}

TEST_CASE("steer reaches the goal and is symmetric") {
  Rng rng(42);
  for (const auto& m : all_models()) {
    for (int rep = 0; rep < 300; ++rep) {
      auto a = random_config(m, rng, 2.0), b = random_config(m, rng, 2.0);
      auto traj = steer(m, a, b);
      CHECK(config_gap(m, endpoint(m, traj), b) < 1e-9);
      CHECK(traj.duration() == doctest::Approx(steer_time(m, a, b)).epsilon(1e-12));
      CHECK(std::fabs(steer_time(m, a, b) - steer_time(m, b, a)) < 1e-9);
    }
  }
}

TEST_CASE("steer never loses to a random admissible trajectory") {
  Rng rng(7);
  for (auto m : {DynamicsModel::reeds_shepp(1.0), DynamicsModel::euclidean2()}) {
    for (int rep = 0; rep < 20000; ++rep) {
      Configuration q = random_config(m, rng, 1.0), cur = q;
      double total = 0.0;
      const int pieces = 1 + static_cast<int>(rng.below(5));
      for (int k = 0; k < pieces; ++k) {
        double dt = rng.uniform(0.0, 1.0);
        Control u{rng.below(2) ? 1.0 : -1.0, static_cast<double>(rng.below(3)) - 1.0, 0.0};
        if (!m.has_heading()) u = {std::cos(dt * 9), std::sin(dt * 9), 0.0};
        cur = integrate(m, cur, u, dt);
        total += dt;
      }
      CHECK(steer_time(m, q, cur) <= total + 1e-9);
    }
  }
}

TEST_CASE("reversal") {
  auto e2 = DynamicsModel::euclidean2();
  auto t = steer(e2, cfg(0, 0), cfg(1, 0));
  auto r = reverse_trajectory(e2, t);
  CHECK(r.start.x() == doctest::Approx(1.0));
  CHECK(endpoint(e2, r).x() == doctest::Approx(0.0));
  CHECK(r.duration() == t.duration());
  auto rr = reverse_trajectory(e2, r);
  REQUIRE(rr.segments.size() == t.segments.size());
  CHECK(rr.segments[0].control == t.segments[0].control);

  auto rs = DynamicsModel::reeds_shepp(1.0);
  Trajectory arc{cfg(0, 0, 0), {{{1, 1, 0}, 1.0}}};
  auto back = reverse_trajectory(rs, arc);
  CHECK(back.segments[0].control[0] == -1.0);
  CHECK(back.segments[0].control[1] == 1.0);
  CHECK(config_gap(rs, endpoint(rs, back), arc.start) < 1e-12);
  CHECK(back.duration() == arc.duration());

  Rng rng(3);
  for (const auto& m : all_models()) {
    for (int rep = 0; rep < 50; ++rep) {
      auto a = random_config(m, rng, 1.0), b = random_config(m, rng, 1.0);
      auto rev = reverse_trajectory(m, steer(m, a, b));
      CHECK(config_gap(m, endpoint(m, rev), a) < 1e-9);
    }
  }
}

TEST_CASE("reachable samples respect the speed limit") {
  Rng rng(1);
  for (const auto& m : all_models()) {
    auto q = random_config(m, rng, 0.5);
    const double eps = 0.3;
    auto pts = sample_reachable(m, q, eps, 2000, rng);
    CHECK(pts.size() == 2000);
    for (const auto& p : pts) CHECK(workspace_distance(p, project(m, q)) <= m.speed_limit() * eps * (1 + 1e-12));
  }
  auto rs = DynamicsModel::reeds_shepp(1.0);
  const double eps = 0.1;
  for (const auto& p : sample_reachable(rs, cfg(0, 0, 0), eps, 20000, rng)) CHECK(std::fabs(p[1]) <= eps * eps / 2 * (1 + 1e-9));
  CHECK_THROWS_AS(sample_reachable(rs, cfg(0, 0, 0), eps, 0, rng), Error);
}

TEST_CASE("workspace speed along trajectories") {
  Rng rng(8);
  for (const auto& m : all_models()) {
    auto a = random_config(m, rng, 1.0), b = random_config(m, rng, 1.0);
    auto traj = steer(m, a, b);
    const double T = traj.duration();
    for (int k = 0; k < 100; ++k) {
      double t0 = rng.uniform(0, T), t1 = rng.uniform(0, T);
      if (t0 > t1) std::swap(t0, t1);
      auto p0 = project(m, state_at(m, traj, t0)), p1 = project(m, state_at(m, traj, t1));
      CHECK(workspace_distance(p0, p1) <= m.speed_limit() * (t1 - t0) + 1e-9);
    }
  }
}
