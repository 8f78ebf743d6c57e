#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "dstsp/error.hpp"
#include "dstsp/planner.hpp"

using namespace dstsp;
using namespace dstsp::planner;

namespace {

std::vector<WorkspacePoint> uniform_targets(std::size_t n, int dim, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<WorkspacePoint> pts(n, WorkspacePoint{0, 0, 0});
  for (auto& p : pts)
    for (int i = 0; i < dim; ++i) p[i] = rng.uniform();
  return pts;
}

// Replays the tour and checks visits, timing and the cell bound.
void check_tour(const DynamicsModel& m, const hcs::HcsCover& cover, const std::vector<WorkspacePoint>& targets,
                const Tour& tour) {
  REQUIRE(tour.visited.size() == targets.size());
  std::vector<int> seen(targets.size(), 0);
  double last = 0.0;
  for (const auto& v : tour.visited) {
    ++seen[v.target];
    CHECK(v.time >= last);
    last = v.time;
    CHECK(workspace_distance(v.position, targets[v.target]) < 1e-7);
    const auto at = project(m, state_at(m, tour.trajectory, v.time));
    CHECK(workspace_distance(at, targets[v.target]) < 1e-6);
  }
  CHECK(std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; }));
  CHECK(tour.trajectory.duration() == doctest::Approx(tour.total_time).epsilon(1e-9));
  CHECK(tour.total_time == doctest::Approx(tour.roots_time + tour.cells_time).epsilon(1e-12));
  CHECK(tour.cells_time <= cells_bound(cover, targets) * (1 + 1e-9));
}

double brute_tsp_e2(const std::vector<WorkspacePoint>& pts) {
  std::vector<std::size_t> idx(pts.size());
  std::iota(idx.begin(), idx.end(), 0);
  double best = 1e300;
  do {
    double t = 0;
    for (std::size_t i = 0; i + 1 < idx.size(); ++i) t += workspace_distance(pts[idx[i]], pts[idx[i + 1]]);
    best = std::min(best, t);
  } while (std::next_permutation(idx.begin(), idx.end()));
  return best;
}

}  // namespace

TEST_CASE("root depth") {
  CHECK(root_depth(0, 4) == 1);
  CHECK(root_depth(1, 4) == 1);
  CHECK(root_depth(2, 4) == 2);
  CHECK(root_depth(4, 4) == 2);
  CHECK(root_depth(5, 4) == 3);
  CHECK(root_depth(64, 8) == 3);
}

TEST_CASE("root tour on a lattice is near the serpentine length") {
  const auto m = DynamicsModel::euclidean2();
  std::vector<Configuration> anchors;
  for (int y = 0; y < 6; ++y)
    for (int x = 0; x < 6; ++x) anchors.push_back(lift(m, {0.1 + 0.2 * x, 0.1 + 0.2 * y, 0}));
  auto t = roots_tour(m, anchors);
  auto sorted = t.order;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) CHECK(sorted[i] == i);
  CHECK(t.time >= 35 * 0.2 - 1e-9);
  CHECK(t.time <= 1.2 * 35 * 0.2);
  CHECK(roots_tour(m, {anchors[0]}).time == 0.0);
  CHECK_THROWS_AS(roots_tour(m, {}), Error);
}

TEST_CASE("root tour on random anchors stays within 1.25 of the exact path") {
  const auto m = DynamicsModel::euclidean2();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto pts = uniform_targets(8, 2, seed);
    std::vector<Configuration> anchors;
    for (auto& p : pts) anchors.push_back(lift(m, p));
    const double exact = brute_tsp_e2(pts);
    CHECK(exact_small_tsp(m, pts) == doctest::Approx(exact).epsilon(1e-12));
    CHECK(roots_tour(m, anchors).time <= 1.25 * exact);
  }
}

TEST_CASE("exact small tsp") {
  const auto m = DynamicsModel::euclidean2();
  CHECK(exact_small_tsp(m, {}) == 0.0);
  CHECK(exact_small_tsp(m, {{0.3, 0.3, 0}}) == 0.0);
  CHECK(exact_small_tsp(m, {{0, 0, 0}, {1, 0, 0}, {0.5, 0, 0}}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(exact_small_tsp(m, uniform_targets(9, 2, 1)), Error);
  CHECK_THROWS_AS(exact_small_tsp(DynamicsModel::reeds_shepp(), uniform_targets(3, 2, 1), 9), Error);
  // More headings can only help.
  const auto rs = DynamicsModel::reeds_shepp(0.2);
  auto pts = uniform_targets(5, 2, 3);
  CHECK(exact_small_tsp(rs, pts, 8) <= exact_small_tsp(rs, pts, 4) + 1e-12);
  CHECK(exact_small_tsp(rs, pts, 4) <= exact_small_tsp(rs, pts, 1) + 1e-12);
  CHECK(exact_small_tsp(rs, pts, 8) >= brute_tsp_e2(pts) - 1e-9);
}

TEST_CASE("planner tours visit every target and respect the cell bound") {
  struct Case {
    DynamicsModel m;
    std::size_t n;
  };
  std::vector<Case> cases{{DynamicsModel::euclidean2(), 800},
                          {DynamicsModel::euclidean3(), 500},
                          {DynamicsModel::scaled_euclidean2(ScaleField::split(0.5, 1.0, 2.0)), 600},
                          {DynamicsModel::reeds_shepp(0.5), 300}};
  for (const auto& c : cases) {
    const auto support = hcs::Box::unit(c.m.workspace_dim());
    const double eps0 = choose_eps0(c.m, support, c.n, 2.0);
    const auto cover = hcs::build_cover(c.m, support, eps0);
    const auto targets = uniform_targets(c.n, c.m.workspace_dim(), 17 + c.n);
    DstspPlanner planner(c.m, cover);
    auto tour = planner.solve(targets);
    check_tour(c.m, cover, targets, tour);
    CHECK(tour.roots_time == doctest::Approx(planner.root_tour().time));
    CHECK(tour.total_time <= trivial_bound(c.n, c.m, support, 128));
    auto quiet = planner.solve(targets, {false, 4});
    CHECK(quiet.total_time == tour.total_time);
    CHECK(quiet.trajectory.segments.empty());
    for (std::size_t i = 0; i < tour.visited.size(); ++i) CHECK(quiet.visited[i].target == tour.visited[i].target);
  }
}

TEST_CASE("planner on few targets is never shorter than the exact tour") {
  for (const auto& m : {DynamicsModel::euclidean2(), DynamicsModel::reeds_shepp(0.3)}) {
    const auto support = hcs::Box::unit(2);
    const auto cover = hcs::build_cover(m, support, choose_eps0(m, support, 6));
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      auto targets = uniform_targets(6, 2, 100 + seed);
      auto tour = solve_dstsp(m, cover, targets, {false, 1});
      CHECK(tour.total_time >= exact_small_tsp(m, targets, 8) - 1e-9);
    }
  }
}

TEST_CASE("planner errors and empty input") {
  const auto m = DynamicsModel::euclidean2();
  const auto cover = hcs::build_cover(m, hcs::Box::unit(2), 0.2);
  DstspPlanner planner(m, cover);
  auto empty = planner.solve({});
  CHECK(empty.total_time == 0.0);
  CHECK(empty.visited.empty());
  try {
    planner.solve({{0.5, 0.5, 0}, {1.5, 0.5, 0}});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TargetOutsideCover);
  }
  // Points on the closed upper boundary are accepted.
  CHECK(planner.solve({{1.0, 1.0, 0}}).visited.size() == 1);
}

TEST_CASE("eps0 snaps to an exact tiling") {
  const auto support = hcs::Box::unit(2);
  for (const auto& m : {DynamicsModel::euclidean2(), DynamicsModel::euclidean3(), DynamicsModel::reeds_shepp(0.5)}) {
    for (std::size_t n : {10u, 1000u, 100000u}) {
      const auto box = hcs::Box::unit(m.workspace_dim());
      const double eps = choose_eps0(m, box, n, 1.5);
      const double raw = 1.5 * std::pow(static_cast<double>(n), -1.0 / m.gamma());
      CHECK(eps == doctest::Approx(raw).epsilon(0.5));
      const double k = 1.0 / (2.0 * hcs::max_half_widths(m, eps, 1.0)[0]);
      CHECK(std::abs(k - std::round(k)) < 1e-9);
    }
  }
  (void)support;
  CHECK_THROWS_AS(choose_eps0(DynamicsModel::euclidean2(), support, 10, 0.0), Error);
}

TEST_CASE("trivial bound is linear and covers the diameter") {
  const auto m = DynamicsModel::euclidean2();
  const auto support = hcs::Box::unit(2);
  const double b1 = trivial_bound(1, m, support);
  CHECK(trivial_bound(10, m, support) == doctest::Approx(10 * b1));
  CHECK(b1 > 1.2 * 1.2);
  CHECK(b1 <= 1.2 * std::sqrt(2.0));
  CHECK(trivial_bound(0, m, support) == 0.0);
}
