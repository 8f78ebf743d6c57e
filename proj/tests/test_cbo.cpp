#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "dstsp/bounds.hpp"
#include "dstsp/cbo.hpp"
#include "dstsp/error.hpp"

using namespace dstsp;
using namespace dstsp::cbo;

namespace {

std::vector<WorkspacePoint> uniform_targets(std::size_t n, Rng& rng, double lo = 0.0, double hi = 1.0) {
  std::vector<WorkspacePoint> pts(n, WorkspacePoint{0, 0, 0});
  for (auto& p : pts) p = {rng.uniform(lo, hi), rng.uniform(lo, hi), 0};
  return pts;
}

// Enumerates every ordered subset through permutations of the full index set.
std::size_t permutation_oracle(const DynamicsModel& m, const GridField& cost, const std::vector<WorkspacePoint>& pts,
                               double lambda) {
  std::vector<std::size_t> idx(pts.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::size_t best = pts.empty() ? 0 : 1;
  do {
    double spent = 0;
    std::size_t k = 1;
    while (k < idx.size()) {
      spent += pair_cost(m, cost, pts[idx[k - 1]], pts[idx[k]]);
      if (spent > lambda) break;
      ++k;
    }
    best = std::max(best, k);
  } while (std::next_permutation(idx.begin(), idx.end()));
  return best;
}

}  // namespace

TEST_CASE("cost length of simple trajectories") {
  const auto m = DynamicsModel::euclidean2();
  auto flat = GridField::unit_square(64, 2.5);
  Trajectory t{lift(m, {0.1, 0.1, 0}), {{{1, 0, 0}, 0.5}, {{0, 1, 0}, 0.3}}};
  CHECK(cost_length(m, t, flat) == doctest::Approx(2.5 * 0.8).epsilon(1e-12));
  CHECK(cost_length(m, Trajectory{lift(m, {0.5, 0.5, 0}), {}}, flat) == 0.0);

  auto split = GridField::from_function({0, 0}, 1.0 / 64, 64, 64, [](double x, double) { return x < 0.5 ? 1.0 : 3.0; });
  Trajectory across{lift(m, {0.25, 0.4, 0}), {{{1, 0, 0}, 0.5}}};
  CHECK(std::abs(cost_length(m, across, split) - (1.0 + 3.0) * 0.5 / 2) < 1e-6);

  Trajectory outside{lift(m, {0.9, 0.5, 0}), {{{1, 0, 0}, 0.5}}};
  try {
    cost_length(m, outside, flat);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OutOfGrid);
  }

  // Reeds-Shepp arcs: constant field gives c times the duration.
  const auto rs = DynamicsModel::reeds_shepp(0.2);
  auto arc = steer(rs, lift(rs, {0.4, 0.4, 0}, 0.0), lift(rs, {0.6, 0.5, 0}, 1.0));
  CHECK(cost_length(rs, arc, flat) == doctest::Approx(2.5 * arc.duration()).epsilon(1e-9));
}

TEST_CASE("greedy orienteering extremes") {
  const auto m = DynamicsModel::euclidean2();
  auto cost = GridField::unit_square(32, 1.0);
  Rng rng(4);
  auto pts = uniform_targets(20, rng);
  Rng r1(1);
  CHECK(greedy_orienteering(m, cost, pts, 0.0, r1) == 1);
  Rng r2(1);
  CHECK(greedy_orienteering(m, cost, pts, 100.0, r2) == 20);
  Rng r3(1);
  CHECK(greedy_orienteering(m, cost, {}, 1.0, r3) == 0);
  CHECK_THROWS_AS(greedy_orienteering(m, cost, pts, -1.0, r3), Error);
}

TEST_CASE("brute force thresholds and oracle agreement") {
  const auto m = DynamicsModel::euclidean2();
  auto cost = GridField::unit_square(32, 2.0);
  std::vector<WorkspacePoint> two{{0.2, 0.5, 0}, {0.6, 0.5, 0}};
  const double c = pair_cost(m, cost, two[0], two[1]);
  CHECK(c == doctest::Approx(0.8));
  CHECK(brute_cbo_small(m, cost, two, 0.0) == 1);
  CHECK(brute_cbo_small(m, cost, two, c - 1e-9) == 1);
  CHECK(brute_cbo_small(m, cost, two, c) == 2);
  Rng big(1);
  CHECK_THROWS_AS(brute_cbo_small(m, cost, uniform_targets(9, big), 1.0), Error);

  auto varied = GridField::from_function({0, 0}, 1.0 / 32, 32, 32, [](double x, double y) { return 1.0 + x + 2 * y * y; });
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    Rng rng(seed);
    auto pts = uniform_targets(6, rng, 0.05, 0.95);
    const double lambda = 0.3 + 0.1 * static_cast<double>(seed % 5);
    const auto brute = brute_cbo_small(m, varied, pts, lambda);
    CHECK(brute == permutation_oracle(m, varied, pts, lambda));
    Rng g(seed);
    CHECK(brute >= greedy_orienteering(m, varied, pts, lambda, g));
  }
}

TEST_CASE("cbo bound arithmetic") {
  CHECK(cbo_bound(10.568, 0.5, 100, 2, 0.1) == doctest::Approx(58.124));
  CHECK(cbo_bound(10.0, 0.5, 0, 2, 0.1) == 0.0);
  const double base = cbo_bound(8.0, 0.5, 100, 2, 0.2);
  CHECK(cbo_bound(9.0, 0.5, 100, 2, 0.2) > base);
  CHECK(cbo_bound(8.0, 0.6, 100, 2, 0.2) > base);
  CHECK(cbo_bound(8.0, 0.5, 200, 2, 0.2) > base);
  CHECK(cbo_bound(8.0, 0.5, 100, 2, 0.3) > base);
}

TEST_CASE("targets within a cost radius balance against eps^gamma n") {
  const auto m = DynamicsModel::euclidean2();
  auto f = GridField::from_function({0, 0}, 1.0 / 64, 64, 64, [](double x, double) { return 2 * x; });
  auto g = GridField::unit_square(64, std::numbers::pi);
  const double zeta = 0.05;
  auto cost = bounds::cost_field(f, g, zeta, 2.0);
  const std::size_t n = 10000;
  Rng rng(11);
  auto targets = bounds::sample_density(f, n, rng);
  const double cmin = cost.min();
  for (double eps : {0.05, 0.1}) {
    double total = 0;
    const int anchors = 40;
    for (int a = 0; a < anchors; ++a) {
      const WorkspacePoint q{rng.uniform(0.15, 0.85), rng.uniform(0.15, 0.85), 0};
      for (const auto& x : targets) {
        if (workspace_distance(q, x) > eps / cmin) continue;
        if (pair_cost(m, cost, q, x) <= eps) total += 1;
      }
    }
    const double mean = total / anchors;
    CHECK(mean <= 1.5 * eps * eps * static_cast<double>(n) * 1.1);
    CHECK(mean > 0.3 * eps * eps * static_cast<double>(n));
  }
}
