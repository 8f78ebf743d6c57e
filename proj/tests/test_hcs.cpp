#include <cmath>
#include <functional>
#include <numbers>

#include "doctest.h"
#include "dstsp/error.hpp"
#include "dstsp/hcs.hpp"
#include "json.hpp"

using namespace dstsp;
using namespace dstsp::hcs;

namespace {

constexpr double pi = std::numbers::pi;

void walk(const Cell& c, const std::function<void(const Cell&)>& fn) {
  fn(c);
  for (const auto& ch : c.children) walk(ch, fn);
}

std::vector<DynamicsModel> hcs_models() {
  return {DynamicsModel::euclidean2(), DynamicsModel::euclidean3(), DynamicsModel::scaled_euclidean2(ScaleField::constant(2.0)),
          DynamicsModel::reeds_shepp(1.0), DynamicsModel::reeds_shepp(0.5, 2.0)};
}

}  // namespace

TEST_CASE("children per model") {
  auto e2 = build_hcs(DynamicsModel::euclidean2(), {{0, 0, 0}}, 0.2, 1);
  CHECK(e2.children.size() == 4);
  CHECK(e2.children[0].box.width(0) == doctest::Approx(e2.box.width(0) / 2));
  CHECK(e2.children[0].eps == doctest::Approx(0.1));
  auto e3 = build_hcs(DynamicsModel::euclidean3(), {{0, 0, 0}}, 0.2, 1);
  CHECK(e3.children.size() == 8);
  auto rs = build_hcs(DynamicsModel::reeds_shepp(), {{0, 0, 0}}, 0.2, 1);
  CHECK(rs.children.size() == 8);
  CHECK(rs.children[0].box.width(0) == doctest::Approx(rs.box.width(0) / 2));
  CHECK(rs.children[0].box.width(1) == doctest::Approx(rs.box.width(1) / 4));
  CHECK(rs.box.width(1) / 2 == doctest::Approx(0.1 * 0.04));
  CHECK_THROWS_AS(build_hcs(DynamicsModel::diff_drive(), {{0, 0, 0}}, 0.2, 1), Error);
  CHECK_THROWS_AS(build_hcs(DynamicsModel::reeds_shepp(), {{0, 0, 1.0}}, 0.2, 1), Error);
}

TEST_CASE("children partition their parent") {
  Rng rng(1);
  for (const auto& m : hcs_models()) {
    auto root = build_hcs(m, lift(m, {0.5, 0.5, 0.5}, 0.0), 0.2, 2);
    walk(root, [&](const Cell& c) {
      if (c.children.empty()) return;
      double vol = 0;
      for (const auto& ch : c.children) vol += ch.box.volume();
      CHECK(vol == doctest::Approx(c.box.volume()).epsilon(1e-12));
      for (int t = 0; t < 200; ++t) {
        WorkspacePoint x{0, 0, 0};
        for (int i = 0; i < c.box.dim; ++i) x[i] = rng.uniform(c.box.lo[i], c.box.hi[i]);
        int hits = 0;
        for (const auto& ch : c.children) hits += ch.box.contains(x);
        CHECK(hits == 1);
        CHECK(c.children[child_index(c.box, m.box_weights(), 2, x)].box.contains(x));
      }
    });
  }
}

TEST_CASE("child anchors are reachable and the tree stays within 3 eps0") {
  for (const auto& m : hcs_models()) {
    const double eps0 = 0.2;
    auto root = build_hcs(m, lift(m, {0.5, 0.5, 0.5}, 0.0), eps0, 3);
    std::function<void(const Cell&, double)> check = [&](const Cell& c, double chain) {
      CHECK(chain <= 3 * eps0);
      for (const auto& ch : c.children) {
        const double t = steer_time(m, c.anchor, ch.anchor);
        CHECK(t <= c.eps * (1 + 1e-6));
        check(ch, chain + t);
      }
    };
    check(root, 0.0);
  }
}

TEST_CASE("cell boxes lie in the reachable set") {
  Rng rng(2);
  for (const auto& m : hcs_models()) {
    for (double eps : {0.4, 0.1, 0.01}) {
      auto cell = build_hcs(m, lift(m, {0.5, 0.5, 0.5}, 0.0), eps, 0);
      auto a = measure_alpha(cell, m, 1.0, 2000, rng);
      CHECK(a.reachable_fraction == 1.0);
    }
  }
}

TEST_CASE("alpha measurements") {
  Rng rng(3);
  auto m = DynamicsModel::euclidean2();
  auto cell = build_hcs(m, {{0, 0, 0}}, 0.3, 0);
  CHECK(measure_alpha(cell, m, pi, 1000, rng).alpha == doctest::Approx(2 / pi));
  Cell side_eps = cell;
  for (int i = 0; i < 2; ++i) {
    side_eps.box.lo[i] = -0.15;
    side_eps.box.hi[i] = 0.15;
  }
  CHECK(measure_alpha(side_eps, m, pi, 1000, rng).alpha == doctest::Approx(1 / pi));
  Cell big = cell;
  for (int i = 0; i < 2; ++i) {
    big.box.lo[i] = -0.3;
    big.box.hi[i] = 0.3;
  }
  CHECK_THROWS_AS(measure_alpha(big, m, pi, 1000, rng), Error);
  auto e3 = DynamicsModel::euclidean3();
  CHECK(measure_alpha(build_hcs(e3, {{0, 0, 0}}, 0.3, 0), e3, 4 * pi / 3, 500, rng).alpha <= 1.0);
}

TEST_CASE("cover tiling") {
  auto m = DynamicsModel::euclidean2();
  for (double eps0 : {0.3, 0.1, 0.05}) {
    auto cover = build_cover(m, Box::unit(), eps0);
    const double side = std::sqrt(2.0) * eps0;
    const auto k = static_cast<std::size_t>(std::ceil(1 / side));
    CHECK(cover.roots.size() == k * k);
    CHECK(cover.rho == 0.0);
    CHECK(cover.branching() == 4);
  }

  auto rs = DynamicsModel::reeds_shepp();
  auto cover = build_cover(rs, Box::unit(), 0.2);
  CHECK(cover.branching() == 8);
  Rng rng(5);
  for (int t = 0; t < 10000; ++t) {
    WorkspacePoint x{rng.uniform(), rng.uniform(), 0};
    int hits = 0;
    for (const auto& c : cover.roots) hits += c.box.contains(x);
    CHECK(hits == 1);
    CHECK(cover.roots[locate_root(cover, x)].box.contains(x));
  }
  for (const auto& c : cover.roots) CHECK(c.anchor.theta() == 0.0);
}

TEST_CASE("scaled cover follows the speed stripes") {
  auto m = DynamicsModel::scaled_euclidean2(ScaleField::split(0.5, 1.0, 2.0));
  auto cover = build_cover(m, Box::unit(), 0.1);
  CHECK(cover.regions.size() == 2);
  const auto& left = cover.roots[locate_root(cover, {0.2, 0.5, 0})];
  const auto& right = cover.roots[locate_root(cover, {0.8, 0.5, 0})];
  CHECK(right.box.width(0) > 1.8 * left.box.width(0));
  for (const auto& c : cover.roots) CHECK((c.box.hi[0] <= 0.5 + 1e-12 || c.box.lo[0] >= 0.5 - 1e-12));
  Rng rng(7);
  for (const auto& c : cover.roots) CHECK(measure_alpha(c, m, pi * std::pow(m.sigma().at(c.anchor.x()), 2), 200, rng).alpha <= 2 / pi + 1e-9);
  int multi = 0;
  for (int t = 0; t < 100000; ++t) {
    WorkspacePoint x{rng.uniform(), rng.uniform(), 0};
    int hits = 0;
    for (const auto& c : cover.roots) hits += c.box.contains(x);
    multi += hits > 1;
  }
  CHECK(multi == 0);
}

TEST_CASE("locate path") {
  auto m = DynamicsModel::euclidean2();
  auto cover = build_cover(m, Box::unit(), 1 / std::sqrt(2.0));
  REQUIRE(cover.roots.size() == 1);
  auto loc = locate_path(cover, {0.3, 0.7, 0}, 2);
  CHECK(loc.root == 0);
  CHECK(loc.path.child == std::vector<int>{2, 1});
  CHECK(locate_path(cover, {0.5, 0.5, 0}, 1).path.child == std::vector<int>{3});
  CHECK(locate_path(cover, {0.3, 0.7, 0}, 0).path.child.empty());
  CHECK(locate_path(cover, {1.0, 1.0, 0}, 1).path.child == std::vector<int>{3});
  CHECK_THROWS_AS(locate_path(cover, {1.5, 0.5, 0}, 1), Error);
  auto box = vertex_box(cover, 0, {2, 1});
  CHECK(box.lo[0] == doctest::Approx(0.25));
  CHECK(box.lo[1] == doctest::Approx(0.5));
  auto q = vertex_anchor(cover, 0, {2, 1});
  CHECK(q.x() == doctest::Approx(0.375));
  CHECK(q.y() == doctest::Approx(0.625));

  auto big = build_cover(m, Box::unit(), 0.05);
  Rng rng(8);
  for (int t = 0; t < 2000; ++t) {
    WorkspacePoint x{rng.uniform(), rng.uniform(), 0};
    auto l = locate_path(big, x, 4);
    CHECK(vertex_box(big, l.root, l.path.child).contains(x));
  }
}

TEST_CASE("measured branching") {
  CHECK(measured_branching(DynamicsModel::euclidean2(), 0.1) == 9);
  CHECK(measured_branching(DynamicsModel::euclidean3(), 0.1) == 64);
  CHECK(measured_branching(DynamicsModel::reeds_shepp(), 0.01) == 60);
}

TEST_CASE("cover json") {
  auto cover = build_cover(DynamicsModel::euclidean2(), Box::unit(), 0.3);
  auto j = nlohmann::json::parse(cover_to_json(cover));
  CHECK(j["roots"].size() == cover.roots.size());
  CHECK(j["s"] == 2);
  CHECK(j["gamma"] == 2);
  CHECK(j["roots"][0]["box"]["lo"].size() == 2);
}
