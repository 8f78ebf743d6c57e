#include "dstsp/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "dstsp/error.hpp"
#include "dstsp/hcp.hpp"
#include "dstsp/parallel.hpp"

namespace dstsp::planner {
namespace {

constexpr std::size_t kNeighbours = 10;

// k nearest anchors by workspace distance, via a uniform bucket grid.
std::vector<std::vector<std::size_t>> neighbour_lists(const std::vector<WorkspacePoint>& pts, std::size_t k) {
  const std::size_t m = pts.size();
  std::vector<std::vector<std::size_t>> out(m);
  if (m <= 1) return out;
  double lo[2] = {pts[0][0], pts[0][1]}, hi[2] = {pts[0][0], pts[0][1]};
  for (const auto& p : pts)
    for (int i = 0; i < 2; ++i) {
      lo[i] = std::min(lo[i], p[i]);
      hi[i] = std::max(hi[i], p[i]);
    }
  const int side = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(m) / 2.0)));
  const double span[2] = {std::max(hi[0] - lo[0], 1e-12), std::max(hi[1] - lo[1], 1e-12)};
  auto cell_of = [&](const WorkspacePoint& p, int i) {
    return std::clamp(static_cast<int>((p[i] - lo[i]) / span[i] * side), 0, side - 1);
  };
  std::vector<std::vector<std::size_t>> buckets(static_cast<std::size_t>(side * side));
  for (std::size_t a = 0; a < m; ++a) buckets[static_cast<std::size_t>(cell_of(pts[a], 0) + side * cell_of(pts[a], 1))].push_back(a);
  const double cw = std::min(span[0], span[1]) / side;
  const std::size_t want = std::min(k, m - 1);
  for (std::size_t a = 0; a < m; ++a) {
    const int cx = cell_of(pts[a], 0), cy = cell_of(pts[a], 1);
    std::vector<std::pair<double, std::size_t>> cand;
    for (int ring = 0;; ++ring) {
      for (int y = cy - ring; y <= cy + ring; ++y)
        for (int x = cx - ring; x <= cx + ring; ++x) {
          if (std::max(std::abs(x - cx), std::abs(y - cy)) != ring) continue;
          if (x < 0 || y < 0 || x >= side || y >= side) continue;
          for (std::size_t b : buckets[static_cast<std::size_t>(x + side * y)])
            if (b != a) cand.emplace_back(workspace_distance(pts[a], pts[b]), b);
        }
      if (cand.size() >= want) {
        std::nth_element(cand.begin(), cand.begin() + static_cast<long>(want) - 1, cand.end());
        if (cand[want - 1].first <= ring * cw || ring > 2 * side) break;
      }
      if (ring > 2 * side) break;
    }
    std::sort(cand.begin(), cand.end());
    for (std::size_t i = 0; i < want && i < cand.size(); ++i) out[a].push_back(cand[i].second);
  }
  return out;
}

void append(Trajectory& traj, const Trajectory& piece) {
  for (const auto& s : piece.segments)
    if (s.duration > 0.0) traj.segments.push_back(s);
}

struct CellResult {
  std::vector<Segment> segments;
  std::vector<Visit> visits;  // times relative to the start of the cell tour
  double time = 0.0;
};

CellResult realize_root(const DynamicsModel& model, const hcs::HcsCover& cover, std::size_t root,
                        const std::vector<std::size_t>& ids, const std::vector<WorkspacePoint>& targets, bool record) {
  CellResult out;
  if (ids.empty()) return out;
  const auto params = cover.hcp_params();
  const int depth = root_depth(ids.size(), params.b);
  hcp::HcpInstance inst;
  inst.params = params;
  inst.targets.reserve(ids.size());
  for (std::size_t id : ids) inst.targets.push_back(hcs::locate_path(cover, targets[id], depth).path);
  const hcp::Plan plan = hcp::construct_optimal_plan(inst, static_cast<std::size_t>(depth));

  std::vector<hcs::Box> boxes{cover.roots[root].box};
  std::vector<Configuration> anchors{cover.roots[root].anchor};
  Trajectory scratch;
  auto move = [&](const Configuration& from, const Configuration& to) {
    Trajectory t = steer(model, from, to);
    const double d = t.duration();
    if (record) append(scratch, t);
    out.time += d;
    return t;
  };
  for (const auto& a : plan) {
    switch (a.kind) {
      case hcp::Action::Kind::Down: {
        hcs::Box child = hcs::child_box(boxes.back(), cover.weights, cover.s, a.arg);
        Configuration q = anchors.back();
        const auto c = child.center();
        for (int i = 0; i < child.dim; ++i) q.v[static_cast<std::size_t>(i)] = c[i];
        move(anchors.back(), q);
        boxes.push_back(child);
        anchors.push_back(q);
        break;
      }
      case hcp::Action::Kind::Up: {
        const Configuration from = anchors.back();
        boxes.pop_back();
        anchors.pop_back();
        move(from, anchors.back());
        break;
      }
      case hcp::Action::Kind::Collect: {
        const std::size_t id = ids[static_cast<std::size_t>(a.arg)];
        Configuration q = anchors.back();
        for (int i = 0; i < model.workspace_dim(); ++i) q.v[static_cast<std::size_t>(i)] = targets[id][i];
        Trajectory there = move(anchors.back(), q);
        out.visits.push_back({id, out.time, project(model, endpoint(model, there))});
        Trajectory back = reverse_trajectory(model, there);
        if (record) append(scratch, back);
        out.time += back.duration();
        break;
      }
    }
  }
  out.segments = std::move(scratch.segments);
  return out;
}

}  // namespace

int root_depth(std::size_t n, int b) {
  if (n <= 1) return 1;
  int d = 0;
  std::size_t cap = 1;
  while (cap < n) {
    cap *= static_cast<std::size_t>(b);
    ++d;
  }
  return d + 1;
}

RootTour roots_tour(const DynamicsModel& model, const std::vector<Configuration>& anchors) {
  RootTour tour;
  const std::size_t m = anchors.size();
  if (m == 0) fail(ErrorKind::InvalidArgument, "root tour needs at least one anchor");
  if (m == 1) {
    tour.order = {0};
    return tour;
  }
  std::vector<WorkspacePoint> pts(m);
  for (std::size_t i = 0; i < m; ++i) pts[i] = project(model, anchors[i]);
  const auto nbr = neighbour_lists(pts, kNeighbours);
  auto d = [&](std::size_t a, std::size_t b) { return steer_time(model, anchors[a], anchors[b]); };

  // Nearest neighbour from anchor 0.
  std::vector<char> used(m, 0);
  std::vector<std::size_t> order{0};
  used[0] = 1;
  for (std::size_t step = 1; step < m; ++step) {
    const std::size_t cur = order.back();
    std::size_t best = m;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c : nbr[cur])
      if (!used[c]) {
        const double t = d(cur, c);
        if (t < best_d || (t == best_d && c < best)) {
          best_d = t;
          best = c;
        }
      }
    if (best == m) {
      double best_w = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < m; ++c)
        if (!used[c]) {
          const double w = workspace_distance(pts[cur], pts[c]);
          if (w < best_w) {
            best_w = w;
            best = c;
          }
        }
    }
    used[best] = 1;
    order.push_back(best);
  }

  // 2-opt on the open path using neighbour candidates.
  std::vector<std::size_t> pos(m);
  auto reindex = [&](std::size_t from, std::size_t to) {
    for (std::size_t i = from; i <= to; ++i) pos[order[i]] = i;
  };
  reindex(0, m - 1);
  auto edge = [&](std::size_t i) { return i + 1 < m ? d(order[i], order[i + 1]) : 0.0; };
  bool improved = true;
  for (int pass = 0; improved && pass < 50; ++pass) {
    improved = false;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t a = order[i];
      for (std::size_t c : nbr[a]) {
        const std::size_t j = pos[c];
        if (j == i || j == i + 1 || j + 1 == i) continue;
        // Reverse order[lo+1 .. hi] so that a and c become adjacent.
        std::size_t lo, hi;
        double before, after;
        if (j > i) {
          lo = i;
          hi = j;
          before = edge(lo) + edge(hi);
          after = d(order[lo], order[hi]) + (hi + 1 < m ? d(order[lo + 1], order[hi + 1]) : 0.0);
        } else {
          lo = j;
          hi = i;
          before = edge(lo) + edge(hi);
          after = d(order[lo], order[hi]) + (hi + 1 < m ? d(order[lo + 1], order[hi + 1]) : 0.0);
        }
        if (after < before - 1e-12) {
          std::reverse(order.begin() + static_cast<long>(lo) + 1, order.begin() + static_cast<long>(hi) + 1);
          reindex(lo + 1, hi);
          improved = true;
          break;
        }
      }
    }
    // Moving a prefix: reverse order[0 .. k] when it shortens the path start.
    for (std::size_t k = 1; k + 1 < m; ++k) {
      if (d(order[0], order[k + 1]) < edge(k) - 1e-12) {
        std::reverse(order.begin(), order.begin() + static_cast<long>(k) + 1);
        reindex(0, k);
        improved = true;
      }
    }
  }
  tour.order = std::move(order);
  for (std::size_t i = 0; i + 1 < m; ++i) tour.time += d(tour.order[i], tour.order[i + 1]);
  return tour;
}

DstspPlanner::DstspPlanner(DynamicsModel model, hcs::HcsCover cover) : model_(std::move(model)), cover_(std::move(cover)) {
  if (!model_.symmetric()) fail(ErrorKind::NotSymmetric, "planner requires symmetric dynamics");
  std::vector<Configuration> anchors;
  anchors.reserve(cover_.roots.size());
  for (const auto& r : cover_.roots) anchors.push_back(r.anchor);
  root_tour_ = roots_tour(model_, anchors);
}

Tour DstspPlanner::solve(const std::vector<WorkspacePoint>& targets, const SolveOptions& opt) const {
  Tour tour;
  const auto& roots = cover_.roots;
  tour.trajectory.start = roots[root_tour_.order.front()].anchor;
  if (targets.empty()) return tour;

  std::vector<std::vector<std::size_t>> buckets(roots.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (!cover_.support.contains_closed(targets[i])) fail(ErrorKind::TargetOutsideCover, "target outside the cover support");
    buckets[hcs::locate_root(cover_, targets[i])].push_back(i);
  }
  std::vector<CellResult> cells(roots.size());
  parallel_for(roots.size(), opt.threads, [&](std::size_t r) {
    cells[r] = realize_root(model_, cover_, r, buckets[r], targets, opt.record_trajectory);
  });

  double clock = 0.0;
  const auto& order = root_tour_.order;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const std::size_t r = order[k];
    if (k > 0) {
      Trajectory hop = steer(model_, roots[order[k - 1]].anchor, roots[r].anchor);
      const double t = hop.duration();
      if (opt.record_trajectory) append(tour.trajectory, hop);
      clock += t;
      tour.roots_time += t;
    }
    for (const auto& v : cells[r].visits) tour.visited.push_back({v.target, clock + v.time, v.position});
    if (opt.record_trajectory)
      tour.trajectory.segments.insert(tour.trajectory.segments.end(), cells[r].segments.begin(), cells[r].segments.end());
    clock += cells[r].time;
    tour.cells_time += cells[r].time;
  }
  tour.total_time = clock;
  return tour;
}

Tour solve_dstsp(const DynamicsModel& model, const hcs::HcsCover& cover, const std::vector<WorkspacePoint>& targets,
                 const SolveOptions& opt) {
  return DstspPlanner(model, cover).solve(targets, opt);
}

double cells_bound(const hcs::HcsCover& cover, const std::vector<WorkspacePoint>& targets) {
  std::vector<std::size_t> counts(cover.roots.size(), 0);
  for (const auto& x : targets) ++counts[hcs::locate_root(cover, x)];
  const double e = 1.0 - 1.0 / cover.gamma;
  double sum = 0.0;
  for (auto c : counts) sum += 6.0 * cover.s * cover.eps0 * std::pow(static_cast<double>(c), e);
  return sum;
}

double choose_eps0(const DynamicsModel& model, const hcs::Box& support, std::size_t n, double c0, double eps_min,
                   double eps_max) {
  if (!(c0 > 0.0) || !(eps_min > 0.0) || eps_max < eps_min) fail(ErrorKind::InvalidArgument, "bad eps0 parameters");
  const double nn = static_cast<double>(std::max<std::size_t>(n, 1));
  const double raw = std::clamp(c0 * std::pow(nn, -1.0 / model.gamma()), eps_min, eps_max);
  // Width of the first region along x and the box half-width per unit eps there.
  double x_hi = support.hi[0];
  if (model.kind() == ModelKind::ScaledEuclidean2)
    for (double b : model.sigma().breaks)
      if (b > support.lo[0] && b < x_hi) x_hi = std::min(x_hi, b);
  const double width = x_hi - support.lo[0];
  const double sigma = model.kind() == ModelKind::ScaledEuclidean2 ? model.sigma().at(support.lo[0]) : 1.0;
  const double per_eps = hcs::max_half_widths(model, 1.0, sigma)[0];
  const double k = std::max(1.0, std::round(width / (2.0 * per_eps * raw)));
  return width / (2.0 * per_eps * k);
}

double exact_small_tsp(const DynamicsModel& model, const std::vector<WorkspacePoint>& targets, int headings) {
  const std::size_t n = targets.size();
  if (n > 8 || headings > 8) fail(ErrorKind::TooLarge, "exact TSP supports n <= 8 and at most 8 headings");
  if (headings < 1) fail(ErrorKind::InvalidArgument, "need at least one heading");
  if (n <= 1) return 0.0;
  const int h = model.has_heading() ? headings : 1;
  const std::size_t states = n * static_cast<std::size_t>(h);
  std::vector<Configuration> cfg(states);
  for (std::size_t i = 0; i < n; ++i)
    for (int k = 0; k < h; ++k) cfg[i * h + k] = lift(model, targets[i], 2.0 * std::numbers::pi * k / h);
  std::vector<double> w(states * states, 0.0);
  for (std::size_t a = 0; a < states; ++a)
    for (std::size_t b = 0; b < states; ++b)
      if (a / h != b / h) w[a * states + b] = steer_time(model, cfg[a], cfg[b]);
  const std::size_t full = (std::size_t{1} << n) - 1;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dp((full + 1) * states, inf);
  for (std::size_t a = 0; a < states; ++a) dp[(std::size_t{1} << (a / h)) * states + a] = 0.0;
  for (std::size_t mask = 1; mask <= full; ++mask)
    for (std::size_t a = 0; a < states; ++a) {
      const double cur = dp[mask * states + a];
      if (cur == inf || !(mask >> (a / h) & 1U)) continue;
      for (std::size_t b = 0; b < states; ++b) {
        const std::size_t bit = std::size_t{1} << (b / h);
        if (mask & bit) continue;
        double& slot = dp[(mask | bit) * states + b];
        slot = std::min(slot, cur + w[a * states + b]);
      }
    }
  double best = inf;
  for (std::size_t a = 0; a < states; ++a) best = std::min(best, dp[full * states + a]);
  return best;
}

double trivial_bound(std::size_t n, const DynamicsModel& model, const hcs::Box& support, std::size_t samples) {
  if (n == 0) return 0.0;
  Rng rng(0x7d1a1b0dULL);
  std::vector<Configuration> cfg(samples);
  for (auto& q : cfg) {
    WorkspacePoint x{0, 0, 0};
    for (int i = 0; i < support.dim; ++i) x[i] = rng.uniform(support.lo[i], support.hi[i]);
    q = lift(model, x, model.has_heading() ? rng.uniform(0.0, 2.0 * std::numbers::pi) : 0.0);
  }
  double c = 0.0;
  for (std::size_t a = 0; a < samples; ++a)
    for (std::size_t b = a + 1; b < samples; ++b) c = std::max(c, steer_time(model, cfg[a], cfg[b]));
  return 1.2 * c * static_cast<double>(n);
}

}  // namespace dstsp::planner
