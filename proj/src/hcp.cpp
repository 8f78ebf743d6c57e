#include "dstsp/hcp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <tuple>

#include "dstsp/error.hpp"

namespace dstsp::hcp {

double HcpParams::gamma() const { return std::log(static_cast<double>(b)) / std::log(static_cast<double>(s)); }

double HcpParams::threshold() const { return static_cast<double>(s) / (s - 1); }

void HcpParams::validate() const {
  if (b < 2 || s < 2) fail(ErrorKind::InvalidArgument, "b and s must be >= 2");
}

bool TargetPath::has_prefix(const std::vector<int>& prefix) const {
  for (std::size_t k = 0; k < prefix.size(); ++k)
    if (at(k) != prefix[k]) return false;
  return true;
}

bool same_path(const TargetPath& a, const TargetPath& b) {
  std::size_t depth = std::max(a.child.size(), b.child.size());
  for (std::size_t k = 0; k < depth; ++k)
    if (a.at(k) != b.at(k)) return false;
  return true;
}

std::size_t HcpInstance::stored_depth() const {
  std::size_t d = 0;
  for (const auto& t : targets) d = std::max(d, t.child.size());
  return d;
}

namespace {

// Canonical form with trailing zeros removed, for duplicate detection.
std::vector<int> canonical(const TargetPath& t) {
  std::vector<int> c = t.child;
  while (!c.empty() && c.back() == 0) c.pop_back();
  return c;
}

// count > s/(s-1), evaluated in integers.
bool above_threshold(std::size_t count, int s) {
  return static_cast<std::int64_t>(count) * (s - 1) > s;
}

}  // namespace

void HcpInstance::validate() const {
  params.validate();
  std::set<std::vector<int>> seen;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    for (int c : targets[i].child)
      if (c < 0 || c >= params.b) fail(ErrorKind::InvalidArgument, "child index out of range in target " + std::to_string(i));
    if (!seen.insert(canonical(targets[i])).second)
      fail(ErrorKind::InvalidArgument, "duplicate target path " + std::to_string(i));
  }
}

void ExactCost::add(std::size_t level, std::int64_t units) {
  if (coeff.size() <= level) coeff.resize(level + 1, 0);
  coeff[level] += units;
}

double ExactCost::value() const {
  double v = 0.0;
  double scale = 1.0;
  for (std::int64_t c : coeff) {
    v += static_cast<double>(c) * scale;
    scale /= s;
  }
  return v;
}

std::int64_t ExactCost::scaled(std::size_t depth) const {
  std::int64_t total = 0;
  for (std::size_t k = 0; k < coeff.size(); ++k) {
    if (coeff[k] == 0) continue;
    if (k > depth) fail(ErrorKind::InvalidArgument, "scaled depth below used level");
    std::int64_t p = 1;
    for (std::size_t j = k; j < depth; ++j) p *= s;
    total += coeff[k] * p;
  }
  return total;
}

bool operator==(const ExactCost& a, const ExactCost& b) {
  if (a.s != b.s) return false;
  std::size_t depth = std::max(a.coeff.size(), b.coeff.size());
  return a.scaled(depth) == b.scaled(depth);
}

ExactCost plan_cost_exact(const Plan& plan, const HcpInstance& instance) {
  const auto& p = instance.params;
  ExactCost cost{p.s, {}};
  std::vector<int> cursor;
  std::vector<char> collected(instance.n(), 0);
  for (std::size_t step = 0; step < plan.size(); ++step) {
    const Action& a = plan[step];
    const std::string where = " at action " + std::to_string(step);
    switch (a.kind) {
      case Action::Kind::Down:
        if (a.arg < 0 || a.arg >= p.b) fail(ErrorKind::InvalidPlan, "child out of range" + where);
        cost.add(cursor.size(), 1);
        cursor.push_back(a.arg);
        break;
      case Action::Kind::Up:
        if (cursor.empty()) fail(ErrorKind::InvalidPlan, "move up at root" + where);
        cursor.pop_back();
        cost.add(cursor.size(), 1);
        break;
      case Action::Kind::Collect: {
        if (a.arg < 0 || static_cast<std::size_t>(a.arg) >= instance.n())
          fail(ErrorKind::InvalidPlan, "unknown target" + where);
        if (collected[a.arg]) fail(ErrorKind::InvalidPlan, "double collect" + where);
        if (!instance.targets[a.arg].has_prefix(cursor)) fail(ErrorKind::InvalidPlan, "collect off path" + where);
        collected[a.arg] = 1;
        cost.add(cursor.size(), 2);
        break;
      }
    }
  }
  if (!cursor.empty()) fail(ErrorKind::InvalidPlan, "plan does not end at root");
  for (std::size_t i = 0; i < collected.size(); ++i)
    if (!collected[i]) fail(ErrorKind::InvalidPlan, "target " + std::to_string(i) + " never collected");
  return cost;
}

double plan_cost(const Plan& plan, const HcpInstance& instance) { return plan_cost_exact(plan, instance).value(); }

std::size_t targets_through(const HcpInstance& instance, const std::vector<int>& prefix) {
  std::size_t count = 0;
  for (const auto& t : instance.targets)
    if (t.has_prefix(prefix)) ++count;
  return count;
}

namespace {

void descend(const HcpInstance& instance, std::vector<std::size_t> ids, std::size_t level,
             std::optional<std::size_t> max_depth, Plan& plan) {
  const int b = instance.params.b;
  std::vector<std::vector<std::size_t>> groups(b);
  for (std::size_t id : ids) groups[instance.targets[id].at(level)].push_back(id);
  const bool may_descend = !max_depth || level < *max_depth;
  std::vector<std::size_t> here;
  for (int c = 0; c < b; ++c) {
    if (may_descend && above_threshold(groups[c].size(), instance.params.s)) continue;
    here.insert(here.end(), groups[c].begin(), groups[c].end());
  }
  std::sort(here.begin(), here.end());
  for (std::size_t id : here) plan.push_back(Action::collect(static_cast<int>(id)));
  if (!may_descend) return;
  for (int c = 0; c < b; ++c) {
    if (!above_threshold(groups[c].size(), instance.params.s)) continue;
    plan.push_back(Action::down(c));
    descend(instance, std::move(groups[c]), level + 1, max_depth, plan);
    plan.push_back(Action::up());
  }
}

}  // namespace

Plan construct_optimal_plan(const HcpInstance& instance, std::optional<std::size_t> max_depth) {
  if (max_depth) {
    instance.params.validate();
  } else {
    instance.validate();
  }
  Plan plan;
  if (instance.n() == 0) return plan;
  std::vector<std::size_t> ids(instance.n());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
  plan.reserve(3 * instance.n());
  descend(instance, std::move(ids), 0, max_depth, plan);
  return plan;
}

BruteForceResult brute_force_optimal(const HcpInstance& instance, int depth_limit) {
  const auto& p = instance.params;
  const std::size_t n = instance.n();
  if (n > 6 || depth_limit > 4 || p.b > 4 || depth_limit < 0)
    fail(ErrorKind::SearchSpaceTooLarge, "brute force requires n <= 6, depth <= 4, b <= 4");
  instance.validate();

  struct Vertex {
    int parent = -1;
    int level = 0;
    std::vector<int> prefix;
    std::vector<int> children;
    std::uint32_t passing = 0;  // bitmask of targets through this vertex
  };
  std::vector<Vertex> vertices(1);
  for (std::size_t v = 0; v < vertices.size(); ++v) {
    if (vertices[v].level == depth_limit) continue;
    for (int c = 0; c < p.b; ++c) {
      Vertex child;
      child.parent = static_cast<int>(v);
      child.level = vertices[v].level + 1;
      child.prefix = vertices[v].prefix;
      child.prefix.push_back(c);
      vertices[v].children.push_back(static_cast<int>(vertices.size()));
      vertices.push_back(std::move(child));
    }
  }
  for (auto& v : vertices)
    for (std::size_t i = 0; i < n; ++i)
      if (instance.targets[i].has_prefix(v.prefix)) v.passing |= 1u << i;

  std::vector<std::int64_t> unit(depth_limit + 1);
  for (int k = 0; k <= depth_limit; ++k) {
    std::int64_t u = 1;
    for (int j = k; j < depth_limit; ++j) u *= p.s;
    unit[k] = u;
  }

  const std::uint32_t full = (n == 0) ? 0u : ((1u << n) - 1u);
  const std::size_t masks = std::size_t{1} << n;
  const std::size_t states = vertices.size() * masks;
  using Key = std::pair<std::int64_t, int>;  // (scaled cost, downs)
  const Key inf{std::numeric_limits<std::int64_t>::max(), 0};
  std::vector<Key> best(states, inf);
  std::vector<std::size_t> pred(states, states);
  std::vector<Action> pred_action(states);
  auto id = [&](std::size_t v, std::uint32_t mask) { return v * masks + mask; };

  using Entry = std::tuple<std::int64_t, int, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  best[id(0, 0)] = {0, 0};
  queue.emplace(0, 0, id(0, 0));
  const std::size_t goal = id(0, full);
  while (!queue.empty()) {
    auto [cost, downs, state] = queue.top();
    queue.pop();
    if (Key{cost, downs} != best[state]) continue;
    if (state == goal) break;
    const std::size_t v = state / masks;
    const std::uint32_t mask = static_cast<std::uint32_t>(state % masks);
    const Vertex& vx = vertices[v];
    auto relax = [&](std::size_t next, Key key, Action a) {
      if (key < best[next]) {
        best[next] = key;
        pred[next] = state;
        pred_action[next] = a;
        queue.emplace(key.first, key.second, next);
      }
    };
    for (std::size_t c = 0; c < vx.children.size(); ++c)
      relax(id(vx.children[c], mask), {cost + unit[vx.level], downs + 1}, Action::down(static_cast<int>(c)));
    if (vx.parent >= 0) relax(id(vx.parent, mask), {cost + unit[vx.level - 1], downs}, Action::up());
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint32_t bit = 1u << i;
      if ((mask & bit) || !(vx.passing & bit)) continue;
      relax(id(v, mask | bit), {cost + 2 * unit[vx.level], downs}, Action::collect(static_cast<int>(i)));
    }
  }

  BruteForceResult result;
  for (std::size_t st = goal; st != id(0, 0); st = pred[st]) {
    if (pred[st] == states) fail(ErrorKind::InvalidArgument, "no feasible plan within depth limit");
    result.plan.push_back(pred_action[st]);
  }
  std::reverse(result.plan.begin(), result.plan.end());
  result.exact = plan_cost_exact(result.plan, instance);
  result.cost = result.exact.value();
  return result;
}

namespace {

void level_walk(const HcpInstance& instance, std::vector<std::size_t> ids, int level, int k_star, Plan& plan) {
  if (level == k_star) {
    std::sort(ids.begin(), ids.end());
    for (std::size_t id : ids) plan.push_back(Action::collect(static_cast<int>(id)));
    return;
  }
  const int b = instance.params.b;
  std::vector<std::vector<std::size_t>> groups(b);
  for (std::size_t id : ids) groups[instance.targets[id].at(level)].push_back(id);
  for (int c = 0; c < b; ++c) {
    plan.push_back(Action::down(c));
    level_walk(instance, std::move(groups[c]), level + 1, k_star, plan);
    plan.push_back(Action::up());
  }
}

}  // namespace

Plan level_k_plan(const HcpInstance& instance, int k_star) {
  instance.params.validate();
  if (k_star < 0) fail(ErrorKind::InvalidArgument, "k_star must be >= 0");
  std::vector<std::size_t> ids(instance.n());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
  Plan plan;
  level_walk(instance, std::move(ids), 0, k_star, plan);
  return plan;
}

double level_k_cost(std::size_t n, const HcpParams& params, int k_star) {
  const double b = params.b, s = params.s;
  double movement = 0.0;
  for (int k = 0; k < k_star; ++k) movement += 2.0 * b * std::pow(b / s, k);
  return movement + 2.0 * static_cast<double>(n) * std::pow(s, -k_star);
}

int default_k_star(std::size_t n, const HcpParams& params) {
  int levels = 0;
  std::size_t reach = 1;
  while (reach < n) {
    reach *= static_cast<std::size_t>(params.b);
    ++levels;
  }
  return std::max(levels - 1, 0);
}

double hcp_star_bound(std::size_t n, const HcpParams& params) {
  if (params.s < 2) fail(ErrorKind::HypothesisViolated, "bound requires s >= 2");
  const double gamma = params.gamma();
  if (gamma < 2.0 - 1e-12) fail(ErrorKind::HypothesisViolated, "bound requires gamma >= 2");
  if (n == 0) return 0.0;
  return 6.0 * params.s * std::pow(static_cast<double>(n), 1.0 - 1.0 / gamma);
}

std::vector<std::pair<std::vector<int>, int>> edge_crossings(const Plan& plan) {
  std::map<std::vector<int>, int> count;
  std::vector<int> cursor;
  for (const Action& a : plan) {
    if (a.kind == Action::Kind::Down) {
      cursor.push_back(a.arg);
      ++count[cursor];
    } else if (a.kind == Action::Kind::Up && !cursor.empty()) {
      ++count[cursor];
      cursor.pop_back();
    }
  }
  return {count.begin(), count.end()};
}

std::vector<std::vector<int>> entered_vertices(const Plan& plan) {
  std::set<std::vector<int>> seen{{}};
  std::vector<int> cursor;
  for (const Action& a : plan) {
    if (a.kind == Action::Kind::Down) {
      cursor.push_back(a.arg);
      seen.insert(cursor);
    } else if (a.kind == Action::Kind::Up && !cursor.empty()) {
      cursor.pop_back();
    }
  }
  return {seen.begin(), seen.end()};
}

}  // namespace dstsp::hcp
