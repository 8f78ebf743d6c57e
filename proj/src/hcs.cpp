#include "dstsp/hcs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dstsp/error.hpp"
#include "json.hpp"

namespace dstsp::hcs {
namespace {

int ipow(int base, int e) {
  int r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

int parts(const std::vector<int>& weights, int s, int axis) { return ipow(s, weights[static_cast<std::size_t>(axis)]); }

void require_hcs(const DynamicsModel& model) {
  if (!supports_hcs(model)) fail(ErrorKind::NonIntegerGamma, "no hierarchical cell boxes for model " + model.id());
}

double local_sigma(const DynamicsModel& model, double x) {
  return model.kind() == ModelKind::ScaledEuclidean2 ? model.sigma().at(x) : 1.0;
}

Configuration anchor_of(const DynamicsModel& model, const Box& box, double heading) {
  return lift(model, box.center(), heading);
}

void expand(const DynamicsModel& model, Cell& cell, int depth, const std::vector<int>& weights, int s) {
  if (cell.depth >= depth) return;
  for (const Box& b : split_box(cell.box, weights, s)) {
    Cell child;
    child.box = b;
    child.eps = cell.eps / s;
    child.depth = cell.depth + 1;
    child.anchor = anchor_of(model, b, model.has_heading() ? cell.anchor.theta() : 0.0);
    expand(model, child, depth, weights, s);
    cell.children.push_back(std::move(child));
  }
}

}  // namespace

Box Box::unit(int dim) {
  Box b;
  b.dim = dim;
  for (int i = 0; i < dim; ++i) b.hi[i] = 1.0;
  return b;
}

double Box::volume() const {
  double v = 1.0;
  for (int i = 0; i < dim; ++i) v *= width(i);
  return v;
}

WorkspacePoint Box::center() const {
  WorkspacePoint c{0, 0, 0};
  for (int i = 0; i < dim; ++i) c[i] = 0.5 * (lo[i] + hi[i]);
  return c;
}

bool Box::contains(const WorkspacePoint& x) const {
  for (int i = 0; i < dim; ++i)
    if (x[i] < lo[i] || x[i] >= hi[i]) return false;
  return true;
}

bool Box::contains_closed(const WorkspacePoint& x, double tol) const {
  for (int i = 0; i < dim; ++i)
    if (x[i] < lo[i] - tol || x[i] > hi[i] + tol) return false;
  return true;
}

int HcsCover::branching() const { return ipow(s, gamma); }

bool supports_hcs(const DynamicsModel& model) { return model.kind() != ModelKind::DiffDrive; }

std::vector<double> box_coefficients(const DynamicsModel& model) {
  require_hcs(model);
  switch (model.kind()) {
    case ModelKind::Euclidean2:
    case ModelKind::ScaledEuclidean2: return {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
    case ModelKind::Euclidean3: return {1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0)};
    case ModelKind::ReedsShepp: return {0.8, 0.1};
    default: break;
  }
  fail(ErrorKind::NonIntegerGamma, "no hierarchical cell boxes for model " + model.id());
}

std::vector<double> max_half_widths(const DynamicsModel& model, double eps, double sigma) {
  auto a = box_coefficients(model);
  const double v = model.c() * sigma * eps;
  std::vector<double> h(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) h[i] = a[i] * v;
  if (model.kind() == ModelKind::ReedsShepp) h[1] = a[1] * v * v / model.r_min();
  return h;
}

std::vector<Box> split_box(const Box& box, const std::vector<int>& weights, int s) {
  int count = 1;
  for (int i = 0; i < box.dim; ++i) count *= parts(weights, s, i);
  std::vector<Box> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) out.push_back(child_box(box, weights, s, k));
  return out;
}

Box child_box(const Box& box, const std::vector<int>& weights, int s, int index) {
  Box out = box;
  for (int i = 0; i < box.dim; ++i) {
    const int p = parts(weights, s, i);
    const int k = index % p;
    index /= p;
    const double w = box.width(i) / p;
    out.lo[i] = box.lo[i] + k * w;
    out.hi[i] = k + 1 == p ? box.hi[i] : box.lo[i] + (k + 1) * w;
  }
  return out;
}

int child_index(const Box& box, const std::vector<int>& weights, int s, const WorkspacePoint& x) {
  int index = 0, radix = 1;
  for (int i = 0; i < box.dim; ++i) {
    const int p = parts(weights, s, i);
    const double w = box.width(i) / p;
    int k = static_cast<int>(std::floor((x[i] - box.lo[i]) / w));
    k = std::clamp(k, 0, p - 1);
    // Match the half-open child boundaries exactly.
    while (k > 0 && x[i] < box.lo[i] + k * w) --k;
    while (k + 1 < p && x[i] >= box.lo[i] + (k + 1) * w) ++k;
    index += k * radix;
    radix *= p;
  }
  return index;
}

Cell build_hcs(const DynamicsModel& model, const Configuration& anchor, double eps0, int depth, int s) {
  require_hcs(model);
  if (!(eps0 > 0.0) || depth < 0 || s < 2) fail(ErrorKind::InvalidArgument, "build_hcs needs eps0 > 0, depth >= 0, s >= 2");
  const auto x = project(model, anchor);
  const auto h = max_half_widths(model, eps0, local_sigma(model, x[0]));
  Cell root;
  root.eps = eps0;
  root.box.dim = model.workspace_dim();
  for (int i = 0; i < root.box.dim; ++i) {
    root.box.lo[i] = x[i] - h[static_cast<std::size_t>(i)];
    root.box.hi[i] = x[i] + h[static_cast<std::size_t>(i)];
  }
  if (model.has_heading() && std::fabs(angle_difference(anchor.theta(), 0.0)) > 1e-12)
    fail(ErrorKind::InvalidArgument, "cell boxes are axis aligned; anchor heading must be 0");
  root.anchor = anchor;
  expand(model, root, depth, model.box_weights(), s);
  return root;
}

HcsCover build_cover(const DynamicsModel& model, const Box& support, double eps0, double rho, int s) {
  require_hcs(model);
  if (!(eps0 > 0.0)) fail(ErrorKind::InvalidArgument, "eps0 must be positive");
  if (rho < 0.0) fail(ErrorKind::InvalidArgument, "rho must be nonnegative");
  if (support.dim != model.workspace_dim()) fail(ErrorKind::InvalidArgument, "support dimension does not match model");
  for (int i = 0; i < support.dim; ++i)
    if (!(support.width(i) > 0.0)) fail(ErrorKind::InvalidArgument, "support must have positive extent");

  HcsCover cover;
  cover.model = model.kind();
  cover.support = support;
  cover.eps0 = eps0;
  cover.rho = 0.0;
  cover.s = s;
  cover.gamma = model.gamma();
  cover.weights = model.box_weights();

  // Stripes of constant speed scale along x.
  std::vector<double> cuts{support.lo[0]};
  if (model.kind() == ModelKind::ScaledEuclidean2)
    for (double b : model.sigma().breaks)
      if (b > support.lo[0] && b < support.hi[0]) cuts.push_back(b);
  cuts.push_back(support.hi[0]);

  for (std::size_t r = 0; r + 1 < cuts.size(); ++r) {
    Box region = support;
    region.lo[0] = cuts[r];
    region.hi[0] = cuts[r + 1];
    const auto h = max_half_widths(model, eps0, local_sigma(model, region.center()[0]));
    std::array<int, 3> k{1, 1, 1};
    for (int i = 0; i < support.dim; ++i)
      k[i] = std::max(1, static_cast<int>(std::ceil(region.width(i) / (2.0 * h[static_cast<std::size_t>(i)]) - 1e-9)));
    cover.regions.push_back({region, k, cover.roots.size()});
    for (int iz = 0; iz < k[2]; ++iz)
      for (int iy = 0; iy < k[1]; ++iy)
        for (int ix = 0; ix < k[0]; ++ix) {
          const std::array<int, 3> idx{ix, iy, iz};
          Cell c;
          c.eps = eps0;
          c.box.dim = support.dim;
          for (int i = 0; i < support.dim; ++i) {
            const double w = region.width(i) / k[i];
            c.box.lo[i] = region.lo[i] + idx[i] * w;
            c.box.hi[i] = idx[i] + 1 == k[i] ? region.hi[i] : region.lo[i] + (idx[i] + 1) * w;
          }
          c.anchor = anchor_of(model, c.box, 0.0);
          cover.roots.push_back(std::move(c));
        }
  }
  return cover;
}

namespace {

// Cell index along one axis of an evenly split interval, honouring half-open bounds.
int axis_slot(double x, double lo, double hi, int k) {
  const double w = (hi - lo) / k;
  int i = std::clamp(static_cast<int>(std::floor((x - lo) / w)), 0, k - 1);
  while (i > 0 && x < lo + i * w) --i;
  while (i + 1 < k && x >= lo + (i + 1) * w) ++i;
  return i;
}

}  // namespace

std::size_t locate_root(const HcsCover& cover, const WorkspacePoint& x) {
  if (!cover.support.contains_closed(x)) fail(ErrorKind::OutOfSupport, "point outside the cover support");
  std::size_t r = 0;
  while (r + 1 < cover.regions.size() && x[0] >= cover.regions[r + 1].box.lo[0]) ++r;
  const CoverRegion& reg = cover.regions[r];
  std::array<int, 3> idx{0, 0, 0};
  for (int i = 0; i < reg.box.dim; ++i) idx[i] = axis_slot(x[i], reg.box.lo[i], reg.box.hi[i], reg.k[i]);
  return reg.first_root + static_cast<std::size_t>(idx[0] + reg.k[0] * (idx[1] + reg.k[1] * idx[2]));
}

Location locate_path(const HcsCover& cover, const WorkspacePoint& x, int depth) {
  if (depth < 0) fail(ErrorKind::InvalidArgument, "depth must be nonnegative");
  Location loc;
  loc.root = locate_root(cover, x);
  Box box = cover.roots[loc.root].box;
  loc.path.child.reserve(static_cast<std::size_t>(depth));
  for (int d = 0; d < depth; ++d) {
    const int c = child_index(box, cover.weights, cover.s, x);
    loc.path.child.push_back(c);
    box = child_box(box, cover.weights, cover.s, c);
  }
  return loc;
}

Box vertex_box(const HcsCover& cover, std::size_t root, const std::vector<int>& prefix) {
  if (root >= cover.roots.size()) fail(ErrorKind::InvalidArgument, "root index out of range");
  Box box = cover.roots[root].box;
  for (int c : prefix) box = child_box(box, cover.weights, cover.s, c);
  return box;
}

Configuration vertex_anchor(const HcsCover& cover, std::size_t root, const std::vector<int>& prefix) {
  const Configuration& a = cover.roots[root].anchor;
  const Box box = vertex_box(cover, root, prefix);
  Configuration q = a;
  const auto c = box.center();
  for (int i = 0; i < box.dim; ++i) q.v[static_cast<std::size_t>(i)] = c[i];
  return q;
}

AlphaMeasure measure_alpha(const Cell& cell, const DynamicsModel& model, double g_hat, std::size_t n, Rng& rng) {
  if (!(g_hat > 0.0)) fail(ErrorKind::InvalidArgument, "g_hat must be positive");
  if (n == 0) fail(ErrorKind::InvalidArgument, "sample count must be positive");
  AlphaMeasure m;
  m.alpha = cell.box.volume() / (g_hat * std::pow(cell.eps, model.gamma()));
  std::size_t inside = 0;
  for (std::size_t k = 0; k < n; ++k) {
    Configuration q = cell.anchor;
    for (int i = 0; i < cell.box.dim; ++i) q.v[static_cast<std::size_t>(i)] = rng.uniform(cell.box.lo[i], cell.box.hi[i]);
    if (steer_time(model, cell.anchor, q) <= cell.eps * (1.0 + 1e-9)) ++inside;
  }
  m.reachable_fraction = static_cast<double>(inside) / static_cast<double>(n);
  if (m.reachable_fraction < 0.99) fail(ErrorKind::CellNotContained, "cell box is not inside the reachable set");
  return m;
}

int measured_branching(const DynamicsModel& model, double eps) {
  require_hcs(model);
  const auto h = max_half_widths(model, eps, 1.0);
  const double reach = 2.0 * model.c() * eps;
  std::vector<double> extent(h.size(), 2.0 * reach);
  if (model.kind() == ModelKind::ReedsShepp) {
    const double r = model.r_min();
    extent[1] = 2.0 * r * (1.0 - std::cos(std::min(reach / r, std::numbers::pi)));
  }
  int b = 1;
  for (std::size_t i = 0; i < h.size(); ++i) b *= static_cast<int>(std::ceil(extent[i] / (2.0 * h[i]) - 1e-9));
  return b;
}

std::string cover_to_json(const HcsCover& cover) {
  nlohmann::ordered_json j;
  j["eps0"] = cover.eps0;
  j["s"] = cover.s;
  j["gamma"] = cover.gamma;
  j["rho"] = cover.rho;
  auto roots = nlohmann::ordered_json::array();
  for (const auto& c : cover.roots) {
    nlohmann::ordered_json r;
    r["anchor"] = c.anchor.v;
    std::vector<double> lo(c.box.lo.begin(), c.box.lo.begin() + c.box.dim), hi(c.box.hi.begin(), c.box.hi.begin() + c.box.dim);
    r["box"] = {{"lo", lo}, {"hi", hi}};
    roots.push_back(r);
  }
  j["roots"] = roots;
  return j.dump();
}

}  // namespace dstsp::hcs
