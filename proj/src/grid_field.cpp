#include "dstsp/grid_field.hpp"

#include <algorithm>
#include <cmath>

#include "dstsp/error.hpp"
#include "json.hpp"

namespace dstsp {

GridField GridField::make(std::array<double, 2> origin, double cell_size, std::size_t nx, std::size_t ny, double fill) {
  if (!(cell_size > 0.0) || nx == 0 || ny == 0) fail(ErrorKind::InvalidArgument, "grid needs positive cell size and dims");
  GridField g;
  g.origin = origin;
  g.cell_size = cell_size;
  g.nx = nx;
  g.ny = ny;
  g.rank = 2;
  g.values.assign(nx * ny, fill);
  return g;
}

GridField GridField::make_1d(double origin, double cell_size, std::size_t nx, double fill) {
  GridField g = make({origin, 0.0}, cell_size, nx, 1, fill);
  g.rank = 1;
  return g;
}

GridField GridField::unit_square(std::size_t n, double fill) { return make({0.0, 0.0}, 1.0 / static_cast<double>(n), n, n, fill); }

std::array<double, 2> GridField::center(std::size_t ix, std::size_t iy) const {
  return {origin[0] + (static_cast<double>(ix) + 0.5) * cell_size,
          rank == 1 ? origin[1] : origin[1] + (static_cast<double>(iy) + 0.5) * cell_size};
}

double GridField::cell_measure() const { return rank == 1 ? cell_size : cell_size * cell_size; }

std::array<double, 2> GridField::upper() const {
  return {origin[0] + static_cast<double>(nx) * cell_size, origin[1] + static_cast<double>(ny) * cell_size};
}

bool GridField::contains(double x, double y) const {
  auto up = upper();
  if (x < origin[0] || x > up[0]) return false;
  if (rank == 1) return true;
  return y >= origin[1] && y <= up[1];
}

double GridField::at(double x, double y) const {
  if (!contains(x, y)) fail(ErrorKind::OutOfGrid, "point outside field grid");
  auto ix = static_cast<std::size_t>(std::clamp((x - origin[0]) / cell_size, 0.0, static_cast<double>(nx - 1)));
  std::size_t iy = 0;
  if (rank == 2) iy = static_cast<std::size_t>(std::clamp((y - origin[1]) / cell_size, 0.0, static_cast<double>(ny - 1)));
  return values[index(ix, iy)];
}

bool GridField::same_geometry(const GridField& o) const {
  return nx == o.nx && ny == o.ny && rank == o.rank && std::fabs(cell_size - o.cell_size) <= 1e-12 * cell_size &&
         std::fabs(origin[0] - o.origin[0]) <= 1e-12 && std::fabs(origin[1] - o.origin[1]) <= 1e-12;
}

double GridField::integral() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * cell_measure();
}

double GridField::min() const { return *std::min_element(values.begin(), values.end()); }
double GridField::max() const { return *std::max_element(values.begin(), values.end()); }

std::string grid_to_json(const GridField& g) {
  nlohmann::ordered_json j;
  j["origin"] = g.rank == 1 ? nlohmann::ordered_json::array({g.origin[0]}) : nlohmann::ordered_json::array({g.origin[0], g.origin[1]});
  j["cell_size"] = g.cell_size;
  j["dims"] = g.rank == 1 ? nlohmann::ordered_json::array({g.nx}) : nlohmann::ordered_json::array({g.nx, g.ny});
  j["values"] = g.values;
  return j.dump();
}

GridField grid_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    fail(ErrorKind::ConfigError, std::string("grid field: ") + e.what());
  }
  try {
    auto dims = j.at("dims").get<std::vector<std::size_t>>();
    auto origin = j.at("origin").get<std::vector<double>>();
    double cell = j.at("cell_size").get<double>();
    GridField g;
    if (dims.size() == 1) {
      g = GridField::make_1d(origin.at(0), cell, dims[0]);
    } else if (dims.size() == 2) {
      g = GridField::make({origin.at(0), origin.at(1)}, cell, dims[0], dims[1]);
    } else {
      fail(ErrorKind::ConfigError, "grid field: dims must have 1 or 2 entries");
    }
    g.values = j.at("values").get<std::vector<double>>();
    if (g.values.size() != g.nx * g.ny) fail(ErrorKind::ConfigError, "grid field: value count does not match dims");
    for (double v : g.values)
      if (!std::isfinite(v)) fail(ErrorKind::ConfigError, "grid field: non-finite value");
    return g;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ConfigError, std::string("grid field: ") + e.what());
  }
}

}  // namespace dstsp
