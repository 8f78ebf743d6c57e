#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "dstsp/dynamics.hpp"

namespace dstsp {

// Cell-centred scalar field on a regular grid of square cells. Rank 1 fields
// have ny = 1 and measure cell_size per cell; rank 2 fields cell_size^2.
struct GridField {
  std::array<double, 2> origin{0.0, 0.0};
  double cell_size = 1.0;
  std::size_t nx = 0;
  std::size_t ny = 1;
  int rank = 2;
  std::vector<double> values;  // row-major: index = iy * nx + ix

  static GridField make(std::array<double, 2> origin, double cell_size, std::size_t nx, std::size_t ny, double fill = 0.0);
  static GridField make_1d(double origin, double cell_size, std::size_t nx, double fill = 0.0);
  // Unit square split into n x n cells.
  static GridField unit_square(std::size_t n, double fill = 0.0);

  template <class F>
  static GridField from_function(std::array<double, 2> origin, double cell_size, std::size_t nx, std::size_t ny, F&& f) {
    GridField g = make(origin, cell_size, nx, ny);
    for (std::size_t iy = 0; iy < ny; ++iy)
      for (std::size_t ix = 0; ix < nx; ++ix) {
        auto c = g.center(ix, iy);
        g.values[g.index(ix, iy)] = f(c[0], c[1]);
      }
    return g;
  }

  std::size_t size() const { return values.size(); }
  std::size_t index(std::size_t ix, std::size_t iy) const { return iy * nx + ix; }
  std::array<double, 2> center(std::size_t ix, std::size_t iy) const;
  std::array<double, 2> center(std::size_t i) const { return center(i % nx, i / nx); }
  double cell_measure() const;
  std::array<double, 2> upper() const;
  bool contains(double x, double y) const;
  // Value of the cell containing (x, y); throws OutOfGrid outside.
  double at(double x, double y) const;
  bool same_geometry(const GridField& other) const;
  double integral() const;
  double min() const;
  double max() const;
};

std::string grid_to_json(const GridField& g);
GridField grid_from_json(const std::string& text);

}  // namespace dstsp
