#pragma once

#include <array>
#include <vector>

namespace dstsp::rs {

enum class Seg { None, Left, Straight, Right };

// Shortest word for unit turning radius. lengths are signed (negative =
// reverse); turns are angles, straight parts distances.
struct Word {
  std::array<Seg, 5> types{};
  std::array<double, 5> lengths{};
  double total = 0.0;
};

// Path from (0,0,0) to (x, y, phi) with unit turning radius.
Word shortest(double x, double y, double phi);

}  // namespace dstsp::rs
