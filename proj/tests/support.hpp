#pragma once

#include <set>
#include <vector>

#include "dstsp/hcp.hpp"
#include "dstsp/rng.hpp"

namespace dstsp::testing {

// Random instance with distinct target paths of exactly `depth` levels.
inline hcp::HcpInstance random_hcp_instance(Rng& rng, int b, int s, std::size_t n, int depth) {
  hcp::HcpInstance inst;
  inst.params = {b, s};
  std::set<std::vector<int>> seen;
  while (inst.targets.size() < n) {
    std::vector<int> path(depth);
    for (int& c : path) c = static_cast<int>(rng.below(b));
    if (seen.insert(path).second) inst.targets.push_back({path});
  }
  return inst;
}

}  // namespace dstsp::testing
