#pragma once

#include <string>
#include <vector>

#include "mplex/graph.hpp"

namespace testing {

inline mplex::Digraph graph(std::size_t n, std::vector<mplex::Edge> edges) { return {n, std::move(edges)}; }

// Unit-weight digraph from (source, target) pairs.
inline mplex::Digraph arcs(std::size_t n, std::initializer_list<std::pair<int, int>> pairs) {
  std::vector<mplex::Edge> edges;
  for (auto [a, b] : pairs) edges.push_back({static_cast<mplex::NodeIndex>(a), static_cast<mplex::NodeIndex>(b), 1.0});
  return {n, std::move(edges)};
}

inline mplex::Digraph complete(std::size_t n) {
  std::vector<mplex::Edge> edges;
  for (mplex::NodeIndex i = 0; i < n; ++i)
    for (mplex::NodeIndex j = 0; j < n; ++j)
      if (i != j) edges.push_back({i, j, 1.0});
  return {n, std::move(edges)};
}

// Named universe "n0".."n{k-1}".
inline mplex::UniversePtr names(std::vector<std::string> v) {
  return std::make_shared<const mplex::NodeUniverse>(std::move(v));
}

}  // namespace testing
