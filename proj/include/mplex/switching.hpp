#pragma once

#include <cstddef>
#include <cstdint>

#include "mplex/graph.hpp"
#include "mplex/rng.hpp"

namespace mplex {

enum class SwitchMode {
  degree,     // preserves every node's in- and out-degree
  reciprocal  // additionally preserves every node's mutual degree
};

struct SwitchOptions {
  SwitchMode mode = SwitchMode::degree;
  std::size_t switches_per_edge = 10;  // accepted switches per edge
  // Attempts allowed per requested switch before giving up.
  std::size_t attempts_per_switch = 50;
};

struct SwitchResult {
  Digraph graph;
  std::size_t accepted = 0;
  std::size_t attempted = 0;
  std::size_t requested = 0;
  // No switch could be accepted; `graph` is the input unchanged.
  bool stuck = false;
  // Attempt budget ran out before `requested` switches were accepted.
  bool incomplete = false;
};

// Microcanonical randomization by double-edge swaps (a->b, c->d) -> (a->d, c->b)
// on a binary graph without self-loops. In reciprocal mode mutual pairs are
// swapped as undirected units among themselves and single links among
// themselves, and no swap may create or destroy a mutual pair.
SwitchResult switch_randomize(const Digraph& g, const SwitchOptions& options, Rng& rng);
SwitchResult switch_randomize(const Digraph& g, const SwitchOptions& options, std::uint64_t seed);

}  // namespace mplex
