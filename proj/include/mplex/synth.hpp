#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mplex/graph.hpp"

namespace mplex {

struct SynthLayerConfig {
  std::string name;
  double density = 0.01;        // target l / (n_active (n_active - 1))
  double exponent = 2.3;        // Pareto tail exponent of node fitness
  double reciprocity = 0.0;     // probability of adding j->i behind a drawn i->j
  double participation = 1.0;   // fraction of nodes allowed to trade in the layer
};

struct SynthConfig {
  std::size_t n_nodes = 500;
  std::string period = "synthetic";
  // 0: layers draw independently. 1: every random draw is shared, so layers
  // with identical settings come out identical.
  double overlap = 0.5;
  double weight_scale = 1.0;    // millions of EUR per unit fitness product
  double weight_noise = 1.0;    // sigma of the mean-one lognormal weight factor
  std::uint64_t seed = 0;
  std::vector<SynthLayerConfig> layers;
};

// Five layers named after the default vocabulary: sparse, shrinking
// participation from overnight to secured long term, mild reciprocity.
// Meant for a few hundred nodes or more; tiny universes may leave the smallest
// layers infeasible.
SynthConfig default_synth_config(std::size_t n_nodes, std::uint64_t seed);

// Throws precondition_error on an invalid configuration.
void validate(const SynthConfig& config);

// Deterministic in the config. Node i is named "B" followed by i zero-padded,
// so the universe order equals the index order.
//
// Per layer: fitness f_i ~ Pareto(exponent) on [1, inf), links i->j with
// probability min(1, c f_i f_j) between participating nodes, each drawn link
// answered by j->i with probability `reciprocity`, weights
// weight_scale * f_i f_j * lognormal noise. The constant c is chosen so that
// the expected link count over the expected active node pairs matches the
// target density; a target below what the participants can realize raises
// precondition_error.
Multiplex generate(const SynthConfig& config);

}  // namespace mplex
