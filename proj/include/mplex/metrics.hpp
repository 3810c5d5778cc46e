#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "mplex/graph.hpp"

namespace mplex {

// Unless noted otherwise every metric ignores self-loops. Functions taking a
// "binary" graph treat any positive weight as a link.

struct DegreeRecord {
  std::size_t k_in = 0;
  std::size_t k_out = 0;
  std::size_t k_mutual = 0;
  double s_in = 0.0;
  double s_out = 0.0;

  std::size_t k_total() const noexcept { return k_in + k_out; }
};

std::vector<DegreeRecord> degree_strength(const Digraph& g);

// l / (n (n - 1)) with n the active node count. Throws degenerate_error when
// fewer than two nodes are active.
double density(const Digraph& g);
// The same ratio for explicit counts.
double density(std::size_t active_nodes, std::size_t edges);

enum class ComponentMode { weak, strong };

// Component sizes over active nodes, largest first.
std::vector<std::size_t> components(const Digraph& g, ComponentMode mode);
// Strongly connected component id per node (Tarjan); inactive nodes get their
// own singleton ids.
std::vector<std::size_t> strong_component_labels(const Digraph& g);

enum class PathMode { undirected, directed };

// Mean geodesic distance over ordered pairs inside the largest weak
// (undirected mode, on the symmetrization) or strong (directed mode) component.
double avg_path_length(const Digraph& g, PathMode mode);

// R = number of reciprocated pairs.
std::size_t reciprocated_links(const Digraph& g);

enum class ReciprocityMode { binary, weighted };

// Correlation between off-diagonal entries of A and its transpose (binary) or
// the strength analogue (weighted). Off-diagonal entries range over active
// nodes.
double reciprocity(const Digraph& g, ReciprocityMode mode);

enum class NodeAttribute { in_degree, out_degree, in_strength, out_strength, degree };

struct Assortativity {
  double coefficient = 0.0;
  double p_value = 1.0;  // two-sided permutation p, +1 corrected
  std::size_t permutations = 0;
};

// Pearson correlation of (x_source, x_target) over edges. Directed attributes
// use each directed edge once; `degree` uses both ends of every edge of the
// symmetrization. n_perm = 0 skips the permutation test.
Assortativity assortativity(const Digraph& g, NodeAttribute attribute, std::size_t n_perm, std::uint64_t seed);
double assortativity_coefficient(const Digraph& g, NodeAttribute attribute);

enum class KnnMode { in, undirected };

// Average neighbor degree as a function of node degree. `in`: for each node
// with in-degree k > 0, the mean in-degree of its lenders (in-neighbors).
// `undirected`: on the symmetrization.
std::map<std::size_t, double> knn_curve(const Digraph& g, KnnMode mode = KnnMode::in);

enum class ClusteringMode { undirected, directed };

struct Clustering {
  std::vector<std::optional<double>> per_node;  // nullopt where undefined
  std::optional<double> average;                // over defined nodes only
  std::size_t undefined_count = 0;
};

Clustering clustering(const Digraph& g, ClusteringMode mode);

// Number of triangles of the symmetrized graph.
std::uint64_t triangles(const Digraph& g);

enum class Direction { in, out };

// Spearman rank correlation of degree vs strength over active nodes, with
// average ranks for ties.
double spearman_degree_strength(const Digraph& g, Direction direction);

// Plain statistics helpers shared by metrics and tests.
double pearson(const std::vector<double>& x, const std::vector<double>& y);
std::vector<double> average_ranks(const std::vector<double>& values);

}  // namespace mplex
