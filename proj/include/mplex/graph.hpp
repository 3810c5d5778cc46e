#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace mplex {

using NodeIndex = std::uint32_t;

// Ordered set of node identifiers (bank or group codes). Indices into the
// universe are what graphs store.
class NodeUniverse {
 public:
  explicit NodeUniverse(std::vector<std::string> names);

  // Universe with names "0", "1", ..., "n-1".
  static std::shared_ptr<const NodeUniverse> anonymous(std::size_t n);

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(NodeIndex i) const { return names_.at(i); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::optional<NodeIndex> find(const std::string& name) const;
  NodeIndex index(const std::string& name) const;  // throws on unknown names

  bool operator==(const NodeUniverse& other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, NodeIndex> lookup_;
};

using UniversePtr = std::shared_ptr<const NodeUniverse>;

struct Edge {
  NodeIndex source;
  NodeIndex target;
  double weight;

  bool operator==(const Edge&) const = default;
};

struct Arc {
  NodeIndex node;
  double weight;
};

// Immutable sparse directed graph with positive edge weights. Duplicate
// (source, target) pairs passed to the constructor are summed, zero weights
// are dropped. Self-loops are stored and counted separately.
class Digraph {
 public:
  Digraph() : Digraph(NodeUniverse::anonymous(0), {}) {}
  Digraph(UniversePtr universe, std::vector<Edge> edges);
  // Convenience for anonymous universes.
  Digraph(std::size_t n, std::vector<Edge> edges);

  const UniversePtr& universe() const noexcept { return universe_; }
  std::size_t node_count() const noexcept { return universe_->size(); }
  // All stored edges, self-loops included.
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::size_t self_loop_count() const noexcept { return self_loops_; }
  double total_weight() const noexcept;

  // Edges sorted by (source, target).
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::span<const Arc> out(NodeIndex i) const;
  std::span<const Arc> in(NodeIndex i) const;

  double weight(NodeIndex i, NodeIndex j) const;  // 0 when absent
  bool has_edge(NodeIndex i, NodeIndex j) const;
  bool is_binary() const noexcept;

  bool operator==(const Digraph& other) const;

 private:
  UniversePtr universe_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> out_offsets_, in_offsets_;
  std::vector<Arc> out_arcs_, in_arcs_;
  std::size_t self_loops_ = 0;
};

// Simple undirected graph without self-loops; neighbor lists are sorted.
class Graph {
 public:
  Graph(std::size_t n, std::vector<std::vector<NodeIndex>> adjacency);

  std::size_t node_count() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return edges_; }
  std::span<const NodeIndex> neighbors(NodeIndex i) const { return adjacency_.at(i); }
  std::size_t degree(NodeIndex i) const { return adjacency_.at(i).size(); }
  bool has_edge(NodeIndex i, NodeIndex j) const;

 private:
  std::vector<std::vector<NodeIndex>> adjacency_;
  std::size_t edges_ = 0;
};

struct Layer {
  std::string name;
  Digraph graph;
};

// One observation period of a multiplex. All layers share `universe`.
class Multiplex {
 public:
  Multiplex(std::string period, UniversePtr universe, std::vector<Layer> layers);

  const std::string& period() const noexcept { return period_; }
  const UniversePtr& universe() const noexcept { return universe_; }
  const std::vector<Layer>& layers() const noexcept { return layers_; }
  std::vector<std::string> layer_names() const;
  const Digraph& layer(const std::string& name) const;  // throws on unknown names
  bool has_layer(const std::string& name) const;

 private:
  std::string period_;
  UniversePtr universe_;
  std::vector<Layer> layers_;
};

// Bank -> banking group. Total over the banks it is applied to.
class GroupMap {
 public:
  GroupMap() = default;
  explicit GroupMap(std::map<std::string, std::string> bank_to_group);

  std::optional<std::string> group_of(const std::string& bank) const;
  const std::map<std::string, std::string>& entries() const noexcept { return map_; }

 private:
  std::map<std::string, std::string> map_;
};

struct StrippedGraph {
  Digraph graph;
  std::size_t removed_count = 0;
  double removed_weight = 0.0;
};

// Relabels banks to groups. Intra-group exposures become self-loops on the
// group node; parallel edges created by the relabelling are summed.
Multiplex consolidate(const Multiplex& m, const GroupMap& groups);

// Entrywise sum of the selected layers' weight matrices.
Digraph aggregate_layers(const Multiplex& m, const std::vector<std::string>& layers);
Digraph aggregate_all_layers(const Multiplex& m);

Digraph project_binary(const Digraph& g);
Graph symmetrize(const Digraph& g);
StrippedGraph strip_self_loops(const Digraph& g);

// A node is active when it has at least one incident edge that is not a
// self-loop.
std::vector<bool> active_nodes(const Digraph& g);
std::size_t active_node_count(const Digraph& g);

}  // namespace mplex
