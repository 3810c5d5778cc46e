#include "mplex/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "mplex/error.hpp"

namespace mplex {

NodeUniverse::NodeUniverse(std::vector<std::string> names) : names_(std::move(names)) {
  lookup_.reserve(names_.size());
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i].empty()) throw precondition_error("empty node identifier");
    if (!lookup_.emplace(names_[i], static_cast<NodeIndex>(i)).second)
      throw precondition_error("duplicate node identifier '" + names_[i] + "'");
  }
}

std::shared_ptr<const NodeUniverse> NodeUniverse::anonymous(std::size_t n) {
  std::vector<std::string> names(n);
  for (std::size_t i = 0; i < n; ++i) names[i] = std::to_string(i);
  return std::make_shared<const NodeUniverse>(std::move(names));
}

std::optional<NodeIndex> NodeUniverse::find(const std::string& name) const {
  auto it = lookup_.find(name);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

NodeIndex NodeUniverse::index(const std::string& name) const {
  auto i = find(name);
  if (!i) throw precondition_error("unknown node '" + name + "'");
  return *i;
}

Digraph::Digraph(UniversePtr universe, std::vector<Edge> edges) : universe_(std::move(universe)) {
  if (!universe_) throw precondition_error("graph without node universe");
  const std::size_t n = universe_->size();
  for (const auto& e : edges) {
    if (e.source >= n || e.target >= n) throw precondition_error("edge endpoint outside node universe");
    if (!(e.weight >= 0.0) || !std::isfinite(e.weight))
      throw precondition_error("edge weight must be finite and nonnegative");
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.source != b.source ? a.source < b.source : a.target < b.target;
  });
  edges_.reserve(edges.size());
  for (const auto& e : edges) {
    if (!edges_.empty() && edges_.back().source == e.source && edges_.back().target == e.target)
      edges_.back().weight += e.weight;
    else
      edges_.push_back(e);
  }
  std::erase_if(edges_, [](const Edge& e) { return e.weight == 0.0; });

  out_offsets_.assign(n + 1, 0);
  in_offsets_.assign(n + 1, 0);
  for (const auto& e : edges_) {
    ++out_offsets_[e.source + 1];
    ++in_offsets_[e.target + 1];
    if (e.source == e.target) ++self_loops_;
  }
  std::partial_sum(out_offsets_.begin(), out_offsets_.end(), out_offsets_.begin());
  std::partial_sum(in_offsets_.begin(), in_offsets_.end(), in_offsets_.begin());
  out_arcs_.resize(edges_.size());
  in_arcs_.resize(edges_.size());
  std::vector<std::size_t> out_pos(out_offsets_.begin(), out_offsets_.end() - 1);
  std::vector<std::size_t> in_pos(in_offsets_.begin(), in_offsets_.end() - 1);
  // edges_ is sorted by (source, target), so both arc lists come out sorted.
  for (const auto& e : edges_) {
    out_arcs_[out_pos[e.source]++] = Arc{e.target, e.weight};
    in_arcs_[in_pos[e.target]++] = Arc{e.source, e.weight};
  }
}

Digraph::Digraph(std::size_t n, std::vector<Edge> edges) : Digraph(NodeUniverse::anonymous(n), std::move(edges)) {}

double Digraph::total_weight() const noexcept {
  double total = 0.0;
  for (const auto& e : edges_) total += e.weight;
  return total;
}

std::span<const Arc> Digraph::out(NodeIndex i) const {
  return {out_arcs_.data() + out_offsets_.at(i), out_arcs_.data() + out_offsets_.at(i + 1)};
}

std::span<const Arc> Digraph::in(NodeIndex i) const {
  return {in_arcs_.data() + in_offsets_.at(i), in_arcs_.data() + in_offsets_.at(i + 1)};
}

double Digraph::weight(NodeIndex i, NodeIndex j) const {
  auto arcs = out(i);
  auto it = std::lower_bound(arcs.begin(), arcs.end(), j, [](const Arc& a, NodeIndex v) { return a.node < v; });
  return (it != arcs.end() && it->node == j) ? it->weight : 0.0;
}

bool Digraph::has_edge(NodeIndex i, NodeIndex j) const { return weight(i, j) > 0.0; }

bool Digraph::is_binary() const noexcept {
  return std::all_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.weight == 1.0; });
}

bool Digraph::operator==(const Digraph& other) const {
  return *universe_ == *other.universe_ && edges_ == other.edges_;
}

Graph::Graph(std::size_t n, std::vector<std::vector<NodeIndex>> adjacency) : adjacency_(std::move(adjacency)) {
  if (adjacency_.size() != n) throw precondition_error("adjacency size mismatch");
  std::size_t ends = 0;
  for (std::size_t i = 0; i < n; ++i) {
    auto& nb = adjacency_[i];
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    std::erase(nb, static_cast<NodeIndex>(i));
    ends += nb.size();
  }
  edges_ = ends / 2;
}

bool Graph::has_edge(NodeIndex i, NodeIndex j) const {
  const auto& nb = adjacency_.at(i);
  return std::binary_search(nb.begin(), nb.end(), j);
}

Multiplex::Multiplex(std::string period, UniversePtr universe, std::vector<Layer> layers)
    : period_(std::move(period)), universe_(std::move(universe)), layers_(std::move(layers)) {
  std::set<std::string> seen;
  for (const auto& layer : layers_) {
    if (!seen.insert(layer.name).second) throw precondition_error("duplicate layer '" + layer.name + "'");
    if (!(*layer.graph.universe() == *universe_))
      throw precondition_error("layer '" + layer.name + "' does not share the multiplex node universe");
  }
}

std::vector<std::string> Multiplex::layer_names() const {
  std::vector<std::string> names;
  for (const auto& l : layers_) names.push_back(l.name);
  return names;
}

bool Multiplex::has_layer(const std::string& name) const {
  return std::any_of(layers_.begin(), layers_.end(), [&](const Layer& l) { return l.name == name; });
}

const Digraph& Multiplex::layer(const std::string& name) const {
  for (const auto& l : layers_)
    if (l.name == name) return l.graph;
  throw precondition_error("unknown layer '" + name + "'");
}

GroupMap::GroupMap(std::map<std::string, std::string> bank_to_group) : map_(std::move(bank_to_group)) {
  for (const auto& [bank, group] : map_)
    if (bank.empty() || group.empty()) throw precondition_error("empty identifier in group map");
}

std::optional<std::string> GroupMap::group_of(const std::string& bank) const {
  auto it = map_.find(bank);
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

Multiplex consolidate(const Multiplex& m, const GroupMap& groups) {
  const auto& banks = *m.universe();
  std::vector<std::string> group_names;
  std::set<std::string> seen;
  std::vector<std::string> group_of(banks.size());
  for (std::size_t i = 0; i < banks.size(); ++i) {
    auto g = groups.group_of(banks.name(static_cast<NodeIndex>(i)));
    if (!g) throw precondition_error("node '" + banks.name(static_cast<NodeIndex>(i)) + "' has no group");
    group_of[i] = *g;
    if (seen.insert(*g).second) group_names.push_back(*g);
  }
  auto universe = std::make_shared<const NodeUniverse>(group_names);
  std::vector<NodeIndex> relabel(banks.size());
  for (std::size_t i = 0; i < banks.size(); ++i) relabel[i] = universe->index(group_of[i]);

  std::vector<Layer> layers;
  for (const auto& layer : m.layers()) {
    std::vector<Edge> edges;
    edges.reserve(layer.graph.edge_count());
    for (const auto& e : layer.graph.edges()) edges.push_back({relabel[e.source], relabel[e.target], e.weight});
    layers.push_back({layer.name, Digraph(universe, std::move(edges))});
  }
  return Multiplex(m.period(), universe, std::move(layers));
}

Digraph aggregate_layers(const Multiplex& m, const std::vector<std::string>& layers) {
  std::vector<Edge> edges;
  for (const auto& name : layers) {
    const auto& g = m.layer(name);
    edges.insert(edges.end(), g.edges().begin(), g.edges().end());
  }
  return Digraph(m.universe(), std::move(edges));
}

Digraph aggregate_all_layers(const Multiplex& m) { return aggregate_layers(m, m.layer_names()); }

Digraph project_binary(const Digraph& g) {
  std::vector<Edge> edges = g.edges();
  for (auto& e : edges) e.weight = 1.0;
  return Digraph(g.universe(), std::move(edges));
}

Graph symmetrize(const Digraph& g) {
  std::vector<std::vector<NodeIndex>> adjacency(g.node_count());
  for (const auto& e : g.edges()) {
    if (e.source == e.target) continue;
    adjacency[e.source].push_back(e.target);
    adjacency[e.target].push_back(e.source);
  }
  return Graph(g.node_count(), std::move(adjacency));
}

StrippedGraph strip_self_loops(const Digraph& g) {
  StrippedGraph result;
  std::vector<Edge> kept;
  kept.reserve(g.edge_count());
  for (const auto& e : g.edges()) {
    if (e.source == e.target) {
      ++result.removed_count;
      result.removed_weight += e.weight;
    } else {
      kept.push_back(e);
    }
  }
  result.graph = Digraph(g.universe(), std::move(kept));
  return result;
}

std::vector<bool> active_nodes(const Digraph& g) {
  std::vector<bool> active(g.node_count(), false);
  for (const auto& e : g.edges()) {
    if (e.source == e.target) continue;
    active[e.source] = true;
    active[e.target] = true;
  }
  return active;
}

std::size_t active_node_count(const Digraph& g) {
  auto active = active_nodes(g);
  return static_cast<std::size_t>(std::count(active.begin(), active.end(), true));
}

}  // namespace mplex
