#include "mplex/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

#include "mplex/error.hpp"
#include "mplex/rng.hpp"

namespace mplex {
namespace {

std::size_t non_loop_edges(const Digraph& g) { return g.edge_count() - g.self_loop_count(); }

// Disjoint-set forest with path halving.
struct UnionFind {
  std::vector<std::size_t> parent, size;
  explicit UnionFind(std::size_t n) : parent(n), size(n, 1) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size[a] < size[b]) std::swap(a, b);
    parent[b] = a;
    size[a] += size[b];
  }
};

// Members of the largest component (ties broken by the smallest member index).
std::vector<NodeIndex> largest_component_members(const std::vector<std::size_t>& label,
                                                 const std::vector<bool>& active) {
  std::vector<std::size_t> count(label.size(), 0);
  for (std::size_t i = 0; i < label.size(); ++i)
    if (active[i]) ++count[label[i]];
  std::size_t best_label = 0, best = 0;
  for (std::size_t i = 0; i < label.size(); ++i) {
    if (!active[i]) continue;
    if (count[label[i]] > best) {
      best = count[label[i]];
      best_label = label[i];
    }
  }
  std::vector<NodeIndex> members;
  for (std::size_t i = 0; i < label.size(); ++i)
    if (active[i] && label[i] == best_label) members.push_back(static_cast<NodeIndex>(i));
  return members;
}

std::vector<std::size_t> weak_labels(const Digraph& g) {
  UnionFind uf(g.node_count());
  for (const auto& e : g.edges())
    if (e.source != e.target) uf.unite(e.source, e.target);
  std::vector<std::size_t> label(g.node_count());
  for (std::size_t i = 0; i < label.size(); ++i) label[i] = uf.find(i);
  return label;
}

std::vector<double> node_attribute(const Digraph& g, NodeAttribute attribute) {
  auto records = degree_strength(g);
  std::vector<double> x(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    switch (attribute) {
      case NodeAttribute::in_degree: x[i] = static_cast<double>(r.k_in); break;
      case NodeAttribute::out_degree: x[i] = static_cast<double>(r.k_out); break;
      case NodeAttribute::in_strength: x[i] = r.s_in; break;
      case NodeAttribute::out_strength: x[i] = r.s_out; break;
      case NodeAttribute::degree: x[i] = 0.0; break;
    }
  }
  if (attribute == NodeAttribute::degree) {
    auto s = symmetrize(g);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(s.degree(static_cast<NodeIndex>(i)));
  }
  return x;
}

void edge_attribute_pairs(const Digraph& g, NodeAttribute attribute, std::vector<double>& xs, std::vector<double>& ys) {
  auto x = node_attribute(g, attribute);
  xs.clear();
  ys.clear();
  if (attribute == NodeAttribute::degree) {
    auto s = symmetrize(g);
    for (NodeIndex i = 0; i < s.node_count(); ++i)
      for (NodeIndex j : s.neighbors(i)) {
        xs.push_back(x[i]);
        ys.push_back(x[j]);
      }
    return;
  }
  for (const auto& e : g.edges()) {
    if (e.source == e.target) continue;
    xs.push_back(x[e.source]);
    ys.push_back(x[e.target]);
  }
}

}  // namespace

std::vector<DegreeRecord> degree_strength(const Digraph& g) {
  std::vector<DegreeRecord> records(g.node_count());
  for (const auto& e : g.edges()) {
    if (e.source == e.target) continue;
    auto& src = records[e.source];
    auto& dst = records[e.target];
    ++src.k_out;
    ++dst.k_in;
    src.s_out += e.weight;
    dst.s_in += e.weight;
    if (g.has_edge(e.target, e.source)) ++src.k_mutual;
  }
  return records;
}

double density(std::size_t active_nodes, std::size_t edges) {
  if (active_nodes < 2) throw degenerate_error("density undefined for fewer than two active nodes");
  const double n = static_cast<double>(active_nodes);
  return static_cast<double>(edges) / (n * (n - 1.0));
}

double density(const Digraph& g) { return density(active_node_count(g), non_loop_edges(g)); }

std::vector<std::size_t> strong_component_labels(const Digraph& g) {
  // Iterative Tarjan.
  const std::size_t n = g.node_count();
  constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, unvisited), low(n, 0), label(n, unvisited);
  std::vector<bool> on_stack(n, false);
  std::vector<NodeIndex> stack;
  std::vector<std::pair<NodeIndex, std::size_t>> call;  // (node, next arc position)
  std::size_t counter = 0, next_label = 0;

  for (NodeIndex root = 0; root < n; ++root) {
    if (index[root] != unvisited) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, pos] = call.back();
      auto arcs = g.out(v);
      if (pos < arcs.size()) {
        NodeIndex w = arcs[pos++].node;
        if (w == v) continue;
        if (index[w] == unvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      NodeIndex done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] == index[done]) {
        NodeIndex w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          label[w] = next_label;
        } while (w != done);
        ++next_label;
      }
    }
  }
  return label;
}

std::vector<std::size_t> components(const Digraph& g, ComponentMode mode) {
  auto active = active_nodes(g);
  auto label = mode == ComponentMode::weak ? weak_labels(g) : strong_component_labels(g);
  std::vector<std::size_t> count(g.node_count(), 0);
  for (std::size_t i = 0; i < label.size(); ++i)
    if (active[i]) ++count[label[i]];
  std::vector<std::size_t> sizes;
  for (auto c : count)
    if (c > 0) sizes.push_back(c);
  std::sort(sizes.begin(), sizes.end(), std::greater<>());
  return sizes;
}

double avg_path_length(const Digraph& g, PathMode mode) {
  auto active = active_nodes(g);
  const bool undirected = mode == PathMode::undirected;
  auto members = largest_component_members(undirected ? weak_labels(g) : strong_component_labels(g), active);
  if (members.size() < 2) throw degenerate_error("average path length needs a component with at least two nodes");

  std::vector<bool> in_component(g.node_count(), false);
  for (auto v : members) in_component[v] = true;
  std::optional<Graph> sym;
  if (undirected) sym.emplace(symmetrize(g));

  std::vector<std::size_t> dist(g.node_count());
  std::vector<NodeIndex> frontier;
  constexpr std::size_t inf = static_cast<std::size_t>(-1);
  double total = 0.0;
  for (NodeIndex source : members) {
    std::fill(dist.begin(), dist.end(), inf);
    dist[source] = 0;
    frontier.assign(1, source);
    for (std::size_t head = 0; head < frontier.size(); ++head) {
      NodeIndex v = frontier[head];
      auto visit = [&](NodeIndex w) {
        if (dist[w] == inf && in_component[w]) {
          dist[w] = dist[v] + 1;
          frontier.push_back(w);
        }
      };
      if (undirected) {
        for (NodeIndex w : sym->neighbors(v)) visit(w);
      } else {
        for (const auto& a : g.out(v)) visit(a.node);
      }
    }
    for (NodeIndex v : members)
      if (v != source) total += static_cast<double>(dist[v]);
  }
  const double m = static_cast<double>(members.size());
  return total / (m * (m - 1.0));
}

std::size_t reciprocated_links(const Digraph& g) {
  std::size_t mutual_arcs = 0;
  for (const auto& e : g.edges())
    if (e.source != e.target && g.has_edge(e.target, e.source)) ++mutual_arcs;
  return mutual_arcs / 2;
}

double reciprocity(const Digraph& g, ReciprocityMode mode) {
  const std::size_t n = active_node_count(g);
  if (n < 2) throw degenerate_error("reciprocity undefined for fewer than two active nodes");
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1);

  if (mode == ReciprocityMode::binary) {
    const double l = static_cast<double>(non_loop_edges(g));
    const double r2 = 2.0 * static_cast<double>(reciprocated_links(g));
    // Expanding the centred sums: numerator 2R - l^2/N, denominator l - l^2/N.
    const double denominator = l - l * l / pairs;
    if (l == 0.0 || l == pairs) throw degenerate_error("reciprocity undefined: adjacency has zero variance");
    return (r2 - l * l / pairs) / denominator;
  }

  double sum = 0.0, sum_sq = 0.0, sum_cross = 0.0;
  for (const auto& e : g.edges()) {
    if (e.source == e.target) continue;
    sum += e.weight;
    sum_sq += e.weight * e.weight;
    sum_cross += e.weight * g.weight(e.target, e.source);
  }
  if (sum == 0.0) throw degenerate_error("strength reciprocity undefined: no weight");
  const double mean = sum / pairs;
  const double cross = sum_cross / sum;
  const double omega = sum_sq / sum;
  const double spread = omega - mean;
  if (!(spread > 1e-14 * omega)) throw degenerate_error("strength reciprocity undefined: weights have zero variance");
  return (cross - mean) / spread;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw degenerate_error("correlation needs at least two pairs");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) throw degenerate_error("correlation undefined: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average_ranks(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double assortativity_coefficient(const Digraph& g, NodeAttribute attribute) {
  std::vector<double> xs, ys;
  edge_attribute_pairs(g, attribute, xs, ys);
  if (xs.size() < 2) throw degenerate_error("assortativity needs at least two edges");
  return pearson(xs, ys);
}

Assortativity assortativity(const Digraph& g, NodeAttribute attribute, std::size_t n_perm, std::uint64_t seed) {
  std::vector<double> xs, ys;
  edge_attribute_pairs(g, attribute, xs, ys);
  if (xs.size() < 2) throw degenerate_error("assortativity needs at least two edges");
  Assortativity result;
  result.coefficient = pearson(xs, ys);
  result.permutations = n_perm;
  if (n_perm == 0) return result;
  Rng rng(derive_seed(seed, 0));
  const double observed = std::abs(result.coefficient);
  std::size_t extreme = 0;
  for (std::size_t p = 0; p < n_perm; ++p) {
    std::shuffle(ys.begin(), ys.end(), rng);
    if (std::abs(pearson(xs, ys)) >= observed - 1e-12) ++extreme;
  }
  result.p_value = static_cast<double>(extreme + 1) / static_cast<double>(n_perm + 1);
  return result;
}

std::map<std::size_t, double> knn_curve(const Digraph& g, KnnMode mode) {
  std::map<std::size_t, std::pair<double, std::size_t>> acc;
  if (mode == KnnMode::undirected) {
    auto s = symmetrize(g);
    for (NodeIndex i = 0; i < s.node_count(); ++i) {
      const std::size_t k = s.degree(i);
      if (k == 0) continue;
      double sum = 0.0;
      for (NodeIndex j : s.neighbors(i)) sum += static_cast<double>(s.degree(j));
      auto& slot = acc[k];
      slot.first += sum / static_cast<double>(k);
      ++slot.second;
    }
  } else {
    auto records = degree_strength(g);
    for (NodeIndex i = 0; i < g.node_count(); ++i) {
      const std::size_t k = records[i].k_in;
      if (k == 0) continue;
      double sum = 0.0;
      for (const auto& a : g.in(i))
        if (a.node != i) sum += static_cast<double>(records[a.node].k_in);
      auto& slot = acc[k];
      slot.first += sum / static_cast<double>(k);
      ++slot.second;
    }
  }
  std::map<std::size_t, double> curve;
  for (const auto& [k, slot] : acc) curve[k] = slot.first / static_cast<double>(slot.second);
  return curve;
}

Clustering clustering(const Digraph& g, ClusteringMode mode) {
  const std::size_t n = g.node_count();
  auto s = symmetrize(g);
  Clustering result;
  result.per_node.assign(n, std::nullopt);
  std::vector<int> mark(n, 0);  // B_ij = a_ij + a_ji for the current i

  auto link = [&](NodeIndex a, NodeIndex b) { return (g.has_edge(a, b) ? 1 : 0) + (g.has_edge(b, a) ? 1 : 0); };
  std::vector<DegreeRecord> records;
  if (mode == ClusteringMode::directed) records = degree_strength(g);

  double total = 0.0;
  std::size_t defined = 0;
  for (NodeIndex i = 0; i < n; ++i) {
    auto nb = s.neighbors(i);
    for (NodeIndex j : nb) mark[j] = mode == ClusteringMode::directed ? link(i, j) : 1;
    double numerator = 0.0;
    for (NodeIndex j : nb)
      for (NodeIndex h : s.neighbors(j)) {
        if (h == i || mark[h] == 0) continue;
        // Ordered pairs (j, h); each undirected triangle through i is seen twice.
        numerator += mode == ClusteringMode::directed ? mark[j] * mark[h] * link(j, h) : 1.0;
      }
    for (NodeIndex j : nb) mark[j] = 0;

    double denominator = 0.0;
    if (mode == ClusteringMode::undirected) {
      const double k = static_cast<double>(nb.size());
      denominator = k * (k - 1.0);
    } else {
      const double k = static_cast<double>(records[i].k_total());
      denominator = 2.0 * (k * (k - 1.0) - 2.0 * static_cast<double>(records[i].k_mutual));
    }
    if (denominator <= 0.0) {
      ++result.undefined_count;
      continue;
    }
    const double c = numerator / denominator;
    result.per_node[i] = c;
    total += c;
    ++defined;
  }
  if (defined > 0) result.average = total / static_cast<double>(defined);
  return result;
}

std::uint64_t triangles(const Digraph& g) {
  auto s = symmetrize(g);
  std::uint64_t count = 0;
  for (NodeIndex u = 0; u < s.node_count(); ++u) {
    auto nu = s.neighbors(u);
    for (NodeIndex v : nu) {
      if (v <= u) continue;
      auto nv = s.neighbors(v);
      // common neighbors w > v
      auto a = std::upper_bound(nu.begin(), nu.end(), v);
      auto b = std::upper_bound(nv.begin(), nv.end(), v);
      while (a != nu.end() && b != nv.end()) {
        if (*a < *b) {
          ++a;
        } else if (*b < *a) {
          ++b;
        } else {
          ++count;
          ++a;
          ++b;
        }
      }
    }
  }
  return count;
}

double spearman_degree_strength(const Digraph& g, Direction direction) {
  auto records = degree_strength(g);
  auto active = active_nodes(g);
  std::vector<double> k, s;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!active[i]) continue;
    k.push_back(static_cast<double>(direction == Direction::in ? records[i].k_in : records[i].k_out));
    s.push_back(direction == Direction::in ? records[i].s_in : records[i].s_out);
  }
  if (k.size() < 3) throw precondition_error("spearman correlation needs at least three active nodes");
  return pearson(average_ranks(k), average_ranks(s));
}

}  // namespace mplex
