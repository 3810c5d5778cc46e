#include "mplex/switching.hpp"

#include <unordered_set>
#include <utility>
#include <vector>

#include "mplex/error.hpp"

namespace mplex {
namespace {

class ArcSet {
 public:
  explicit ArcSet(std::size_t n) : n_(n) {}
  bool contains(NodeIndex a, NodeIndex b) const { return set_.contains(key(a, b)); }
  bool linked(NodeIndex a, NodeIndex b) const { return contains(a, b) || contains(b, a); }
  void insert(NodeIndex a, NodeIndex b) { set_.insert(key(a, b)); }
  void erase(NodeIndex a, NodeIndex b) { set_.erase(key(a, b)); }
  void reserve(std::size_t m) { set_.reserve(m); }

 private:
  std::uint64_t key(NodeIndex a, NodeIndex b) const { return static_cast<std::uint64_t>(a) * n_ + b; }
  std::uint64_t n_;
  std::unordered_set<std::uint64_t> set_;
};

using Pair = std::pair<NodeIndex, NodeIndex>;

std::size_t pick(Rng& rng, std::size_t size) { return std::uniform_int_distribution<std::size_t>(0, size - 1)(rng); }

}  // namespace

SwitchResult switch_randomize(const Digraph& g, const SwitchOptions& options, Rng& rng) {
  if (g.self_loop_count() > 0) throw precondition_error("switch randomization needs a graph without self-loops");
  if (g.edge_count() < 2) throw precondition_error("switch randomization needs at least two edges");

  const std::size_t n = g.node_count();
  ArcSet arcs(n);
  arcs.reserve(g.edge_count() * 2);
  for (const auto& e : g.edges()) arcs.insert(e.source, e.target);

  // Degree mode swaps all arcs; reciprocal mode keeps mutual pairs (stored
  // once with first < second) and single arcs in separate pools.
  std::vector<Pair> singles, mutuals;
  for (const auto& e : g.edges()) {
    const bool mutual = options.mode == SwitchMode::reciprocal && arcs.contains(e.target, e.source);
    if (!mutual)
      singles.push_back({e.source, e.target});
    else if (e.source < e.target)
      mutuals.push_back({e.source, e.target});
  }

  SwitchResult result;
  result.requested = options.switches_per_edge * (singles.size() + mutuals.size());
  const std::size_t budget = options.attempts_per_switch * result.requested;
  const bool singles_ok = singles.size() >= 2, mutuals_ok = mutuals.size() >= 2;

  auto try_single = [&]() {
    std::size_t x = pick(rng, singles.size()), y = pick(rng, singles.size());
    if (x == y) return false;
    auto [a, b] = singles[x];
    auto [c, d] = singles[y];
    if (a == c || b == d || a == d || c == b) return false;
    if (options.mode == SwitchMode::degree) {
      if (arcs.contains(a, d) || arcs.contains(c, b)) return false;
    } else if (arcs.linked(a, d) || arcs.linked(c, b)) {
      return false;
    }
    arcs.erase(a, b);
    arcs.erase(c, d);
    arcs.insert(a, d);
    arcs.insert(c, b);
    singles[x] = {a, d};
    singles[y] = {c, b};
    return true;
  };
  auto try_mutual = [&]() {
    std::size_t x = pick(rng, mutuals.size()), y = pick(rng, mutuals.size());
    if (x == y) return false;
    auto [a, b] = mutuals[x];
    auto [c, d] = mutuals[y];
    if (rng() & 1u) std::swap(c, d);
    if (a == c || a == d || b == c || b == d) return false;
    if (arcs.linked(a, d) || arcs.linked(c, b)) return false;
    for (auto [u, v] : {Pair{a, b}, Pair{c, d}}) {
      arcs.erase(u, v);
      arcs.erase(v, u);
    }
    for (auto [u, v] : {Pair{a, d}, Pair{c, b}}) {
      arcs.insert(u, v);
      arcs.insert(v, u);
    }
    mutuals[x] = {std::min(a, d), std::max(a, d)};
    mutuals[y] = {std::min(c, b), std::max(c, b)};
    return true;
  };

  if (singles_ok || mutuals_ok) {
    const double single_share =
        static_cast<double>(singles_ok ? singles.size() : 0) /
        static_cast<double>((singles_ok ? singles.size() : 0) + (mutuals_ok ? mutuals.size() : 0));
    while (result.accepted < result.requested && result.attempted < budget) {
      ++result.attempted;
      const bool use_singles = mutuals_ok ? (singles_ok && uniform01(rng) < single_share) : true;
      if (use_singles ? try_single() : try_mutual()) ++result.accepted;
    }
  }

  if (result.accepted == 0) {
    result.stuck = true;
    result.graph = project_binary(g);
    return result;
  }
  result.incomplete = result.accepted < result.requested;

  std::vector<Edge> edges;
  edges.reserve(g.edge_count());
  for (auto [a, b] : singles) edges.push_back({a, b, 1.0});
  for (auto [a, b] : mutuals) {
    edges.push_back({a, b, 1.0});
    edges.push_back({b, a, 1.0});
  }
  result.graph = Digraph(g.universe(), std::move(edges));
  return result;
}

SwitchResult switch_randomize(const Digraph& g, const SwitchOptions& options, std::uint64_t seed) {
  Rng rng(seed);
  return switch_randomize(g, options, rng);
}

}  // namespace mplex
