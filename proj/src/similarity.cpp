#include "mplex/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

#include "mplex/error.hpp"
#include "mplex/metrics.hpp"
#include "mplex/parallel.hpp"
#include "mplex/rng.hpp"

namespace mplex {
namespace {

std::vector<std::string> active_names(const Digraph& g) {
  auto active = active_nodes(g);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < active.size(); ++i)
    if (active[i]) names.push_back(g.universe()->name(static_cast<NodeIndex>(i)));
  std::sort(names.begin(), names.end());
  return names;
}

std::vector<std::string> basis_of(const Digraph& ga, const Digraph& gb, AlignMode mode) {
  auto na = active_names(ga), nb = active_names(gb);
  std::vector<std::string> basis;
  if (mode == AlignMode::node_union)
    std::set_union(na.begin(), na.end(), nb.begin(), nb.end(), std::back_inserter(basis));
  else
    std::set_intersection(na.begin(), na.end(), nb.begin(), nb.end(), std::back_inserter(basis));
  if (basis.empty()) throw alignment_error("graphs share no active nodes on the requested basis");
  return basis;
}

// Off-diagonal edges of g restricted to the basis, keyed by basis coordinates.
std::map<std::pair<std::size_t, std::size_t>, double> restricted_edges(
    const Digraph& g, const std::unordered_map<std::string, std::size_t>& position) {
  std::vector<std::optional<std::size_t>> where(g.node_count());
  for (NodeIndex i = 0; i < g.node_count(); ++i)
    if (auto it = position.find(g.universe()->name(i)); it != position.end()) where[i] = it->second;
  std::map<std::pair<std::size_t, std::size_t>, double> edges;
  for (const auto& e : g.edges()) {
    if (e.source == e.target || !where[e.source] || !where[e.target]) continue;
    edges[{*where[e.source], *where[e.target]}] = e.weight;
  }
  return edges;
}

double jaccard_sparse(const std::map<std::pair<std::size_t, std::size_t>, double>& a,
                      const std::map<std::pair<std::size_t, std::size_t>, double>& b) {
  std::size_t shared = 0;
  for (const auto& [key, w] : a)
    if (b.contains(key)) ++shared;
  const std::size_t either = a.size() + b.size() - shared;
  if (either == 0) throw degenerate_error("jaccard similarity undefined: both graphs are empty on the basis");
  return static_cast<double>(shared) / static_cast<double>(either);
}

double cosine_sparse(const std::map<std::pair<std::size_t, std::size_t>, double>& a,
                     const std::map<std::pair<std::size_t, std::size_t>, double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (const auto& [key, w] : a) {
    na += w * w;
    if (auto it = b.find(key); it != b.end()) dot += w * it->second;
  }
  for (const auto& [key, w] : b) nb += w * w;
  if (na == 0.0 || nb == 0.0) throw degenerate_error("cosine similarity undefined: zero vector");
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0);
}

// Erdos-Renyi digraph on g's active nodes with g's density. For weighted use
// the observed weights are reassigned to the drawn links in random order.
Digraph sample_density_null(const Digraph& g, bool weighted, Rng& rng) {
  auto active = active_nodes(g);
  std::vector<NodeIndex> nodes;
  for (std::size_t i = 0; i < active.size(); ++i)
    if (active[i]) nodes.push_back(static_cast<NodeIndex>(i));
  const double p = density(g);
  const std::size_t m = nodes.size();
  const std::size_t slots = m * (m - 1);
  std::vector<Edge> edges;
  // Geometric skipping over the m(m-1) ordered pairs.
  const double log_q = std::log1p(-std::min(p, 1.0 - 1e-16));
  std::size_t slot = 0;
  while (true) {
    if (p < 1.0) {
      const double skip = std::floor(std::log1p(-uniform01(rng)) / log_q);
      if (skip >= static_cast<double>(slots - slot)) break;
      slot += static_cast<std::size_t>(skip);
    }
    if (slot >= slots) break;
    const std::size_t i = slot / (m - 1), r = slot % (m - 1);
    const std::size_t j = r < i ? r : r + 1;
    edges.push_back({nodes[i], nodes[j], 1.0});
    ++slot;
  }
  if (weighted && !edges.empty()) {
    std::vector<double> weights;
    for (const auto& e : g.edges())
      if (e.source != e.target) weights.push_back(e.weight);
    std::shuffle(weights.begin(), weights.end(), rng);
    for (std::size_t k = 0; k < edges.size(); ++k) edges[k].weight = weights[k % weights.size()];
  }
  return Digraph(g.universe(), std::move(edges));
}

struct NullSampler {
  const Digraph& observed;
  SimilarityMeasure measure;
  SimilarityNull null;
  std::optional<DbcmFit> dbcm;
  std::optional<DwcmFit> dwcm;

  NullSampler(const Digraph& g, SimilarityMeasure m, const SignificanceOptions& options)
      : observed(g), measure(m), null(options.null) {
    if (null != SimilarityNull::dbcm) return;
    auto stripped = strip_self_loops(g).graph;
    if (measure == SimilarityMeasure::jaccard)
      dbcm = fit_dbcm(stripped, options.solver);
    else
      dwcm = fit_dwcm(stripped, options.solver);
  }

  Digraph draw(Rng& rng) const {
    if (null == SimilarityNull::density) return sample_density_null(observed, measure == SimilarityMeasure::cosine, rng);
    return dbcm ? sample_dbcm(*dbcm, rng) : sample_dwcm(*dwcm, rng);
  }
};

}  // namespace

AlignedPair align(const Digraph& ga, const Digraph& gb, AlignMode mode, bool weighted) {
  AlignedPair pair;
  pair.basis = basis_of(ga, gb, mode);
  pair.mode = mode;
  pair.weighted = weighted;
  const std::size_t m = pair.basis.size();
  std::unordered_map<std::string, std::size_t> position;
  for (std::size_t k = 0; k < m; ++k) position[pair.basis[k]] = k;
  const std::size_t length = m * (m - 1);
  pair.a.assign(length, 0.0);
  pair.b.assign(length, 0.0);
  auto fill = [&](const Digraph& g, std::vector<double>& vec) {
    for (const auto& [key, w] : restricted_edges(g, position)) {
      auto [i, j] = key;
      vec[i * (m - 1) + (j < i ? j : j - 1)] = weighted ? w : 1.0;
    }
  };
  fill(ga, pair.a);
  fill(gb, pair.b);
  return pair;
}

double jaccard(const AlignedPair& pair) {
  std::size_t both = 0, either = 0;
  for (std::size_t k = 0; k < pair.a.size(); ++k) {
    const bool p = pair.a[k] > 0.0, q = pair.b[k] > 0.0;
    both += p && q;
    either += p || q;
  }
  if (either == 0) throw degenerate_error("jaccard similarity undefined: both vectors are zero");
  return static_cast<double>(both) / static_cast<double>(either);
}

double cosine(const AlignedPair& pair) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t k = 0; k < pair.a.size(); ++k) {
    dot += pair.a[k] * pair.b[k];
    na += pair.a[k] * pair.a[k];
    nb += pair.b[k] * pair.b[k];
  }
  if (na == 0.0 || nb == 0.0) throw degenerate_error("cosine similarity undefined: zero vector");
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0);
}

double similarity(const Digraph& ga, const Digraph& gb, SimilarityMeasure measure, AlignMode mode) {
  auto basis = basis_of(ga, gb, mode);
  std::unordered_map<std::string, std::size_t> position;
  for (std::size_t k = 0; k < basis.size(); ++k) position[basis[k]] = k;
  auto a = restricted_edges(ga, position);
  auto b = restricted_edges(gb, position);
  return measure == SimilarityMeasure::jaccard ? jaccard_sparse(a, b) : cosine_sparse(a, b);
}

double significance(const Digraph& ga, const Digraph& gb, SimilarityMeasure measure, AlignMode mode,
                    const SignificanceOptions& options) {
  if (options.samples < 100) throw precondition_error("significance needs at least 100 null samples");
  const double observed = similarity(ga, gb, measure, mode);
  NullSampler null_a(ga, measure, options), null_b(gb, measure, options);

  std::vector<double> draws(options.samples, 0.0);
  parallel_for(options.samples, [&](std::size_t s) {
    Rng rng_a = make_rng(options.seed, 2 * s);
    Rng rng_b = make_rng(options.seed, 2 * s + 1);
    auto sa = null_a.draw(rng_a);
    auto sb = null_b.draw(rng_b);
    try {
      draws[s] = similarity(sa, sb, measure, mode);
    } catch (const precondition_error&) {
      draws[s] = 0.0;
    } catch (const degenerate_error&) {
      draws[s] = 0.0;
    }
  });
  std::size_t extreme = 0;
  for (double d : draws)
    if (d >= observed - 1e-12) ++extreme;
  return static_cast<double>(extreme + 1) / static_cast<double>(options.samples + 1);
}

SimilarityMatrix similarity_matrix(const std::vector<LabelledGraph>& items, SimilarityMeasure measure, AlignMode mode,
                                   const std::optional<SignificanceOptions>& significance_options) {
  if (items.size() < 2) throw precondition_error("similarity matrix needs at least two graphs");
  SimilarityMatrix matrix;
  for (const auto& item : items) matrix.labels.push_back(item.label);
  for (std::size_t r = 1; r < items.size(); ++r) {
    for (std::size_t c = 0; c < r; ++c) {
      SimilarityReport report;
      report.measure = measure;
      report.mode = mode;
      try {
        report.value = similarity(items[r].graph, items[c].graph, measure, mode);
      } catch (const alignment_error&) {
        report.value = 0.0;
      }
      if (significance_options) {
        auto opts = *significance_options;
        opts.seed = derive_seed(significance_options->seed, r * items.size() + c);
        report.p_value = significance(items[r].graph, items[c].graph, measure, mode, opts);
        report.null = opts.null;
        report.samples = opts.samples;
      }
      matrix.entries.push_back({r, c, report});
    }
  }
  return matrix;
}

const char* to_string(AlignMode mode) { return mode == AlignMode::node_union ? "union" : "intersection"; }
const char* to_string(SimilarityMeasure measure) { return measure == SimilarityMeasure::jaccard ? "jaccard" : "cosine"; }
const char* to_string(SimilarityNull null) { return null == SimilarityNull::dbcm ? "dbcm" : "density"; }

}  // namespace mplex
