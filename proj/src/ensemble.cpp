#include "mplex/ensemble.hpp"

#include <algorithm>
#include <cmath>

#include "mplex/error.hpp"
#include "mplex/metrics.hpp"
#include "mplex/parallel.hpp"

namespace mplex {
namespace {

template <class F>
EnsembleMetric guarded(std::string name, F f) {
  return {{std::move(name)}, [f](const Digraph& g) -> std::vector<std::optional<double>> {
            try {
              return {f(g)};
            } catch (const degenerate_error&) {
              return {std::nullopt};
            }
          }};
}

EnsembleMetric all_triads() {
  EnsembleMetric metric;
  for (std::size_t k = 0; k < triad_class_count; ++k) metric.names.push_back("triad_" + std::string(triad_name(k)));
  metric.evaluate = [](const Digraph& g) {
    auto census = triad_census(g);
    std::vector<std::optional<double>> values;
    for (auto c : census.counts) values.push_back(static_cast<double>(c));
    return values;
  };
  return metric;
}

std::optional<EnsembleMetric> named_metric(const std::string& name) {
  auto largest = [](ComponentMode mode) {
    return [mode](const Digraph& g) {
      auto sizes = components(g, mode);
      return sizes.empty() ? 0.0 : static_cast<double>(sizes.front());
    };
  };
  auto assort = [](NodeAttribute a) { return [a](const Digraph& g) { return assortativity_coefficient(g, a); }; };
  auto average_clustering = [](ClusteringMode mode) {
    return [mode](const Digraph& g) {
      auto c = clustering(g, mode);
      if (!c.average) throw degenerate_error("no node with defined clustering");
      return *c.average;
    };
  };

  if (name == "edges")
    return guarded(name, [](const Digraph& g) { return static_cast<double>(g.edge_count() - g.self_loop_count()); });
  if (name == "largest_weak") return guarded(name, largest(ComponentMode::weak));
  if (name == "largest_strong") return guarded(name, largest(ComponentMode::strong));
  if (name == "reciprocated_links")
    return guarded(name, [](const Digraph& g) { return static_cast<double>(reciprocated_links(g)); });
  if (name == "triangles") return guarded(name, [](const Digraph& g) { return static_cast<double>(triangles(g)); });
  if (name == "reciprocity")
    return guarded(name, [](const Digraph& g) { return reciprocity(g, ReciprocityMode::binary); });
  if (name == "strength_reciprocity") return guarded(name, [](const Digraph& g) { return strength_reciprocity(g); });
  if (name == "assortativity_in") return guarded(name, assort(NodeAttribute::in_degree));
  if (name == "assortativity_out") return guarded(name, assort(NodeAttribute::out_degree));
  if (name == "assortativity_in_strength") return guarded(name, assort(NodeAttribute::in_strength));
  if (name == "assortativity_out_strength") return guarded(name, assort(NodeAttribute::out_strength));
  if (name == "ucc") return guarded(name, average_clustering(ClusteringMode::undirected));
  if (name == "dcc") return guarded(name, average_clustering(ClusteringMode::directed));
  for (std::size_t k = 0; k < triad_class_count; ++k) {
    if (name == "triad_" + std::string(triad_name(k)))
      return guarded(name, [k](const Digraph& g) { return static_cast<double>(triad_census(g).counts[k]); });
  }
  return std::nullopt;
}

double sample_sd(const std::vector<double>& values, double mean) {
  if (values.size() < 2) return 0.0;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

}  // namespace

const char* to_string(NullModel model) {
  switch (model) {
    case NullModel::dbcm: return "dbcm";
    case NullModel::dwcm: return "dwcm";
    case NullModel::degree_switching: return "degree-switching";
    case NullModel::reciprocal_switching: return "reciprocal-switching";
  }
  return "?";
}

NullModel null_model_from_string(const std::string& name) {
  if (name == "dbcm") return NullModel::dbcm;
  if (name == "dwcm") return NullModel::dwcm;
  if (name == "degree-switching" || name == "degree") return NullModel::degree_switching;
  if (name == "reciprocal-switching" || name == "reciprocal" || name == "rcm") return NullModel::reciprocal_switching;
  throw precondition_error("unknown null model '" + name + "'");
}

NullGenerator NullGenerator::fit(const Digraph& observed, NullModel model, const SolverOptions& solver,
                                 const SwitchOptions& switching) {
  NullGenerator gen;
  gen.model_ = model;
  gen.switching_ = switching;
  auto stripped = strip_self_loops(observed).graph;
  switch (model) {
    case NullModel::dbcm: gen.dbcm_ = fit_dbcm(stripped, solver); break;
    case NullModel::dwcm: gen.dwcm_ = fit_dwcm(stripped, solver); break;
    case NullModel::degree_switching:
    case NullModel::reciprocal_switching:
      gen.switching_.mode = model == NullModel::degree_switching ? SwitchMode::degree : SwitchMode::reciprocal;
      gen.observed_ = project_binary(stripped);
      if (gen.observed_.edge_count() < 2) throw precondition_error("switching null needs at least two edges");
      break;
  }
  return gen;
}

Digraph NullGenerator::draw(Rng& rng) const {
  switch (model_) {
    case NullModel::dbcm: return sample_dbcm(*dbcm_, rng);
    case NullModel::dwcm: return sample_dwcm(*dwcm_, rng);
    default: return switch_randomize(observed_, switching_, rng).graph;
  }
}

std::vector<std::string> ensemble_metric_names() {
  std::vector<std::string> names = {"edges",
                                    "largest_weak",
                                    "largest_strong",
                                    "reciprocated_links",
                                    "triangles",
                                    "reciprocity",
                                    "strength_reciprocity",
                                    "assortativity_in",
                                    "assortativity_out",
                                    "assortativity_in_strength",
                                    "assortativity_out_strength",
                                    "ucc",
                                    "dcc"};
  for (std::size_t k = 0; k < triad_class_count; ++k) names.push_back("triad_" + std::string(triad_name(k)));
  return names;
}

std::vector<EnsembleMetric> ensemble_metrics(const std::vector<std::string>& names) {
  std::vector<EnsembleMetric> metrics;
  for (const auto& name : names) {
    if (name == "triads") {
      metrics.push_back(all_triads());
      continue;
    }
    auto m = named_metric(name);
    if (!m) throw precondition_error("unknown ensemble metric '" + name + "'");
    metrics.push_back(std::move(*m));
  }
  return metrics;
}

std::optional<double> EnsembleReport::p_two_sided() const {
  if (!p_lower || !p_upper) return std::nullopt;
  return std::min(1.0, 2.0 * std::min(*p_lower, *p_upper));
}

std::vector<EnsembleReport> ensemble_stats(const Digraph& observed, const NullGenerator& generator,
                                           const std::vector<EnsembleMetric>& metrics, std::size_t samples,
                                           std::uint64_t seed) {
  if (samples < 100) throw precondition_error("ensemble statistics need at least 100 samples");
  std::vector<std::string> names;
  for (const auto& metric : metrics) names.insert(names.end(), metric.names.begin(), metric.names.end());
  const std::size_t m = names.size();
  auto evaluate_all = [&](const Digraph& g) {
    std::vector<std::optional<double>> row;
    row.reserve(m);
    for (const auto& metric : metrics) {
      auto v = metric.evaluate(g);
      if (v.size() != metric.names.size()) throw error("metric returned the wrong number of values");
      row.insert(row.end(), v.begin(), v.end());
    }
    return row;
  };

  std::vector<std::optional<double>> values(samples * m);
  parallel_for(samples, [&](std::size_t s) {
    Rng rng = make_rng(seed, s);
    auto row = evaluate_all(generator.draw(rng));
    std::copy(row.begin(), row.end(), values.begin() + static_cast<std::ptrdiff_t>(s * m));
  });
  const auto observed_row = evaluate_all(observed);

  std::vector<EnsembleReport> reports;
  for (std::size_t k = 0; k < m; ++k) {
    EnsembleReport r;
    r.metric = names[k];
    r.observed = observed_row[k];
    std::vector<double> defined;
    for (std::size_t s = 0; s < samples; ++s)
      if (auto v = values[s * m + k]) defined.push_back(*v);
    r.samples = defined.size();
    if (!defined.empty()) {
      double sum = 0.0;
      for (double v : defined) sum += v;
      r.mean = sum / static_cast<double>(defined.size());
      r.sd = sample_sd(defined, r.mean);
    }
    r.degenerate = !r.observed || 2 * defined.size() < samples;
    if (!r.degenerate) {
      const double obs = *r.observed;
      std::size_t le = 0, ge = 0;
      for (double v : defined) {
        if (v <= obs) ++le;
        if (v >= obs) ++ge;
      }
      const double denom = static_cast<double>(defined.size() + 1);
      r.p_lower = static_cast<double>(le + 1) / denom;
      r.p_upper = static_cast<double>(ge + 1) / denom;
      if (r.sd > 0.0) r.z = (obs - r.mean) / r.sd;
    }
    reports.push_back(std::move(r));
  }
  return reports;
}

MotifReport motif_zscores(const Digraph& g, SwitchMode null, std::size_t samples, std::uint64_t seed,
                          const SwitchOptions& base) {
  if (samples < 100) throw precondition_error("motif z-scores need at least 100 samples");
  SwitchOptions options = base;
  options.mode = null;
  auto binary = project_binary(strip_self_loops(g).graph);

  MotifReport report;
  report.observed = triad_census(binary);
  report.samples = samples;
  std::vector<TriadCensus> censuses(samples);
  std::vector<char> stuck(samples, 0);
  parallel_for(samples, [&](std::size_t s) {
    Rng rng = make_rng(seed, s);
    auto result = switch_randomize(binary, options, rng);
    stuck[s] = result.stuck;
    censuses[s] = triad_census(result.graph);
  });
  for (char s : stuck) report.stuck += static_cast<std::size_t>(s);

  for (std::size_t k = 0; k < triad_class_count; ++k) {
    std::vector<double> v(samples);
    double sum = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
      v[s] = static_cast<double>(censuses[s].counts[k]);
      sum += v[s];
    }
    report.mean[k] = sum / static_cast<double>(samples);
    report.sd[k] = sample_sd(v, report.mean[k]);
    if (report.sd[k] > 0.0)
      report.z[k] = (static_cast<double>(report.observed.counts[k]) - report.mean[k]) / report.sd[k];
  }
  return report;
}

double strength_reciprocity(const Digraph& g) { return reciprocity(g, ReciprocityMode::weighted); }

}  // namespace mplex
