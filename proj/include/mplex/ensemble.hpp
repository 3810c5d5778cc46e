#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mplex/graph.hpp"
#include "mplex/maxent.hpp"
#include "mplex/switching.hpp"
#include "mplex/triads.hpp"

namespace mplex {

enum class NullModel { dbcm, dwcm, degree_switching, reciprocal_switching };

const char* to_string(NullModel model);
NullModel null_model_from_string(const std::string& name);

// A null model fitted to (or seeded with) one observed graph. Canonical
// models draw independent Bernoulli (x Poisson) realizations; switching
// models randomize the observed graph afresh for every draw.
class NullGenerator {
 public:
  static NullGenerator fit(const Digraph& observed, NullModel model, const SolverOptions& solver = {},
                           const SwitchOptions& switching = {});

  NullModel model() const noexcept { return model_; }
  Digraph draw(Rng& rng) const;
  const std::optional<DbcmFit>& dbcm() const noexcept { return dbcm_; }
  const std::optional<DwcmFit>& dwcm() const noexcept { return dwcm_; }

 private:
  NullModel model_ = NullModel::dbcm;
  Digraph observed_;
  SwitchOptions switching_;
  std::optional<DbcmFit> dbcm_;
  std::optional<DwcmFit> dwcm_;
};

// One or more scalar graph statistics computed together (the triad census
// yields 13); nullopt where a value is undefined on a graph.
struct EnsembleMetric {
  std::vector<std::string> names;
  std::function<std::vector<std::optional<double>>(const Digraph&)> evaluate;
};

// Known names: edges, largest_weak, largest_strong, reciprocated_links,
// triangles, reciprocity, strength_reciprocity, assortativity_in,
// assortativity_out, assortativity_in_strength, assortativity_out_strength,
// ucc, dcc, and triad_<class name> (e.g. triad_030T). "triads" expands to all
// 13 triad counts in one pass.
std::vector<EnsembleMetric> ensemble_metrics(const std::vector<std::string>& names);
std::vector<std::string> ensemble_metric_names();

struct EnsembleReport {
  std::string metric;
  std::optional<double> observed;
  double mean = 0.0;
  double sd = 0.0;
  std::optional<double> p_lower;  // (1 + #{x <= observed}) / (S + 1)
  std::optional<double> p_upper;  // (1 + #{x >= observed}) / (S + 1)
  std::optional<double> z;
  std::size_t samples = 0;        // draws on which the metric was defined
  bool degenerate = false;        // undefined on > 50% of draws or on the observation

  std::optional<double> p_two_sided() const;
};

// Draws S realizations (sample k uses derive_seed(seed, k)) and summarizes
// every metric against its observed value.
std::vector<EnsembleReport> ensemble_stats(const Digraph& observed, const NullGenerator& generator,
                                           const std::vector<EnsembleMetric>& metrics, std::size_t samples,
                                           std::uint64_t seed);

struct MotifReport {
  TriadCensus observed;
  std::array<double, triad_class_count> mean{};
  std::array<double, triad_class_count> sd{};
  std::array<std::optional<double>, triad_class_count> z{};  // nullopt where sd = 0
  std::size_t samples = 0;
  // Randomizations that could not accept a single switch.
  std::size_t stuck = 0;
};

// Triad z-scores against a switching null (degree or reciprocal).
MotifReport motif_zscores(const Digraph& g, SwitchMode null, std::size_t samples, std::uint64_t seed,
                          const SwitchOptions& base = {});

// Weighted reciprocity; the DWCM is the null this statistic is usually
// assessed against.
double strength_reciprocity(const Digraph& g);

}  // namespace mplex
