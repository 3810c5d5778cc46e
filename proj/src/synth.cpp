#include "mplex/synth.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "mplex/error.hpp"
#include "mplex/io.hpp"
#include "mplex/rng.hpp"

namespace mplex {
namespace {

// Purposes of the counter-based random streams.
enum Purpose : std::uint64_t {
  fitness_u1 = 1,
  fitness_u2,
  participation_u,
  link_u,
  answer_u,
  noise_u1,
  noise_u2,
  share_u,
};

// Counter-based uniforms: every draw is addressed by (stream, key), so the
// value never depends on evaluation order.
class Streams {
 public:
  Streams(const SynthConfig& config, std::size_t layer)
      : seed_(config.seed), layer_(layer), overlap_(config.overlap) {}

  double raw(std::uint64_t stream, std::uint64_t key) const {
    return static_cast<double>(mix64(derive_seed(seed_, stream) ^ mix64(key)) >> 11) * 0x1.0p-53;
  }
  double common(Purpose p, std::uint64_t key) const { return raw(p, key); }
  double own(Purpose p, std::uint64_t key) const { return raw(1000 * (layer_ + 1) + p, key); }
  // Shared draw with probability `overlap`, layer-specific otherwise.
  double mixed(Purpose p, std::uint64_t key) const {
    return own(share_u, key * 16 + p) < overlap_ ? common(p, key) : own(p, key);
  }

 private:
  std::uint64_t seed_;
  std::size_t layer_;
  double overlap_;
};

constexpr double two_pi = 6.283185307179586;

double gaussian(double u1, double u2) { return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(two_pi * u2); }

struct Plan {
  std::vector<NodeIndex> members;  // participating nodes
  std::vector<double> fitness;     // parallel to members
};

Plan plan_layer(const SynthConfig& config, std::size_t layer, const Streams& streams) {
  const auto& lc = config.layers[layer];
  Plan plan;
  const double a = std::sqrt(config.overlap), b = std::sqrt(1.0 - config.overlap);
  for (NodeIndex i = 0; i < config.n_nodes; ++i) {
    if (streams.mixed(participation_u, i) >= lc.participation) continue;
    // Gaussian copula keeps the fitness ranks correlated across layers.
    const double zc = gaussian(streams.common(fitness_u1, i), streams.common(fitness_u2, i));
    const double zl = gaussian(streams.own(fitness_u1, i), streams.own(fitness_u2, i));
    const double upper = 0.5 * std::erfc((a * zc + b * zl) / std::sqrt(2.0));  // 1 - Phi(z)
    const double u = std::clamp(upper, 1e-300, 1.0);
    plan.members.push_back(i);
    plan.fitness.push_back(std::pow(u, -1.0 / (lc.exponent - 1.0)));
  }
  return plan;
}

// Expected active-node density of a layer at scale c. A pair's link
// probabilities after answering are p_ij + (1 - p_ij) p_ji r, and a node is
// inactive iff no pair touching it drew a base link.
double expected_density(const Plan& plan, double reciprocity, double c) {
  const std::size_t m = plan.members.size();
  std::vector<double> log_idle(m, 0.0);
  double links = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double p = std::min(1.0, c * plan.fitness[i] * plan.fitness[j]);
      links += 2.0 * (p + (1.0 - p) * p * reciprocity);
      const double idle = p >= 1.0 ? -1e300 : 2.0 * std::log1p(-p);
      log_idle[i] += idle;
      log_idle[j] += idle;
    }
  }
  double active = 0.0;
  for (double l : log_idle) active -= std::expm1(l);
  if (active <= 1.0) return std::numeric_limits<double>::infinity();
  return links / (active * (active - 1.0));
}

double solve_scale(const Plan& plan, const SynthLayerConfig& lc) {
  // The active density is U-shaped in c: a handful of links between a handful
  // of active nodes is dense. Take the branch where c grows towards full
  // participation.
  constexpr int grid = 30;
  double best_c = 1.0, best = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= grid; ++k) {
    const double c = std::pow(10.0, -15.0 + 15.0 * k / grid);
    const double d = expected_density(plan, lc.reciprocity, c);
    if (d < best) best = d, best_c = c;
  }
  if (lc.density < best)
    throw precondition_error("infeasible density " + format_number(lc.density) + " for layer '" + lc.name + "' with " +
                             std::to_string(plan.members.size()) + " participating nodes");
  double lo = std::log(best_c), hi = 0.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (expected_density(plan, lc.reciprocity, std::exp(mid)) < lc.density)
      lo = mid;
    else
      hi = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

Digraph generate_layer(const SynthConfig& config, std::size_t layer, const UniversePtr& universe) {
  const auto& lc = config.layers[layer];
  Streams streams(config, layer);
  const Plan plan = plan_layer(config, layer, streams);
  if (plan.members.size() < 2)
    throw precondition_error("infeasible density for participation fraction " + format_number(lc.participation) +
                             " in layer '" + lc.name + "': fewer than two participating nodes");
  const double c = solve_scale(plan, lc);
  const std::size_t m = plan.members.size();
  const std::uint64_t n = config.n_nodes;
  const double sigma = config.weight_noise;

  auto key = [n](NodeIndex i, NodeIndex j) { return static_cast<std::uint64_t>(i) * n + j; };
  std::vector<char> base(m * m, 0);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      if (a == b) continue;
      const double p = std::min(1.0, c * plan.fitness[a] * plan.fitness[b]);
      base[a * m + b] = streams.mixed(link_u, key(plan.members[a], plan.members[b])) < p;
    }

  std::vector<Edge> edges;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      if (a == b) continue;
      const NodeIndex i = plan.members[a], j = plan.members[b];
      const bool linked =
          base[a * m + b] || (base[b * m + a] && streams.mixed(answer_u, key(i, j)) < lc.reciprocity);
      if (!linked) continue;
      const double z = gaussian(streams.mixed(noise_u1, key(i, j)), streams.mixed(noise_u2, key(i, j)));
      const double w = config.weight_scale * plan.fitness[a] * plan.fitness[b] * std::exp(sigma * z - 0.5 * sigma * sigma);
      edges.push_back({i, j, w});
    }
  return Digraph(universe, std::move(edges));
}

}  // namespace

SynthConfig default_synth_config(std::size_t n_nodes, std::uint64_t seed) {
  SynthConfig config;
  config.n_nodes = n_nodes;
  config.seed = seed;
  // name, mean out-degree among participants, exponent, reciprocity, participation
  const std::tuple<const char*, double, double, double, double> shape[] = {
      {"U_OVN", 8.0, 2.3, 0.35, 1.0}, {"U_ST", 5.0, 2.3, 0.25, 0.95}, {"U_LT", 4.0, 2.4, 0.15, 0.7},
      {"S_ST", 4.0, 2.2, 0.10, 0.2},  {"S_LT", 4.0, 2.2, 0.05, 0.1},
  };
  for (const auto& [name, degree, exponent, reciprocity, participation] : shape) {
    const double members = participation * static_cast<double>(n_nodes);
    const double d = members > 2.0 ? std::min(0.5, degree / (members - 1.0)) : 0.5;
    config.layers.push_back({name, d, exponent, reciprocity, participation});
  }
  return config;
}

void validate(const SynthConfig& config) {
  auto fraction = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (config.n_nodes < 2) throw precondition_error("synthetic multiplex needs at least two nodes");
  if (!fraction(config.overlap)) throw precondition_error("overlap must lie in [0, 1]");
  if (!(config.weight_scale > 0.0) || !std::isfinite(config.weight_scale))
    throw precondition_error("weight scale must be positive");
  if (!(config.weight_noise >= 0.0) || !std::isfinite(config.weight_noise))
    throw precondition_error("weight noise must be non-negative");
  if (config.layers.empty()) throw precondition_error("synthetic multiplex needs at least one layer");
  std::set<std::string> seen;
  for (const auto& lc : config.layers) {
    if (lc.name.empty()) throw precondition_error("layer names must be non-empty");
    if (!seen.insert(lc.name).second) throw precondition_error("duplicate layer '" + lc.name + "'");
    if (!(lc.density > 0.0 && lc.density < 1.0))
      throw precondition_error("density of layer '" + lc.name + "' must lie in (0, 1)");
    if (!(lc.exponent > 1.0) || !std::isfinite(lc.exponent))
      throw precondition_error("fitness exponent of layer '" + lc.name + "' must exceed 1");
    if (!fraction(lc.reciprocity)) throw precondition_error("reciprocity boost must lie in [0, 1]");
    if (!fraction(lc.participation)) throw precondition_error("participation must lie in [0, 1]");
  }
}

Multiplex generate(const SynthConfig& config) {
  validate(config);
  const std::size_t width = std::to_string(config.n_nodes - 1).size();
  std::vector<std::string> names;
  for (std::size_t i = 0; i < config.n_nodes; ++i) {
    auto digits = std::to_string(i);
    names.push_back("B" + std::string(width - digits.size(), '0') + digits);
  }
  auto universe = std::make_shared<const NodeUniverse>(std::move(names));
  std::vector<Layer> layers;
  for (std::size_t l = 0; l < config.layers.size(); ++l)
    layers.push_back({config.layers[l].name, generate_layer(config, l, universe)});
  return Multiplex(config.period, universe, std::move(layers));
}

}  // namespace mplex
