#include "mplex/maxent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "mplex/error.hpp"
#include "mplex/metrics.hpp"

namespace mplex {
namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double polish_target = 0.01;

// Zero fitness wins over infinite fitness: a saturated node links to every
// node that can receive (or send) links at all.
double link_probability(double x, double y) {
  if (x == 0.0 || y == 0.0) return 0.0;
  if (std::isinf(x) || std::isinf(y)) return 1.0;
  const double xy = x * y;
  return xy / (1.0 + xy);
}

void check_degree_sequence(std::span<const double> k_in, std::span<const double> k_out) {
  if (k_in.size() != k_out.size()) throw precondition_error("in- and out-degree sequences differ in length");
  const double n = static_cast<double>(k_in.size());
  double sum_in = 0.0, sum_out = 0.0;
  for (std::size_t i = 0; i < k_in.size(); ++i) {
    for (double k : {k_in[i], k_out[i]}) {
      if (!(k >= 0.0) || !std::isfinite(k)) throw precondition_error("degrees must be finite and nonnegative");
      if (k > n - 1.0 + 1e-12) throw precondition_error("degree exceeds n - 1: infeasible sequence");
    }
    sum_in += k_in[i];
    sum_out += k_out[i];
  }
  if (std::abs(sum_in - sum_out) > 1e-9 * std::max(1.0, sum_out))
    throw precondition_error("sum of in-degrees differs from sum of out-degrees");
}

// Nodes sharing (k_out, k_in) share their fitness pair, so the solver works
// on classes.
struct DegreeClass {
  double k_out, k_in;
  double count;
  double x = 0.0, y = 0.0;
  bool x_free = false, y_free = false;
  double k_out_eff = 0.0, k_in_eff = 0.0;
};

}  // namespace

DbcmFit::DbcmFit(UniversePtr universe, std::vector<double> x_out, std::vector<double> y_in)
    : universe_(std::move(universe)), x_out_(std::move(x_out)), y_in_(std::move(y_in)) {
  if (!universe_) universe_ = NodeUniverse::anonymous(x_out_.size());
  if (x_out_.size() != y_in_.size() || x_out_.size() != universe_->size())
    throw precondition_error("fitness vectors do not match the node universe");
  column_order_.resize(y_in_.size());
  std::iota(column_order_.begin(), column_order_.end(), 0);
  std::stable_sort(column_order_.begin(), column_order_.end(),
                   [&](NodeIndex a, NodeIndex b) { return y_in_[a] > y_in_[b]; });
}

std::vector<double> DbcmFit::theta_out() const {
  std::vector<double> t(x_out_.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = -std::log(x_out_[i]);
  return t;
}

std::vector<double> DbcmFit::theta_in() const {
  std::vector<double> t(y_in_.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = -std::log(y_in_[i]);
  return t;
}

double DbcmFit::probability(NodeIndex i, NodeIndex j) const {
  if (i == j) return 0.0;
  return link_probability(x_out_.at(i), y_in_.at(j));
}

std::vector<double> DbcmFit::expected_out_degree() const {
  std::vector<double> k(node_count(), 0.0);
  for (NodeIndex i = 0; i < node_count(); ++i)
    for (NodeIndex j = 0; j < node_count(); ++j) k[i] += probability(i, j);
  return k;
}

std::vector<double> DbcmFit::expected_in_degree() const {
  std::vector<double> k(node_count(), 0.0);
  for (NodeIndex i = 0; i < node_count(); ++i)
    for (NodeIndex j = 0; j < node_count(); ++j) k[j] += probability(i, j);
  return k;
}

DbcmFit fit_dbcm(std::span<const double> k_in, std::span<const double> k_out, const SolverOptions& options) {
  check_degree_sequence(k_in, k_out);
  const std::size_t n = k_in.size();

  std::map<std::pair<double, double>, std::size_t> class_index;
  std::vector<DegreeClass> classes;
  std::vector<std::size_t> class_of(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto [it, inserted] = class_index.try_emplace({k_out[i], k_in[i]}, classes.size());
    if (inserted) classes.push_back({k_out[i], k_in[i], 0.0});
    classes[it->second].count += 1.0;
    class_of[i] = it->second;
  }

  // Boundary statuses: zero degree -> zero fitness; degree equal to the
  // number of nodes able to reciprocate the side -> saturated.
  double receivers = 0.0, senders = 0.0;
  for (const auto& c : classes) {
    if (c.k_in > 0.0) receivers += c.count;
    if (c.k_out > 0.0) senders += c.count;
  }
  for (auto& c : classes) {
    const double avail_out = receivers - (c.k_in > 0.0 ? 1.0 : 0.0);
    const double avail_in = senders - (c.k_out > 0.0 ? 1.0 : 0.0);
    if (c.k_out > avail_out + 1e-12 || c.k_in > avail_in + 1e-12)
      throw precondition_error("degree exceeds the number of possible partners: infeasible sequence");
    if (c.k_out == 0.0)
      c.x = 0.0;
    else if (c.k_out >= avail_out - 1e-12)
      c.x = inf;
    else
      c.x_free = true;
    if (c.k_in == 0.0)
      c.y = 0.0;
    else if (c.k_in >= avail_in - 1e-12)
      c.y = inf;
    else
      c.y_free = true;
  }
  double saturated_cols = 0.0, saturated_rows = 0.0;
  for (const auto& c : classes) {
    if (std::isinf(c.y)) saturated_cols += c.count;
    if (std::isinf(c.x)) saturated_rows += c.count;
  }
  double total = 0.0;
  for (const auto& c : classes) total += c.count * c.k_out;
  const double scale = std::sqrt(std::max(total, 1.0));
  for (auto& c : classes) {
    if (c.x_free) {
      c.k_out_eff = c.k_out - (saturated_cols - (std::isinf(c.y) ? 1.0 : 0.0));
      if (c.k_out_eff < -1e-12)
        throw precondition_error("degree sequence forces boundary probabilities the model cannot represent");
      if (c.k_out_eff <= 1e-12) {
        // Linked to the saturated side only: the limit x -> 0+ with p = 1
        // towards infinite fitness and p ~ 0 elsewhere.
        c.x = std::numeric_limits<double>::min();
        c.x_free = false;
      } else {
        c.x = c.k_out / scale;
      }
    }
    if (c.y_free) {
      c.k_in_eff = c.k_in - (saturated_rows - (std::isinf(c.x) ? 1.0 : 0.0));
      if (c.k_in_eff < -1e-12)
        throw precondition_error("degree sequence forces boundary probabilities the model cannot represent");
      if (c.k_in_eff <= 1e-12) {
        // Linked to the saturated side only: the limit y -> 0+ with p = 1
        // towards infinite fitness and p ~ 0 elsewhere.
        c.y = std::numeric_limits<double>::min();
        c.y_free = false;
      } else {
        c.y = c.k_in / scale;
      }
    }
  }

  const std::size_t C = classes.size();
  auto residual_of = [&]() {
    double worst = 0.0;
    for (std::size_t c = 0; c < C; ++c) {
      double out = 0.0, in = 0.0;
      for (std::size_t d = 0; d < C; ++d) {
        const double m = classes[d].count - (c == d ? 1.0 : 0.0);
        if (m <= 0.0) continue;
        out += m * link_probability(classes[c].x, classes[d].y);
        in += m * link_probability(classes[d].x, classes[c].y);
      }
      worst = std::max({worst, std::abs(out - classes[c].k_out), std::abs(in - classes[c].k_in)});
    }
    return worst;
  };

  std::vector<double> next_x(C), next_y(C);
  double residual = residual_of();
  double best = residual;
  std::size_t iter = 0;
  auto sweep = [&]() {
    for (std::size_t c = 0; c < C; ++c) {
      next_x[c] = classes[c].x;
      next_y[c] = classes[c].y;
      if (classes[c].x_free) {
        double denom = 0.0;
        for (std::size_t d = 0; d < C; ++d) {
          if (!classes[d].y_free) continue;
          const double m = classes[d].count - (c == d ? 1.0 : 0.0);
          if (m > 0.0) denom += m * classes[d].y / (1.0 + classes[c].x * classes[d].y);
        }
        if (denom <= 0.0) throw precondition_error("node has no available partners: infeasible sequence");
        next_x[c] = options.damping * classes[c].x + (1.0 - options.damping) * classes[c].k_out_eff / denom;
      }
      if (classes[c].y_free) {
        double denom = 0.0;
        for (std::size_t d = 0; d < C; ++d) {
          if (!classes[d].x_free) continue;
          const double m = classes[d].count - (c == d ? 1.0 : 0.0);
          if (m > 0.0) denom += m * classes[d].x / (1.0 + classes[d].x * classes[c].y);
        }
        if (denom <= 0.0) throw precondition_error("node has no available partners: infeasible sequence");
        next_y[c] = options.damping * classes[c].y + (1.0 - options.damping) * classes[c].k_in_eff / denom;
      }
    }
    for (std::size_t c = 0; c < C; ++c) {
      classes[c].x = next_x[c];
      classes[c].y = next_y[c];
    }
    residual = residual_of();
    best = std::min(best, residual);
    if (!std::isfinite(residual)) throw convergence_error("DBCM solver diverged", best, iter);
  };
  while (residual > options.tol) {
    if (iter >= options.max_iter) throw convergence_error("DBCM solver did not converge", best, iter);
    ++iter;
    sweep();
  }
  // Extra sweeps leave headroom for rounding when the fit is re-evaluated node
  // by node; stop as soon as they stop helping.
  for (int extra = 0; extra < 50 && residual > polish_target * options.tol && iter < options.max_iter; ++extra) {
    const auto saved = classes;
    const double before = residual;
    ++iter;
    sweep();
    if (residual >= before) {
      classes = saved;
      residual = before;
      break;
    }
  }

  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = classes[class_of[i]].x;
    y[i] = classes[class_of[i]].y;
  }
  DbcmFit fit(NodeUniverse::anonymous(n), std::move(x), std::move(y));
  fit.residual = residual;
  fit.iterations = iter;
  fit.tolerance = options.tol;
  return fit;
}

DbcmFit fit_dbcm(const Digraph& g, const SolverOptions& options) {
  auto records = degree_strength(g);
  std::vector<double> k_in(records.size()), k_out(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    k_in[i] = static_cast<double>(records[i].k_in);
    k_out[i] = static_cast<double>(records[i].k_out);
  }
  auto fit = fit_dbcm(k_in, k_out, options);
  DbcmFit named(g.universe(), fit.x_out(), fit.y_in());
  named.residual = fit.residual;
  named.iterations = fit.iterations;
  named.tolerance = fit.tolerance;
  return named;
}

namespace {

// Visits the sampled links of a DBCM realization row by row. Within a row the
// columns are scanned by decreasing probability, skipping geometrically with
// the last probability as an upper bound and thinning to the exact value.
template <class Visit>
void for_each_sampled_link(const DbcmFit& fit, Rng& rng, Visit&& visit) {
  const auto& order = fit.column_order();
  const auto& x = fit.x_out();
  const auto& y = fit.y_in();
  const std::size_t n = fit.node_count();
  for (NodeIndex i = 0; i < n; ++i) {
    if (x[i] == 0.0) continue;
    std::size_t pos = 0;
    double bound = 1.0;
    while (pos < n && bound > 0.0) {
      if (bound < 1.0) {
        const double u = uniform01(rng);
        const double skip = std::floor(std::log1p(-u) / std::log1p(-bound));
        if (skip >= static_cast<double>(n - pos)) break;
        pos += static_cast<std::size_t>(skip);
      }
      const NodeIndex j = order[pos];
      ++pos;
      if (j == i) continue;
      const double p = link_probability(x[i], y[j]);
      if (p >= bound || uniform01(rng) * bound < p) visit(i, j);
      bound = p;
    }
  }
}

}  // namespace

Digraph sample_dbcm(const DbcmFit& fit, Rng& rng) {
  std::vector<Edge> edges;
  for_each_sampled_link(fit, rng, [&](NodeIndex i, NodeIndex j) { edges.push_back({i, j, 1.0}); });
  return Digraph(fit.universe(), std::move(edges));
}

Digraph sample_dbcm(const DbcmFit& fit, std::uint64_t seed) {
  Rng rng(seed);
  return sample_dbcm(fit, rng);
}

DwcmFit::DwcmFit(DbcmFit topology, std::vector<double> x_out, std::vector<double> x_in)
    : topology_(std::move(topology)), x_out_(std::move(x_out)), x_in_(std::move(x_in)) {
  if (x_out_.size() != topology_.node_count() || x_in_.size() != topology_.node_count())
    throw precondition_error("strength fitness vectors do not match the topology");
}

double DwcmFit::poisson_mean(NodeIndex i, NodeIndex j) const {
  if (i == j) return 0.0;
  return x_out_.at(i) * x_in_.at(j);
}

double DwcmFit::expected_weight(NodeIndex i, NodeIndex j) const {
  return topology_.probability(i, j) * poisson_mean(i, j);
}

std::vector<double> DwcmFit::expected_out_strength() const {
  std::vector<double> s(node_count(), 0.0);
  for (NodeIndex i = 0; i < node_count(); ++i)
    for (NodeIndex j = 0; j < node_count(); ++j) s[i] += expected_weight(i, j);
  return s;
}

std::vector<double> DwcmFit::expected_in_strength() const {
  std::vector<double> s(node_count(), 0.0);
  for (NodeIndex i = 0; i < node_count(); ++i)
    for (NodeIndex j = 0; j < node_count(); ++j) s[j] += expected_weight(i, j);
  return s;
}

DwcmFit fit_dwcm(const DbcmFit& topology, std::span<const double> s_in, std::span<const double> s_out,
                 const SolverOptions& options) {
  const std::size_t n = topology.node_count();
  if (s_in.size() != n || s_out.size() != n) throw precondition_error("strength sequences do not match the topology");
  double sum_in = 0.0, sum_out = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(s_in[i] >= 0.0) || !(s_out[i] >= 0.0) || !std::isfinite(s_in[i]) || !std::isfinite(s_out[i]))
      throw precondition_error("strengths must be finite and nonnegative");
    sum_in += s_in[i];
    sum_out += s_out[i];
  }
  if (std::abs(sum_in - sum_out) > 1e-9 * std::max(1.0, sum_out))
    throw precondition_error("sum of in-strengths differs from sum of out-strengths");

  std::vector<double> p(n * n);
  for (NodeIndex i = 0; i < n; ++i)
    for (NodeIndex j = 0; j < n; ++j) p[i * n + j] = topology.probability(i, j);

  const double scale = std::sqrt(std::max(sum_out, 1e-300));
  std::vector<double> x_out(n), x_in(n);
  for (std::size_t i = 0; i < n; ++i) {
    x_out[i] = s_out[i] / scale;
    x_in[i] = s_in[i] / scale;
  }
  // Each node with positive strength must have a possible partner that also
  // carries strength on the opposite side.
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0, col = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (s_in[j] > 0.0) row += p[i * n + j];
      if (s_out[j] > 0.0) col += p[j * n + i];
    }
    if ((s_out[i] > 0.0 && row == 0.0) || (s_in[i] > 0.0 && col == 0.0))
      throw precondition_error("positive strength on a node without admissible links: inconsistent constraints");
  }

  auto row_residual = [&]() {
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < n; ++j) row += p[i * n + j] * x_in[j];
      worst = std::max(worst, std::abs(x_out[i] * row - s_out[i]));
    }
    return worst;
  };
  auto col_residual = [&]() {
    double worst = 0.0;
    std::vector<double> col(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) col[j] += p[i * n + j] * x_out[i];
    for (std::size_t j = 0; j < n; ++j) worst = std::max(worst, std::abs(x_in[j] * col[j] - s_in[j]));
    return worst;
  };

  // Alternating scaling: each half-step solves one side's equations exactly
  // given the other side.
  std::vector<double> col(n);
  double residual = std::max(row_residual(), col_residual());
  double best = residual;
  std::size_t iter = 0;
  auto sweep = [&]() {
    for (std::size_t i = 0; i < n; ++i) {
      if (s_out[i] == 0.0) continue;
      double row = 0.0;
      for (std::size_t j = 0; j < n; ++j) row += p[i * n + j] * x_in[j];
      x_out[i] = s_out[i] / row;
    }
    std::fill(col.begin(), col.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double xi = x_out[i];
      if (xi == 0.0) continue;
      const double* pi = &p[i * n];
      for (std::size_t j = 0; j < n; ++j) col[j] += pi[j] * xi;
    }
    for (std::size_t j = 0; j < n; ++j)
      if (s_in[j] > 0.0) x_in[j] = s_in[j] / col[j];
    residual = row_residual();
    best = std::min(best, residual);
    if (!std::isfinite(residual)) throw convergence_error("DWCM solver diverged", best, iter);
  };
  while (residual > options.tol) {
    if (iter >= options.max_iter) throw convergence_error("DWCM solver did not converge", best, iter);
    ++iter;
    sweep();
  }
  for (int extra = 0; extra < 50 && residual > polish_target * options.tol && iter < options.max_iter; ++extra) {
    const auto saved_out = x_out, saved_in = x_in;
    const double before = residual;
    ++iter;
    sweep();
    if (residual >= before) {
      x_out = saved_out;
      x_in = saved_in;
      residual = before;
      break;
    }
  }
  residual = std::max(residual, col_residual());

  DwcmFit fit(topology, std::move(x_out), std::move(x_in));
  fit.residual = residual;
  fit.iterations = iter;
  fit.tolerance = options.tol;
  return fit;
}

DwcmFit fit_dwcm(const Digraph& g, const SolverOptions& options) {
  auto topology = fit_dbcm(g, options);
  auto records = degree_strength(g);
  std::vector<double> s_in(records.size()), s_out(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    s_in[i] = records[i].s_in;
    s_out[i] = records[i].s_out;
  }
  return fit_dwcm(topology, s_in, s_out, options);
}

Digraph sample_dwcm(const DwcmFit& fit, Rng& rng) {
  std::vector<Edge> edges;
  for_each_sampled_link(fit.topology(), rng, [&](NodeIndex i, NodeIndex j) {
    const double lambda = fit.poisson_mean(i, j);
    if (lambda <= 0.0) return;
    std::poisson_distribution<long long> draw(lambda);
    const auto w = draw(rng);
    if (w > 0) edges.push_back({i, j, static_cast<double>(w)});
  });
  return Digraph(fit.topology().universe(), std::move(edges));
}

Digraph sample_dwcm(const DwcmFit& fit, std::uint64_t seed) {
  Rng rng(seed);
  return sample_dwcm(fit, rng);
}

DenseMatrix dense_maxent(std::span<const double> s_out, std::span<const double> s_in) {
  if (s_out.size() != s_in.size()) throw precondition_error("strength sequences differ in length");
  const double v = std::accumulate(s_out.begin(), s_out.end(), 0.0);
  if (!(v > 0.0)) throw precondition_error("dense maximum-entropy matrix needs positive total strength");
  DenseMatrix m;
  m.n = s_out.size();
  m.values.resize(m.n * m.n);
  for (std::size_t i = 0; i < m.n; ++i)
    for (std::size_t j = 0; j < m.n; ++j) m.values[i * m.n + j] = s_out[i] * s_in[j] / v;
  return m;
}

DenseMatrix dense_maxent(std::span<const double> strengths) { return dense_maxent(strengths, strengths); }

}  // namespace mplex
