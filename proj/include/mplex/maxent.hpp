#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mplex/graph.hpp"
#include "mplex/rng.hpp"

namespace mplex {

struct SolverOptions {
  double tol = 1e-8;  // max absolute constraint violation
  std::size_t max_iter = 100000;
  double damping = 0.5;  // weight kept on the previous iterate
};

// Directed binary configuration model: independent links with
//   p_ij = x_i y_j / (1 + x_i y_j),  i != j,
// where x = exp(-theta_out), y = exp(-theta_in). A fitness of +inf marks a
// node linked to every other node (p = 1), zero marks an isolated side.
class DbcmFit {
 public:
  DbcmFit() = default;
  DbcmFit(UniversePtr universe, std::vector<double> x_out, std::vector<double> y_in);

  const UniversePtr& universe() const noexcept { return universe_; }
  std::size_t node_count() const noexcept { return x_out_.size(); }
  const std::vector<double>& x_out() const noexcept { return x_out_; }
  const std::vector<double>& y_in() const noexcept { return y_in_; }
  // Lagrange multipliers theta = -ln(fitness); +inf for zero fitness.
  std::vector<double> theta_out() const;
  std::vector<double> theta_in() const;

  double probability(NodeIndex i, NodeIndex j) const;
  std::vector<double> expected_out_degree() const;
  std::vector<double> expected_in_degree() const;
  // Column indices by decreasing y, used by the sampler.
  const std::vector<NodeIndex>& column_order() const noexcept { return column_order_; }

  double residual = 0.0;
  std::size_t iterations = 0;
  double tolerance = 0.0;

 private:
  UniversePtr universe_;
  std::vector<double> x_out_, y_in_;
  std::vector<NodeIndex> column_order_;
};

// Solves sum_{j != i} p_ij = k_out_i and sum_{j != i} p_ji = k_in_i by damped
// fixed-point iteration. Throws precondition_error for infeasible sequences
// and convergence_error when max_iter sweeps do not reach tol.
DbcmFit fit_dbcm(std::span<const double> k_in, std::span<const double> k_out, const SolverOptions& options = {});
// Fits the degree sequences of g (self-loops excluded) on g's universe.
DbcmFit fit_dbcm(const Digraph& g, const SolverOptions& options = {});

// One binary realization; each off-diagonal pair is an independent Bernoulli
// draw. Runs in O(n + links) per sample.
Digraph sample_dbcm(const DbcmFit& fit, Rng& rng);
Digraph sample_dbcm(const DbcmFit& fit, std::uint64_t seed);

// Directed weighted configuration model: DBCM topology plus Poisson weights
// with means lambda_ij = x_out_i x_in_j, so that E[w_ij] = p_ij lambda_ij.
class DwcmFit {
 public:
  DwcmFit() = default;
  DwcmFit(DbcmFit topology, std::vector<double> x_out, std::vector<double> x_in);

  const DbcmFit& topology() const noexcept { return topology_; }
  const std::vector<double>& x_out() const noexcept { return x_out_; }
  const std::vector<double>& x_in() const noexcept { return x_in_; }
  std::size_t node_count() const noexcept { return x_out_.size(); }

  double poisson_mean(NodeIndex i, NodeIndex j) const;  // lambda_ij
  double expected_weight(NodeIndex i, NodeIndex j) const;
  std::vector<double> expected_out_strength() const;
  std::vector<double> expected_in_strength() const;

  double residual = 0.0;
  std::size_t iterations = 0;
  double tolerance = 0.0;

 private:
  DbcmFit topology_;
  std::vector<double> x_out_, x_in_;
};

// Holds the DBCM probabilities fixed and solves
//   sum_{j != i} p_ij x_out_i x_in_j = s_out_i   (and the column analogue).
DwcmFit fit_dwcm(const DbcmFit& topology, std::span<const double> s_in, std::span<const double> s_out,
                 const SolverOptions& options = {});
// Fits the DBCM on g's degrees, then the strengths.
DwcmFit fit_dwcm(const Digraph& g, const SolverOptions& options = {});

// Bernoulli(p_ij) x Poisson(lambda_ij) weights; a Poisson draw of zero stores
// no edge.
Digraph sample_dwcm(const DwcmFit& fit, Rng& rng);
Digraph sample_dwcm(const DwcmFit& fit, std::uint64_t seed);

// Row-major n x n matrix.
struct DenseMatrix {
  std::size_t n = 0;
  std::vector<double> values;

  double operator()(std::size_t i, std::size_t j) const { return values[i * n + j]; }
};

// Maximum-entropy expected weights with self-loops allowed:
//   w_ij = s_i s_j / v,  v = sum_i s_i.
DenseMatrix dense_maxent(std::span<const double> strengths);
// Directed form w_ij = s_out_i s_in_j / v.
DenseMatrix dense_maxent(std::span<const double> s_out, std::span<const double> s_in);

}  // namespace mplex
