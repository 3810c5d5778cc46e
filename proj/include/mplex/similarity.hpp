#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mplex/graph.hpp"
#include "mplex/maxent.hpp"

namespace mplex {

// Node basis on which two graphs are compared: every node active in either
// graph, or only nodes active in both.
enum class AlignMode { node_union, node_intersection };
enum class SimilarityMeasure { jaccard, cosine };
enum class SimilarityNull { dbcm, density };

// Two graphs as vectors over the ordered off-diagonal pairs of a shared node
// basis (nodes matched by identifier, basis sorted by identifier). Entry
// (i, j) sits at i * (m - 1) + (j < i ? j : j - 1).
struct AlignedPair {
  std::vector<std::string> basis;
  AlignMode mode = AlignMode::node_union;
  bool weighted = false;
  std::vector<double> a, b;
};

AlignedPair align(const Digraph& ga, const Digraph& gb, AlignMode mode, bool weighted);

// |p AND q| / |p OR q| on binary vectors. Throws degenerate_error when both
// vectors are all-zero.
double jaccard(const AlignedPair& pair);
// p.q / (|p| |q|). Throws degenerate_error on a zero vector.
double cosine(const AlignedPair& pair);

// Same values computed from the sparse edge sets, without materializing the
// aligned vectors. Jaccard uses the binary projection, cosine raw weights.
double similarity(const Digraph& ga, const Digraph& gb, SimilarityMeasure measure, AlignMode mode);

struct SignificanceOptions {
  SimilarityNull null = SimilarityNull::dbcm;
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  SolverOptions solver;
};

// Upper-tail Monte Carlo p-value (1 + #{null >= observed}) / (S + 1), where
// each null draw samples both graphs independently from their fitted nulls.
// The dbcm null uses the DBCM for Jaccard and the DWCM for cosine; the density
// null draws Erdos-Renyi digraphs on each graph's active nodes (cosine: with
// the observed weights reshuffled onto the drawn links). Null draws on which
// the measure is undefined count as similarity 0.
double significance(const Digraph& ga, const Digraph& gb, SimilarityMeasure measure, AlignMode mode,
                    const SignificanceOptions& options);

struct SimilarityReport {
  SimilarityMeasure measure = SimilarityMeasure::jaccard;
  AlignMode mode = AlignMode::node_union;
  double value = 0.0;
  std::optional<double> p_value;
  std::optional<SimilarityNull> null;
  std::size_t samples = 0;
};

struct LabelledGraph {
  std::string label;
  Digraph graph;
};

// Lower triangle (row > col) in row-major order.
struct SimilarityMatrix {
  std::vector<std::string> labels;
  struct Entry {
    std::size_t row, col;
    SimilarityReport report;
  };
  std::vector<Entry> entries;
};

SimilarityMatrix similarity_matrix(const std::vector<LabelledGraph>& items, SimilarityMeasure measure, AlignMode mode,
                                   const std::optional<SignificanceOptions>& significance_options = std::nullopt);

const char* to_string(AlignMode mode);
const char* to_string(SimilarityMeasure measure);
const char* to_string(SimilarityNull null);

}  // namespace mplex
