#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "mplex/ensemble.hpp"
#include "mplex/graph.hpp"
#include "mplex/maxent.hpp"
#include "mplex/powerlaw.hpp"
#include "mplex/similarity.hpp"

namespace mplex {

using Cell = std::variant<std::monostate, std::string, double, std::int64_t>;

struct Column {
  std::string name;
  bool percent = false;  // shown as a percentage in CSV display mode
};

// Rectangular report. Every emitter goes through this type so that column
// order is fixed by the builder alone.
struct Table {
  std::vector<Column> columns;
  std::vector<std::vector<Cell>> rows;

  explicit Table(std::vector<Column> cols = {}) : columns(std::move(cols)) {}
  void add_row(std::vector<Cell> row);
};

enum class Format { csv, json };

Format format_from_string(const std::string& name);
const char* extension(Format format);

struct CsvStyle {
  bool display = false;  // percent columns as "12.34%", other reals unchanged
};

// Empty cells for missing values; reals in shortest round-trip form.
void write_csv(std::ostream& out, const Table& table, const CsvStyle& style = {});
// Array of row objects, keys in column order, null for missing values.
void write_json(std::ostream& out, const Table& table);
// Writes atomically enough for the CLI: the file is either complete or absent.
void emit_report(const Table& table, Format format, const std::filesystem::path& path, const CsvStyle& style = {});
void write_text_file(const std::filesystem::path& path, const std::string& text);

// Per-layer statistics. Values undefined on the layer stay empty.
struct LayerSummary {
  std::size_t nodes = 0;  // active nodes
  std::size_t edges = 0;  // excluding self-loops
  std::size_t self_loops = 0;
  double volume = 0.0;    // total weight, self-loops included
  std::optional<double> density;
  std::size_t largest_weak = 0, largest_strong = 0;
  std::optional<double> path_undirected, path_directed;
  std::size_t reciprocated_links = 0;
  std::optional<double> reciprocity, strength_reciprocity;
  std::optional<double> assortativity_in, assortativity_out, assortativity_in_strength, assortativity_out_strength;
  std::optional<double> ucc, dcc;
  std::uint64_t triangles = 0;
  std::optional<double> spearman_in, spearman_out;
  std::optional<PowerLawFit> powerlaw_in, powerlaw_out;
  std::optional<LikelihoodRatio> lognormal_in, lognormal_out;
};

LayerSummary summarize_layer(const Digraph& g);

struct LayerRow {
  std::string period, layer;
};

Table metrics_table(const std::vector<std::pair<LayerRow, LayerSummary>>& rows);

// Volumes per layer before and after consolidation.
struct VolumeRow {
  LayerRow key;
  std::size_t nodes = 0, edges = 0;
  double volume = 0.0;
  std::optional<double> consolidated_volume, intragroup_volume;
  std::optional<std::size_t> groups, consolidated_edges;
};
Table volume_table(const std::vector<VolumeRow>& rows);

struct EnsembleRow {
  LayerRow key;
  std::string null;
  std::vector<EnsembleReport> reports;
};
Table ensemble_table(const std::vector<EnsembleRow>& rows);

struct MotifRow {
  LayerRow key;
  std::string null;
  MotifReport report;
};
Table motif_table(const std::vector<MotifRow>& rows);

struct SimilarityRow {
  std::string scope;  // what the matrix ranges over, e.g. a layer or a period
  SimilarityMatrix matrix;
};
Table similarity_table(const std::vector<SimilarityRow>& rows);

Table dbcm_table(const DbcmFit& fit, const Digraph& observed);
Table dwcm_table(const DwcmFit& fit, const Digraph& observed);
// Multipliers (null where infinite), residual, iterations, tolerance.
std::string dbcm_json(const DbcmFit& fit);
std::string dwcm_json(const DwcmFit& fit);

Table ccdf_table(const std::vector<CcdfPoint>& points);
Table knn_table(const std::map<std::size_t, double>& curve);

}  // namespace mplex
