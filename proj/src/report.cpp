#include "mplex/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "mplex/error.hpp"
#include "mplex/io.hpp"
#include "mplex/metrics.hpp"
#include "mplex/triads.hpp"

namespace mplex {
namespace {

using ordered_json = nlohmann::ordered_json;

Cell opt(const std::optional<double>& v) { return v ? Cell(*v) : Cell(); }
Cell count(std::size_t v) { return Cell(static_cast<std::int64_t>(v)); }
Cell real(double v) { return std::isfinite(v) ? Cell(v) : Cell(); }

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string percent(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.2f%%", 100.0 * v);
  return buffer;
}

ordered_json to_json(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>)
          return nullptr;
        else if constexpr (std::is_same_v<T, double>)
          return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr);
        else
          return v;
      },
      cell);
}

template <class T>
T attempt(auto f) {
  try {
    return f();
  } catch (const degenerate_error&) {
    return T{};
  } catch (const precondition_error&) {
    return T{};
  }
}

ordered_json multipliers(const std::vector<double>& v) {
  auto out = ordered_json::array();
  for (double x : v) out.push_back(std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr));
  return out;
}

}  // namespace

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw error("report row width does not match its header");
  rows.push_back(std::move(row));
}

Format format_from_string(const std::string& name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  throw precondition_error("unknown format '" + name + "' (expected csv or json)");
}

const char* extension(Format format) { return format == Format::csv ? ".csv" : ".json"; }

void write_csv(std::ostream& out, const Table& table, const CsvStyle& style) {
  for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << csv_escape(table.columns[c].name);
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::string>)
              out << csv_escape(v);
            else if constexpr (std::is_same_v<T, double>)
              out << (style.display && table.columns[c].percent ? percent(v) : format_number(v));
            else if constexpr (std::is_same_v<T, std::int64_t>)
              out << v;
          },
          row[c]);
    }
    out << '\n';
  }
}

void write_json(std::ostream& out, const Table& table) {
  auto rows = ordered_json::array();
  for (const auto& row : table.rows) {
    ordered_json object = ordered_json::object();
    for (std::size_t c = 0; c < row.size(); ++c) object[table.columns[c].name] = to_json(row[c]);
    rows.push_back(std::move(object));
  }
  out << rows.dump(2) << '\n';
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  auto partial = path;
  partial += ".partial";
  {
    std::ofstream file(partial, std::ios::binary);
    if (!file) throw precondition_error("cannot write '" + path.string() + "'");
    file << text;
    file.close();
    if (!file) {
      std::filesystem::remove(partial);
      throw precondition_error("cannot write '" + path.string() + "'");
    }
  }
  std::filesystem::rename(partial, path);
}

void emit_report(const Table& table, Format format, const std::filesystem::path& path, const CsvStyle& style) {
  std::ostringstream buffer;
  if (format == Format::csv)
    write_csv(buffer, table, style);
  else
    write_json(buffer, table);
  write_text_file(path, buffer.str());
}

LayerSummary summarize_layer(const Digraph& g) {
  LayerSummary s;
  s.nodes = active_node_count(g);
  s.edges = g.edge_count() - g.self_loop_count();
  s.self_loops = g.self_loop_count();
  s.volume = g.total_weight();
  s.density = attempt<std::optional<double>>([&] { return density(g); });
  auto weak = components(g, ComponentMode::weak);
  auto strong = components(g, ComponentMode::strong);
  s.largest_weak = weak.empty() ? 0 : weak.front();
  s.largest_strong = strong.empty() ? 0 : strong.front();
  // A largest component of one node has no pairs to average over.
  if (s.largest_weak > 1) s.path_undirected = avg_path_length(g, PathMode::undirected);
  if (s.largest_strong > 1) s.path_directed = avg_path_length(g, PathMode::directed);
  s.reciprocated_links = reciprocated_links(g);
  s.reciprocity = attempt<std::optional<double>>([&] { return reciprocity(g, ReciprocityMode::binary); });
  s.strength_reciprocity = attempt<std::optional<double>>([&] { return reciprocity(g, ReciprocityMode::weighted); });
  auto assort = [&](NodeAttribute a) {
    return attempt<std::optional<double>>([&] { return assortativity_coefficient(g, a); });
  };
  s.assortativity_in = assort(NodeAttribute::in_degree);
  s.assortativity_out = assort(NodeAttribute::out_degree);
  s.assortativity_in_strength = assort(NodeAttribute::in_strength);
  s.assortativity_out_strength = assort(NodeAttribute::out_strength);
  s.ucc = clustering(g, ClusteringMode::undirected).average;
  s.dcc = clustering(g, ClusteringMode::directed).average;
  s.triangles = triangles(g);
  s.spearman_in = attempt<std::optional<double>>([&] { return spearman_degree_strength(g, Direction::in); });
  s.spearman_out = attempt<std::optional<double>>([&] { return spearman_degree_strength(g, Direction::out); });

  auto degrees = degree_strength(g);
  auto tail = [&](bool in, std::optional<PowerLawFit>& fit, std::optional<LikelihoodRatio>& lr) {
    std::vector<double> sample;
    for (const auto& d : degrees) {
      const std::size_t k = in ? d.k_in : d.k_out;
      if (k > 0) sample.push_back(static_cast<double>(k));
    }
    fit = attempt<std::optional<PowerLawFit>>([&] { return fit_power_law(sample); });
    if (fit) lr = attempt<std::optional<LikelihoodRatio>>([&] { return compare_lognormal(sample, *fit); });
  };
  tail(true, s.powerlaw_in, s.lognormal_in);
  tail(false, s.powerlaw_out, s.lognormal_out);
  return s;
}

Table metrics_table(const std::vector<std::pair<LayerRow, LayerSummary>>& rows) {
  Table t({{"period"},
           {"layer"},
           {"nodes"},
           {"edges"},
           {"density", true},
           {"largest_weak"},
           {"largest_strong"},
           {"avg_path_undirected"},
           {"avg_path_directed"},
           {"reciprocated_links"},
           {"reciprocity"},
           {"strength_reciprocity"},
           {"assortativity_in"},
           {"assortativity_out"},
           {"assortativity_in_strength"},
           {"assortativity_out_strength"},
           {"ucc"},
           {"dcc"},
           {"triangles"},
           {"spearman_in"},
           {"spearman_out"},
           {"alpha_in"},
           {"xmin_in"},
           {"ntail_in"},
           {"llr_in"},
           {"llr_p_in"},
           {"alpha_out"},
           {"xmin_out"},
           {"ntail_out"},
           {"llr_out"},
           {"llr_p_out"},
           {"volume"},
           {"self_loops"}});
  auto fit_cells = [](const std::optional<PowerLawFit>& fit, const std::optional<LikelihoodRatio>& lr) {
    std::vector<Cell> cells;
    cells.push_back(fit ? Cell(fit->alpha) : Cell());
    cells.push_back(fit ? Cell(fit->x_min) : Cell());
    cells.push_back(fit ? count(fit->n_tail) : Cell());
    cells.push_back(lr ? Cell(lr->normalized_llr) : Cell());
    cells.push_back(lr ? Cell(lr->p_value) : Cell());
    return cells;
  };
  for (const auto& [key, s] : rows) {
    std::vector<Cell> row = {key.period,
                             key.layer,
                             count(s.nodes),
                             count(s.edges),
                             opt(s.density),
                             count(s.largest_weak),
                             count(s.largest_strong),
                             opt(s.path_undirected),
                             opt(s.path_directed),
                             count(s.reciprocated_links),
                             opt(s.reciprocity),
                             opt(s.strength_reciprocity),
                             opt(s.assortativity_in),
                             opt(s.assortativity_out),
                             opt(s.assortativity_in_strength),
                             opt(s.assortativity_out_strength),
                             opt(s.ucc),
                             opt(s.dcc),
                             count(s.triangles),
                             opt(s.spearman_in),
                             opt(s.spearman_out)};
    for (auto& c : fit_cells(s.powerlaw_in, s.lognormal_in)) row.push_back(std::move(c));
    for (auto& c : fit_cells(s.powerlaw_out, s.lognormal_out)) row.push_back(std::move(c));
    row.push_back(real(s.volume));
    row.push_back(count(s.self_loops));
    t.add_row(std::move(row));
  }
  return t;
}

Table volume_table(const std::vector<VolumeRow>& rows) {
  Table t({{"period"},
           {"layer"},
           {"nodes"},
           {"edges"},
           {"volume"},
           {"groups"},
           {"consolidated_edges"},
           {"consolidated_volume"},
           {"intragroup_volume"},
           {"intragroup_share", true}});
  for (const auto& r : rows) {
    std::optional<double> share;
    if (r.intragroup_volume && r.volume > 0.0) share = *r.intragroup_volume / r.volume;
    t.add_row({r.key.period, r.key.layer, count(r.nodes), count(r.edges), real(r.volume),
               r.groups ? count(*r.groups) : Cell(), r.consolidated_edges ? count(*r.consolidated_edges) : Cell(),
               opt(r.consolidated_volume), opt(r.intragroup_volume), opt(share)});
  }
  return t;
}

Table ensemble_table(const std::vector<EnsembleRow>& rows) {
  Table t({{"period"},
           {"layer"},
           {"null"},
           {"metric"},
           {"observed"},
           {"mean"},
           {"sd"},
           {"p_lo"},
           {"p_hi"},
           {"z"},
           {"samples"},
           {"degenerate"}});
  for (const auto& r : rows)
    for (const auto& e : r.reports)
      t.add_row({r.key.period, r.key.layer, r.null, e.metric, opt(e.observed), real(e.mean), real(e.sd), opt(e.p_lower),
                 opt(e.p_upper), opt(e.z), count(e.samples), count(e.degenerate ? 1 : 0)});
  return t;
}

Table motif_table(const std::vector<MotifRow>& rows) {
  Table t({{"period"},
           {"layer"},
           {"null"},
           {"triad"},
           {"class"},
           {"observed"},
           {"mean"},
           {"sd"},
           {"z"},
           {"samples"},
           {"stuck"}});
  for (const auto& r : rows)
    for (std::size_t k = 0; k < triad_class_count; ++k)
      t.add_row({r.key.period, r.key.layer, r.null, count(k + 1), std::string(triad_name(k)),
                 count(r.report.observed.counts[k]), real(r.report.mean[k]), real(r.report.sd[k]), opt(r.report.z[k]),
                 count(r.report.samples), count(r.report.stuck)});
  return t;
}

Table similarity_table(const std::vector<SimilarityRow>& rows) {
  Table t({{"scope"},
           {"row"},
           {"col"},
           {"measure"},
           {"mode"},
           {"value", true},
           {"p_value"},
           {"null"},
           {"samples"}});
  for (const auto& r : rows)
    for (const auto& e : r.matrix.entries) {
      const auto& rep = e.report;
      t.add_row({r.scope, r.matrix.labels[e.row], r.matrix.labels[e.col], std::string(to_string(rep.measure)),
                 std::string(to_string(rep.mode)), real(rep.value), opt(rep.p_value),
                 rep.null ? Cell(std::string(to_string(*rep.null))) : Cell(),
                 rep.p_value ? count(rep.samples) : Cell()});
    }
  return t;
}

Table dbcm_table(const DbcmFit& fit, const Digraph& observed) {
  Table t({{"node"}, {"x_out"}, {"y_in"}, {"k_out"}, {"k_in"}, {"expected_k_out"}, {"expected_k_in"}});
  auto degrees = degree_strength(observed);
  auto eo = fit.expected_out_degree(), ei = fit.expected_in_degree();
  for (NodeIndex i = 0; i < fit.node_count(); ++i)
    t.add_row({fit.universe()->name(i), real(fit.x_out()[i]), real(fit.y_in()[i]), count(degrees[i].k_out),
               count(degrees[i].k_in), real(eo[i]), real(ei[i])});
  return t;
}

Table dwcm_table(const DwcmFit& fit, const Digraph& observed) {
  Table t({{"node"}, {"x_out"}, {"x_in"}, {"s_out"}, {"s_in"}, {"expected_s_out"}, {"expected_s_in"}});
  auto degrees = degree_strength(observed);
  auto eo = fit.expected_out_strength(), ei = fit.expected_in_strength();
  const auto& universe = fit.topology().universe();
  for (NodeIndex i = 0; i < fit.node_count(); ++i)
    t.add_row({universe->name(i), real(fit.x_out()[i]), real(fit.x_in()[i]), real(degrees[i].s_out),
               real(degrees[i].s_in), real(eo[i]), real(ei[i])});
  return t;
}

std::string dbcm_json(const DbcmFit& fit) {
  ordered_json j;
  j["model"] = "dbcm";
  j["nodes"] = fit.universe()->names();
  j["x_out"] = multipliers(fit.x_out());
  j["y_in"] = multipliers(fit.y_in());
  j["residual"] = fit.residual;
  j["iterations"] = fit.iterations;
  j["tolerance"] = fit.tolerance;
  return j.dump(2) + "\n";
}

std::string dwcm_json(const DwcmFit& fit) {
  ordered_json j;
  j["model"] = "dwcm";
  j["nodes"] = fit.topology().universe()->names();
  j["x_out"] = multipliers(fit.x_out());
  j["x_in"] = multipliers(fit.x_in());
  j["residual"] = fit.residual;
  j["iterations"] = fit.iterations;
  j["tolerance"] = fit.tolerance;
  ordered_json topology;
  topology["x_out"] = multipliers(fit.topology().x_out());
  topology["y_in"] = multipliers(fit.topology().y_in());
  topology["residual"] = fit.topology().residual;
  topology["iterations"] = fit.topology().iterations;
  topology["tolerance"] = fit.topology().tolerance;
  j["topology"] = std::move(topology);
  return j.dump(2) + "\n";
}

Table ccdf_table(const std::vector<CcdfPoint>& points) {
  Table t({{"value"}, {"ccdf"}});
  for (const auto& p : points) t.add_row({real(p.value), real(p.probability)});
  return t;
}

Table knn_table(const std::map<std::size_t, double>& curve) {
  Table t({{"k"}, {"knn"}});
  for (const auto& [k, v] : curve) t.add_row({count(k), real(v)});
  return t;
}

}  // namespace mplex
