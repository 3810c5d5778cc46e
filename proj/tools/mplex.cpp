// mplex: command-line front end for the multiplex analysis library.
#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "mplex/ensemble.hpp"
#include "mplex/error.hpp"
#include "mplex/io.hpp"
#include "mplex/maxent.hpp"
#include "mplex/metrics.hpp"
#include "mplex/powerlaw.hpp"
#include "mplex/report.hpp"
#include "mplex/rng.hpp"
#include "mplex/similarity.hpp"
#include "mplex/synth.hpp"

namespace fs = std::filesystem;
using namespace mplex;

namespace {

const std::string total_layer = "TOT";

// Files written by the running command, removed again if it fails.
class Outputs {
 public:
  void write(const fs::path& path, const std::string& text) {
    written_.push_back(path);
    write_text_file(path, text);
  }
  void emit(const Table& table, Format format, const fs::path& stem, const CsvStyle& style = {}) {
    std::ostringstream buffer;
    if (format == Format::csv)
      write_csv(buffer, table, style);
    else
      write_json(buffer, table);
    auto path = stem;
    path += extension(format);
    write(path, buffer.str());
  }
  void edge_list(const fs::path& path, const std::vector<Multiplex>& periods) {
    written_.push_back(path);
    save_edge_list(path, periods);
  }
  void discard() {
    std::error_code ec;
    for (const auto& p : written_) {
      fs::remove(p, ec);
      auto partial = p;
      partial += ".partial";
      fs::remove(partial, ec);
    }
    written_.clear();
  }

 private:
  std::vector<fs::path> written_;
};

struct Common {
  std::string input;
  std::string groups;
  std::string manifest;
  std::vector<std::string> layers;
  std::string out = ".";
  std::string format = "csv";
};

std::vector<std::string> split_list(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ','))
      if (!part.empty()) out.push_back(part);
  }
  return out;
}

void add_input_options(CLI::App* cmd, Common& c, bool with_layers = true) {
  cmd->add_option("--input", c.input, "Edge list CSV (period,layer,lender,borrower,weight), optionally .gz")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--groups", c.groups, "bank,group CSV; consolidates banks into groups")->check(CLI::ExistingFile);
  cmd->add_option("--manifest", c.manifest, "JSON layer manifest {\"layers\": [...]}; rejects other layers")
      ->check(CLI::ExistingFile);
  if (with_layers)
    cmd->add_option("--layers", c.layers, "Layers to analyse (comma separated; TOT = all layers summed)")
        ->delimiter(',');
  cmd->add_option("--out", c.out, "Output directory")->capture_default_str();
  cmd->add_option("--format", c.format, "csv or json")->capture_default_str()->check(CLI::IsMember({"csv", "json"}));
}

std::vector<Multiplex> load(const Common& c) {
  EdgeListOptions options;
  if (!c.manifest.empty()) options.layer_vocabulary = load_layer_manifest(c.manifest);
  auto periods = load_edge_list(c.input, options);
  if (!c.groups.empty()) {
    auto groups = load_group_map(c.groups);
    for (auto& m : periods) m = consolidate(m, groups);
  }
  if (periods.empty()) throw precondition_error("input '" + c.input + "' holds no edges");
  return periods;
}

std::vector<std::string> selected_layers(const Common& c, const Multiplex& m, bool with_total) {
  if (c.layers.empty()) {
    auto names = m.layer_names();
    if (with_total) names.push_back(total_layer);
    return names;
  }
  for (const auto& name : c.layers)
    if (name != total_layer && !m.has_layer(name)) throw precondition_error("unknown layer '" + name + "'");
  return c.layers;
}

Digraph layer_graph(const Multiplex& m, const std::string& name) {
  return name == total_layer ? aggregate_all_layers(m) : m.layer(name);
}

fs::path prepare_out(const Common& c) {
  fs::path dir(c.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir)) throw precondition_error("cannot create output directory '" + c.out + "'");
  return dir;
}

std::string file_tag(const std::string& period, const std::string& layer) {
  std::string tag = period + "_" + layer;
  for (char& ch : tag)
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '-' && ch != '_') ch = '_';
  return tag;
}

// ---- ingest ----------------------------------------------------------------

void run_ingest(const Common& c, const std::string& consolidated_path, Outputs& out) {
  EdgeListOptions options;
  if (!c.manifest.empty()) options.layer_vocabulary = load_layer_manifest(c.manifest);
  auto periods = load_edge_list(c.input, options);
  if (periods.empty()) throw precondition_error("input '" + c.input + "' holds no edges");
  std::optional<GroupMap> groups;
  if (!c.groups.empty()) groups = load_group_map(c.groups);
  const auto dir = prepare_out(c);

  std::vector<VolumeRow> rows;
  std::vector<Multiplex> consolidated;
  for (const auto& m : periods) {
    std::optional<Multiplex> cm;
    if (groups) cm = consolidate(m, *groups);
    auto names = m.layer_names();
    names.push_back(total_layer);
    for (const auto& name : names) {
      VolumeRow r;
      r.key = {m.period(), name};
      auto g = layer_graph(m, name);
      r.nodes = active_node_count(g);
      r.edges = g.edge_count() - g.self_loop_count();
      r.volume = g.total_weight();
      if (cm) {
        auto stripped = strip_self_loops(layer_graph(*cm, name));
        r.groups = active_node_count(stripped.graph);
        r.consolidated_edges = stripped.graph.edge_count();
        r.consolidated_volume = stripped.graph.total_weight();
        r.intragroup_volume = stripped.removed_weight;
      }
      rows.push_back(r);
    }
    if (cm) consolidated.push_back(*cm);
  }
  out.emit(volume_table(rows), format_from_string(c.format), dir / "volumes");
  if (!consolidated_path.empty()) {
    if (!groups) throw precondition_error("--consolidated requires --groups");
    out.edge_list(consolidated_path, consolidated);
  }
}

// ---- metrics ---------------------------------------------------------------

void run_metrics(const Common& c, bool display, bool plots, Outputs& out) {
  auto periods = load(c);
  const auto dir = prepare_out(c);
  const auto format = format_from_string(c.format);
  std::vector<std::pair<LayerRow, LayerSummary>> rows;
  for (const auto& m : periods) {
    for (const auto& name : selected_layers(c, m, true)) {
      auto g = layer_graph(m, name);
      rows.push_back({{m.period(), name}, summarize_layer(g)});
      if (!plots || g.edge_count() == g.self_loop_count()) continue;
      auto degrees = degree_strength(g);
      std::vector<double> k_in, k_out;
      for (const auto& d : degrees) {
        if (d.k_in) k_in.push_back(static_cast<double>(d.k_in));
        if (d.k_out) k_out.push_back(static_cast<double>(d.k_out));
      }
      fs::create_directories(dir / "plots");
      const auto tag = file_tag(m.period(), name);
      out.emit(ccdf_table(ccdf(k_in)), Format::csv, dir / "plots" / ("ccdf_in_" + tag));
      out.emit(ccdf_table(ccdf(k_out)), Format::csv, dir / "plots" / ("ccdf_out_" + tag));
      out.emit(knn_table(knn_curve(g, KnnMode::in)), Format::csv, dir / "plots" / ("knn_" + tag));
    }
  }
  out.emit(metrics_table(rows), format, dir / "metrics", CsvStyle{display});
}

// ---- similarity ------------------------------------------------------------

struct SimilarityArgs {
  std::string across = "periods";
  std::string mode = "union";
  std::vector<std::string> measures = {"jaccard", "cosine"};
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::string null = "dbcm";
  double tol = 1e-8;
  bool display = false;
};

void run_similarity(const Common& c, const SimilarityArgs& a, Outputs& out) {
  auto periods = load(c);
  const auto dir = prepare_out(c);
  const AlignMode mode = a.mode == "union" ? AlignMode::node_union : AlignMode::node_intersection;
  std::optional<SignificanceOptions> significance;
  if (a.samples > 0) {
    if (a.samples < 100) throw precondition_error("significance needs at least 100 null samples (got --samples " +
                                                  std::to_string(a.samples) + ")");
    significance = SignificanceOptions{a.null == "dbcm" ? SimilarityNull::dbcm : SimilarityNull::density, a.samples,
                                       a.seed, SolverOptions{a.tol}};
  }
  std::vector<SimilarityRow> rows;
  std::uint64_t block = 0;
  auto add = [&](const std::string& scope, const std::vector<LabelledGraph>& items) {
    for (const auto& name : a.measures) {
      const auto measure = name == "jaccard" ? SimilarityMeasure::jaccard : SimilarityMeasure::cosine;
      auto opts = significance;
      if (opts) opts->seed = derive_seed(a.seed, block);
      ++block;
      rows.push_back({scope, similarity_matrix(items, measure, mode, opts)});
    }
  };
  if (a.across == "periods") {
    if (periods.size() < 2) throw precondition_error("similarity across periods needs at least two periods");
    for (const auto& name : selected_layers(c, periods.front(), false)) {
      std::vector<LabelledGraph> items;
      for (const auto& m : periods) {
        if (name != total_layer && !m.has_layer(name)) throw precondition_error("layer '" + name + "' missing in period " + m.period());
        items.push_back({m.period(), layer_graph(m, name)});
      }
      add(name, items);
    }
  } else {
    for (const auto& m : periods) {
      std::vector<LabelledGraph> items;
      for (const auto& name : selected_layers(c, m, false)) items.push_back({name, layer_graph(m, name)});
      add(m.period(), items);
    }
  }
  out.emit(similarity_table(rows), format_from_string(c.format), dir / "similarity", CsvStyle{a.display});
}

// ---- fit -------------------------------------------------------------------

void run_fit(const Common& c, const std::string& model, double tol, Outputs& out) {
  auto periods = load(c);
  const auto dir = prepare_out(c);
  SolverOptions solver{tol};
  for (const auto& m : periods)
    for (const auto& name : selected_layers(c, m, false)) {
      auto g = strip_self_loops(layer_graph(m, name)).graph;
      const auto tag = file_tag(m.period(), name);
      if (model == "dbcm") {
        auto fit = fit_dbcm(g, solver);
        out.write(dir / ("fit_dbcm_" + tag + ".json"), dbcm_json(fit));
        if (c.format == "csv") out.emit(dbcm_table(fit, g), Format::csv, dir / ("fit_dbcm_" + tag));
      } else {
        auto fit = fit_dwcm(g, solver);
        out.write(dir / ("fit_dwcm_" + tag + ".json"), dwcm_json(fit));
        if (c.format == "csv") out.emit(dwcm_table(fit, g), Format::csv, dir / ("fit_dwcm_" + tag));
      }
    }
}

// ---- ensemble --------------------------------------------------------------

std::vector<std::string> default_metrics(NullModel model) {
  if (model == NullModel::dwcm)
    return {"strength_reciprocity", "assortativity_in_strength", "assortativity_out_strength"};
  return {"largest_weak", "largest_strong", "reciprocated_links", "triangles", "assortativity_in", "assortativity_out"};
}

void run_ensemble(const Common& c, const std::string& null, std::size_t samples, std::uint64_t seed, double tol,
                  std::vector<std::string> metric_names, Outputs& out) {
  if (samples < 100)
    throw precondition_error("ensemble statistics need at least 100 samples (got --samples " + std::to_string(samples) +
                             ")");
  const auto model = null_model_from_string(null);
  if (metric_names.empty()) metric_names = default_metrics(model);
  const auto metrics = ensemble_metrics(metric_names);
  auto periods = load(c);
  const auto dir = prepare_out(c);
  std::vector<EnsembleRow> rows;
  std::uint64_t index = 0;
  for (const auto& m : periods)
    for (const auto& name : selected_layers(c, m, false)) {
      auto g = strip_self_loops(layer_graph(m, name)).graph;
      auto generator = NullGenerator::fit(g, model, SolverOptions{tol});
      rows.push_back({{m.period(), name}, to_string(model),
                      ensemble_stats(g, generator, metrics, samples, derive_seed(seed, index++))});
    }
  out.emit(ensemble_table(rows), format_from_string(c.format), dir / "ensemble");
}

// ---- motifs ----------------------------------------------------------------

void run_motifs(const Common& c, const std::vector<std::string>& nulls, std::size_t samples, std::uint64_t seed,
                Outputs& out) {
  if (samples < 100)
    throw precondition_error("motif z-scores need at least 100 samples (got --samples " + std::to_string(samples) + ")");
  std::vector<NullModel> models;
  for (const auto& n : nulls) {
    auto model = null_model_from_string(n);
    if (model != NullModel::degree_switching && model != NullModel::reciprocal_switching)
      throw precondition_error("motif nulls are degree or reciprocal switching, not '" + n + "'");
    models.push_back(model);
  }
  auto periods = load(c);
  const auto dir = prepare_out(c);
  std::vector<MotifRow> rows;
  std::uint64_t index = 0;
  for (const auto& m : periods)
    for (const auto& name : selected_layers(c, m, false)) {
      auto g = layer_graph(m, name);
      for (auto model : models) {
        const auto mode = model == NullModel::degree_switching ? SwitchMode::degree : SwitchMode::reciprocal;
        rows.push_back({{m.period(), name}, to_string(model), motif_zscores(g, mode, samples, derive_seed(seed, index++))});
      }
    }
  out.emit(motif_table(rows), format_from_string(c.format), dir / "motifs");
}

// ---- synth -----------------------------------------------------------------

SynthConfig parse_synth_config(const std::string& path) {
  auto j = nlohmann::json::parse(read_file(path));
  SynthConfig config = default_synth_config(j.value("n_nodes", std::size_t{500}), j.value("seed", std::uint64_t{0}));
  config.overlap = j.value("overlap", config.overlap);
  config.weight_scale = j.value("weight_scale", config.weight_scale);
  config.weight_noise = j.value("weight_noise", config.weight_noise);
  if (j.contains("layers")) {
    config.layers.clear();
    for (const auto& l : j.at("layers")) {
      SynthLayerConfig lc;
      lc.name = l.at("name").get<std::string>();
      lc.density = l.value("density", lc.density);
      lc.exponent = l.value("exponent", lc.exponent);
      lc.reciprocity = l.value("reciprocity", lc.reciprocity);
      lc.participation = l.value("participation", lc.participation);
      config.layers.push_back(lc);
    }
  }
  return config;
}

struct SynthArgs {
  std::string config;
  std::string out = "synthetic.csv";
  std::size_t nodes = 500;
  std::uint64_t seed = 0;
  std::optional<double> overlap;
  std::vector<std::string> periods = {"2012"};
  std::string groups_out;
  std::size_t group_size = 0;
};

void run_synth(const SynthArgs& a, bool seed_given, bool nodes_given, Outputs& out) {
  SynthConfig base = a.config.empty() ? default_synth_config(a.nodes, a.seed) : parse_synth_config(a.config);
  if (seed_given) base.seed = a.seed;
  if (nodes_given) base.n_nodes = a.nodes;
  if (a.overlap) base.overlap = *a.overlap;
  std::vector<Multiplex> periods;
  for (std::size_t p = 0; p < a.periods.size(); ++p) {
    auto config = base;
    config.period = a.periods[p];
    config.seed = derive_seed(base.seed, p);
    periods.push_back(generate(config));
  }
  const fs::path path(a.out);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  out.edge_list(path, periods);
  if (!a.groups_out.empty()) {
    if (a.group_size == 0) throw precondition_error("--groups-out needs --group-size > 0");
    std::ostringstream text;
    text << "bank,group\n";
    const auto& names = periods.front().universe()->names();
    for (std::size_t i = 0; i < names.size(); ++i) text << names[i] << ",G" << (i / a.group_size) << '\n';
    out.write(a.groups_out, text.str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiplex directed-weighted network analysis"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  Common common;
  std::string consolidated;
  bool display = false, plots = true;
  SimilarityArgs sim;
  std::string fit_null = "dbcm";
  double tol = 1e-8;
  std::string null = "dbcm";
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  std::vector<std::string> metric_names;
  std::vector<std::string> motif_nulls = {"degree", "reciprocal"};
  SynthArgs synth;

  auto* ingest = app.add_subcommand("ingest", "Validate an edge list, consolidate groups, summarize volumes");
  add_input_options(ingest, common, false);
  ingest->add_option("--consolidated", consolidated, "Also write the consolidated edge list here");

  auto* metrics = app.add_subcommand("metrics", "Per-layer network statistics plus CCDF and knn plot data");
  add_input_options(metrics, common);
  metrics->add_flag("--display", display, "Percent formatting in CSV output");
  metrics->add_flag("!--no-plots", plots, "Skip CCDF and knn files");

  auto* similarity = app.add_subcommand("similarity", "Jaccard and cosine similarity matrices");
  add_input_options(similarity, common);
  similarity->add_option("--across", sim.across, "Compare each layer across periods, or layers within a period")
      ->check(CLI::IsMember({"periods", "layers"}))
      ->capture_default_str();
  similarity->add_option("--mode", sim.mode, "Node alignment")
      ->check(CLI::IsMember({"union", "intersection"}))
      ->capture_default_str();
  similarity->add_option("--measure", sim.measures, "jaccard, cosine")
      ->delimiter(',')
      ->check(CLI::IsMember({"jaccard", "cosine"}));
  similarity->add_option("--samples", sim.samples, "Null samples for p-values (0 = none, else >= 100)")
      ->capture_default_str();
  similarity->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
  similarity->add_option("--null", sim.null, "dbcm or density")
      ->check(CLI::IsMember({"dbcm", "density"}))
      ->capture_default_str();
  similarity->add_option("--tol", sim.tol, "Solver tolerance")->capture_default_str();
  similarity->add_flag("--display", sim.display, "Percent formatting in CSV output");

  auto* fit = app.add_subcommand("fit", "Fit DBCM or DWCM multipliers per layer");
  add_input_options(fit, common);
  fit->add_option("--null", fit_null, "dbcm or dwcm")->check(CLI::IsMember({"dbcm", "dwcm"}))->capture_default_str();
  fit->add_option("--tol", tol, "Solver tolerance")->capture_default_str();

  auto* ensemble = app.add_subcommand("ensemble", "Compare observed metrics with a null-model ensemble");
  add_input_options(ensemble, common);
  ensemble->add_option("--null", null, "dbcm, dwcm, degree or reciprocal")->capture_default_str();
  ensemble->add_option("--samples", samples, "Ensemble size (>= 100)")->capture_default_str();
  ensemble->add_option("--seed", seed, "Master seed")->capture_default_str();
  ensemble->add_option("--tol", tol, "Solver tolerance")->capture_default_str();
  ensemble->add_option("--metrics", metric_names, "Metric names (comma separated; 'triads' for all 13)")
      ->delimiter(',');

  auto* motifs = app.add_subcommand("motifs", "Triad z-scores against switching nulls");
  add_input_options(motifs, common);
  motifs->add_option("--null", motif_nulls, "degree, reciprocal")->delimiter(',')->capture_default_str();
  motifs->add_option("--samples", samples, "Randomizations (>= 100)")->capture_default_str();
  motifs->add_option("--seed", seed, "Master seed")->capture_default_str();

  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic multiplex edge list");
  synth_cmd->add_option("--config", synth.config, "JSON configuration")->check(CLI::ExistingFile);
  synth_cmd->add_option("--out", synth.out, "Edge list path (.csv or .csv.gz)")->capture_default_str();
  auto* nodes_opt = synth_cmd->add_option("--nodes", synth.nodes, "Number of banks")->capture_default_str();
  auto* seed_opt = synth_cmd->add_option("--seed", synth.seed, "Master seed")->capture_default_str();
  synth_cmd->add_option("--overlap", synth.overlap, "Cross-layer overlap in [0, 1]");
  synth_cmd->add_option("--periods", synth.periods, "Period labels (comma separated)")->delimiter(',');
  synth_cmd->add_option("--groups-out", synth.groups_out, "Also write a bank,group map here");
  synth_cmd->add_option("--group-size", synth.group_size, "Consecutive banks per group");

  CLI11_PARSE(app, argc, argv);
  common.layers = split_list(common.layers);

  Outputs out;
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    if (command == "ingest")
      run_ingest(common, consolidated, out);
    else if (command == "metrics")
      run_metrics(common, display, plots, out);
    else if (command == "similarity")
      run_similarity(common, sim, out);
    else if (command == "fit")
      run_fit(common, fit_null, tol, out);
    else if (command == "ensemble")
      run_ensemble(common, null, samples, seed, tol, metric_names, out);
    else if (command == "motifs")
      run_motifs(common, motif_nulls, samples, seed, out);
    else if (command == "synth")
      run_synth(synth, seed_opt->count() > 0, nodes_opt->count() > 0, out);
  } catch (const std::exception& e) {
    out.discard();
    std::cerr << "mplex " << command << ": error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
