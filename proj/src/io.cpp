#include "mplex/io.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mplex/error.hpp"

namespace mplex {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::optional<double> parse_decimal(std::string_view text) {
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value, std::chars_format::general);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

struct PeriodBuilder {
  std::set<std::string> nodes;
  // layer -> (lender, borrower) -> weight
  std::map<std::string, std::map<std::pair<std::string, std::string>, double>> layers;
};

}  // namespace

std::string format_number(double value) {
  std::array<char, 64> buffer{};
  auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  if (ec != std::errc()) throw error("number formatting failed");
  return std::string(buffer.data(), ptr);
}

std::vector<Multiplex> read_edge_list(std::istream& in, const EdgeListOptions& options) {
  static const std::array<std::string_view, 5> required = {"period", "layer", "lender", "borrower", "weight"};
  std::string line;
  std::size_t line_no = 0;
  std::array<std::size_t, 5> column{};
  std::size_t width = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  if (line_no == 0 || trim(line).empty()) throw parse_error(line_no == 0 ? 1 : line_no, "missing header");
  {
    auto header = split_fields(line);
    if (!header.empty() && header[0].substr(0, 3) == "\xEF\xBB\xBF") header[0].remove_prefix(3);
    width = header.size();
    for (std::size_t c = 0; c < required.size(); ++c) {
      auto it = std::find(header.begin(), header.end(), required[c]);
      if (it == header.end()) throw parse_error(line_no, "header lacks column '" + std::string(required[c]) + "'");
      column[c] = static_cast<std::size_t>(it - header.begin());
    }
  }

  std::set<std::string> vocabulary;
  if (options.layer_vocabulary) vocabulary.insert(options.layer_vocabulary->begin(), options.layer_vocabulary->end());

  std::vector<std::string> period_order, layer_order;
  std::map<std::string, PeriodBuilder> periods;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_fields(line);
    if (fields.size() != width)
      throw parse_error(line_no, "expected " + std::to_string(width) + " fields, found " + std::to_string(fields.size()));
    std::string period(fields[column[0]]), layer(fields[column[1]]), lender(fields[column[2]]),
        borrower(fields[column[3]]);
    if (period.empty() || layer.empty() || lender.empty() || borrower.empty())
      throw parse_error(line_no, "empty identifier");
    auto weight = parse_decimal(fields[column[4]]);
    if (!weight || !std::isfinite(*weight)) throw parse_error(line_no, "malformed weight '" + std::string(fields[column[4]]) + "'");
    if (*weight < 0.0) throw parse_error(line_no, "negative weight at line " + std::to_string(line_no));
    if (options.layer_vocabulary && !vocabulary.contains(layer))
      throw parse_error(line_no, "unknown layer '" + layer + "'");

    auto [it, inserted] = periods.try_emplace(period);
    if (inserted) period_order.push_back(period);
    if (std::find(layer_order.begin(), layer_order.end(), layer) == layer_order.end()) layer_order.push_back(layer);
    auto& builder = it->second;
    builder.nodes.insert(lender);
    builder.nodes.insert(borrower);
    builder.layers[layer][{lender, borrower}] += *weight;
  }

  const auto& layer_names = options.layer_vocabulary ? *options.layer_vocabulary : layer_order;
  std::vector<Multiplex> result;
  for (const auto& period : period_order) {
    auto& builder = periods.at(period);
    auto universe = std::make_shared<const NodeUniverse>(
        std::vector<std::string>(builder.nodes.begin(), builder.nodes.end()));
    std::vector<Layer> layers;
    for (const auto& name : layer_names) {
      std::vector<Edge> edges;
      if (auto l = builder.layers.find(name); l != builder.layers.end()) {
        for (const auto& [pair, w] : l->second)
          edges.push_back({universe->index(pair.first), universe->index(pair.second), w});
      }
      layers.push_back({name, Digraph(universe, std::move(edges))});
    }
    result.emplace_back(period, universe, std::move(layers));
  }
  return result;
}

std::string read_file(const std::filesystem::path& path) {
  gzFile file = gzopen(path.c_str(), "rb");
  if (!file) throw precondition_error("cannot open '" + path.string() + "'");
  std::string content;
  std::array<char, 1 << 16> buffer{};
  int n = 0;
  while ((n = gzread(file, buffer.data(), static_cast<unsigned>(buffer.size()))) > 0) content.append(buffer.data(), static_cast<std::size_t>(n));
  int status = 0;
  const char* message = gzerror(file, &status);
  std::string detail = message ? message : "";
  gzclose(file);
  if (n < 0) throw error("read error in '" + path.string() + "': " + detail);
  return content;
}

std::vector<Multiplex> load_edge_list(const std::filesystem::path& path, const EdgeListOptions& options) {
  std::istringstream in(read_file(path));
  return read_edge_list(in, options);
}

void write_edge_list(std::ostream& out, const std::vector<Multiplex>& periods) {
  out << "period,layer,lender,borrower,weight\n";
  for (const auto& m : periods) {
    const auto& u = *m.universe();
    for (const auto& layer : m.layers())
      for (const auto& e : layer.graph.edges())
        out << m.period() << ',' << layer.name << ',' << u.name(e.source) << ',' << u.name(e.target) << ','
            << format_number(e.weight) << '\n';
  }
}

void save_edge_list(const std::filesystem::path& path, const std::vector<Multiplex>& periods) {
  std::ostringstream buffer;
  write_edge_list(buffer, periods);
  const std::string text = buffer.str();
  if (path.extension() == ".gz") {
    gzFile file = gzopen(path.c_str(), "wb");
    if (!file) throw precondition_error("cannot write '" + path.string() + "'");
    int written = text.empty() ? 0 : gzwrite(file, text.data(), static_cast<unsigned>(text.size()));
    gzclose(file);
    if (static_cast<std::size_t>(written) != text.size()) throw error("write error in '" + path.string() + "'");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw precondition_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw error("write error in '" + path.string() + "'");
}

GroupMap read_group_map(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t bank_col = 0, group_col = 1, width = 2;
  bool header_seen = false;
  std::map<std::string, std::string> entries;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_fields(line);
    if (!header_seen) {
      header_seen = true;
      auto bank = std::find(fields.begin(), fields.end(), "bank");
      auto group = std::find(fields.begin(), fields.end(), "group");
      if (bank == fields.end() || group == fields.end()) throw parse_error(line_no, "group map header must contain 'bank,group'");
      bank_col = static_cast<std::size_t>(bank - fields.begin());
      group_col = static_cast<std::size_t>(group - fields.begin());
      width = fields.size();
      continue;
    }
    if (fields.size() != width) throw parse_error(line_no, "expected " + std::to_string(width) + " fields");
    std::string bank(fields[bank_col]), group(fields[group_col]);
    if (bank.empty() || group.empty()) throw parse_error(line_no, "empty identifier");
    auto [it, inserted] = entries.emplace(bank, group);
    if (!inserted && it->second != group) throw parse_error(line_no, "bank '" + bank + "' mapped to two groups");
  }
  if (!header_seen) throw parse_error(1, "missing header");
  return GroupMap(std::move(entries));
}

GroupMap load_group_map(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  return read_group_map(in);
}

std::vector<std::string> load_layer_manifest(const std::filesystem::path& path) {
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw precondition_error("manifest '" + path.string() + "': " + e.what());
  }
  if (!manifest.contains("layers") || !manifest["layers"].is_array())
    throw precondition_error("manifest '" + path.string() + "' lacks a \"layers\" array");
  std::vector<std::string> layers;
  for (const auto& l : manifest["layers"]) {
    if (!l.is_string() || l.get<std::string>().empty()) throw precondition_error("layer names must be nonempty strings");
    if (std::find(layers.begin(), layers.end(), l.get<std::string>()) != layers.end())
      throw precondition_error("duplicate layer '" + l.get<std::string>() + "' in manifest");
    layers.push_back(l.get<std::string>());
  }
  return layers;
}

}  // namespace mplex
