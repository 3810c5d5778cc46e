#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mplex/graph.hpp"

namespace mplex {

// The five contract segments used for the Italian interbank multiplex.
inline const std::vector<std::string> default_layer_vocabulary = {"U_OVN", "U_ST", "U_LT", "S_ST", "S_LT"};

struct EdgeListOptions {
  // When set, rows naming other layers are rejected and every listed layer is
  // present (possibly empty) in each period, in this order.
  std::optional<std::vector<std::string>> layer_vocabulary;
};

// Parses `period,layer,lender,borrower,weight` CSV (header required, columns
// may appear in any order). Returns one multiplex per period in order of first
// appearance. Duplicate (layer, lender, borrower) rows within a period sum.
std::vector<Multiplex> read_edge_list(std::istream& in, const EdgeListOptions& options = {});
// Same, from a file; gzip-compressed files are detected and inflated.
std::vector<Multiplex> load_edge_list(const std::filesystem::path& path, const EdgeListOptions& options = {});

void write_edge_list(std::ostream& out, const std::vector<Multiplex>& periods);
void save_edge_list(const std::filesystem::path& path, const std::vector<Multiplex>& periods);

// `bank,group` CSV with header.
GroupMap read_group_map(std::istream& in);
GroupMap load_group_map(const std::filesystem::path& path);

// JSON manifest of the form {"layers": ["U_OVN", ...]}.
std::vector<std::string> load_layer_manifest(const std::filesystem::path& path);

// Shortest decimal text that parses back to exactly `value`.
std::string format_number(double value);

// Reads a whole file, inflating it when it carries a gzip header.
std::string read_file(const std::filesystem::path& path);

}  // namespace mplex
