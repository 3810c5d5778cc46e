#include "mplex/triads.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "mplex/error.hpp"

namespace mplex {
namespace {

constexpr int arc_bit(int from, int to) {
  // (0,1)->0 (1,0)->1 (0,2)->2 (2,0)->3 (1,2)->4 (2,1)->5
  if (from == 0 && to == 1) return 0;
  if (from == 1 && to == 0) return 1;
  if (from == 0 && to == 2) return 2;
  if (from == 2 && to == 0) return 3;
  if (from == 1 && to == 2) return 4;
  return 5;
}

constexpr std::array<std::pair<int, int>, 6> arcs = {{{0, 1}, {1, 0}, {0, 2}, {2, 0}, {1, 2}, {2, 1}}};

std::uint8_t relabel(std::uint8_t code, const std::array<int, 3>& perm) {
  std::uint8_t out = 0;
  for (int b = 0; b < 6; ++b)
    if (code & (1u << b)) out |= static_cast<std::uint8_t>(1u << arc_bit(perm[arcs[b].first], perm[arcs[b].second]));
  return out;
}

bool connected(std::uint8_t code) {
  const bool ab = code & 0b000011, ac = code & 0b001100, bc = code & 0b110000;
  return (ab + ac + bc) >= 2;
}

std::uint8_t code_of(std::initializer_list<std::pair<int, int>> edges) {
  std::uint8_t code = 0;
  for (auto [from, to] : edges) code |= static_cast<std::uint8_t>(1u << arc_bit(from, to));
  return code;
}

struct Tables {
  std::array<std::uint8_t, 64> canonical{};
  std::array<int, 64> class_of{};
  std::array<std::uint8_t, triad_class_count> class_code{};
  std::array<std::string, triad_class_count> name{};
  std::array<int, triad_class_count> mutual{};

  Tables() {
    std::array<int, 3> perm = {0, 1, 2};
    canonical.fill(0xFF);
    do {
      for (int c = 0; c < 64; ++c)
        canonical[c] = std::min<std::uint8_t>(canonical[c], relabel(static_cast<std::uint8_t>(c), perm));
    } while (std::next_permutation(perm.begin(), perm.end()));

    std::vector<std::uint8_t> classes;
    for (int c = 0; c < 64; ++c)
      if (connected(static_cast<std::uint8_t>(c))) classes.push_back(canonical[c]);
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    if (classes.size() != triad_class_count) throw error("triad class table is inconsistent");
    std::copy(classes.begin(), classes.end(), class_code.begin());
    for (int c = 0; c < 64; ++c) {
      class_of[c] = -1;
      if (!connected(static_cast<std::uint8_t>(c))) continue;
      auto it = std::lower_bound(classes.begin(), classes.end(), canonical[c]);
      class_of[c] = static_cast<int>(it - classes.begin());
    }

    // Holland-Leinhardt names on nodes A=0, B=1, C=2.
    const std::pair<const char*, std::uint8_t> named[] = {
        {"021D", code_of({{1, 0}, {1, 2}})},
        {"021U", code_of({{0, 1}, {2, 1}})},
        {"021C", code_of({{0, 1}, {1, 2}})},
        {"111D", code_of({{0, 1}, {1, 0}, {2, 1}})},
        {"111U", code_of({{0, 1}, {1, 0}, {1, 2}})},
        {"030T", code_of({{0, 1}, {2, 1}, {0, 2}})},
        {"030C", code_of({{0, 1}, {1, 2}, {2, 0}})},
        {"201", code_of({{0, 1}, {1, 0}, {1, 2}, {2, 1}})},
        {"120D", code_of({{1, 0}, {1, 2}, {0, 2}, {2, 0}})},
        {"120U", code_of({{0, 1}, {2, 1}, {0, 2}, {2, 0}})},
        {"120C", code_of({{0, 1}, {1, 2}, {0, 2}, {2, 0}})},
        {"210", code_of({{0, 1}, {1, 2}, {2, 1}, {0, 2}, {2, 0}})},
        {"300", code_of({{0, 1}, {1, 0}, {0, 2}, {2, 0}, {1, 2}, {2, 1}})},
    };
    for (const auto& [label, code] : named) {
      auto k = static_cast<std::size_t>(class_of[code]);
      if (!name[k].empty()) throw error("triad names collide");
      name[k] = label;
      mutual[k] = label[0] - '0';
    }
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

}  // namespace

std::uint64_t TriadCensus::total() const noexcept {
  std::uint64_t t = 0;
  for (auto c : counts) t += c;
  return t;
}

std::optional<std::size_t> triad_class_of_code(std::uint8_t code) {
  int k = tables().class_of.at(code & 63u);
  if (k < 0) return std::nullopt;
  return static_cast<std::size_t>(k);
}

std::uint8_t canonical_triad_code(std::uint8_t code) { return tables().canonical.at(code & 63u); }
std::uint8_t triad_class_code(std::size_t class_index) { return tables().class_code.at(class_index); }
std::string_view triad_name(std::size_t class_index) { return tables().name.at(class_index); }
int triad_mutual_dyads(std::size_t class_index) { return tables().mutual.at(class_index); }

TriadCensus triad_census(const Digraph& g) {
  const auto& t = tables();
  auto s = symmetrize(g);
  TriadCensus census;
  auto code_for = [&](NodeIndex a, NodeIndex b, NodeIndex c) {
    std::uint8_t code = 0;
    if (g.has_edge(a, b)) code |= 1u << 0;
    if (g.has_edge(b, a)) code |= 1u << 1;
    if (g.has_edge(a, c)) code |= 1u << 2;
    if (g.has_edge(c, a)) code |= 1u << 3;
    if (g.has_edge(b, c)) code |= 1u << 4;
    if (g.has_edge(c, b)) code |= 1u << 5;
    return code;
  };
  std::vector<NodeIndex> merged;
  // Batagelj-Mrvar enumeration restricted to connected triads: every triple
  // is visited once, from its lowest-indexed connected pair (v, u).
  for (NodeIndex v = 0; v < s.node_count(); ++v) {
    auto nv = s.neighbors(v);
    for (NodeIndex u : nv) {
      if (u <= v) continue;
      auto nu = s.neighbors(u);
      merged.clear();
      std::set_union(nv.begin(), nv.end(), nu.begin(), nu.end(), std::back_inserter(merged));
      for (NodeIndex w : merged) {
        if (w == u || w == v) continue;
        if (u < w || (v < w && w < u && !s.has_edge(v, w))) {
          auto k = t.class_of[code_for(v, u, w)];
          ++census.counts[static_cast<std::size_t>(k)];
        }
      }
    }
  }
  return census;
}

}  // namespace mplex
