#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "mplex/graph.hpp"

namespace mplex {

inline constexpr std::size_t triad_class_count = 13;

// Counts of the 13 weakly connected 3-node directed subgraph classes.
//
// Classes are indexed 0..12 by their canonical code, ascending. The code of a
// labelled triple (a, b, c) packs its six possible arcs as
//   bit0 a->b, bit1 b->a, bit2 a->c, bit3 c->a, bit4 b->c, bit5 c->b
// and the canonical code is the minimum over the six relabellings. The
// conventional (MAN) name of each class is available from triad_name().
struct TriadCensus {
  std::array<std::uint64_t, triad_class_count> counts{};

  std::uint64_t total() const noexcept;
  bool operator==(const TriadCensus&) const = default;
};

// Canonical code -> class index for every 6-bit code; nullopt for triples
// that are not weakly connected.
std::optional<std::size_t> triad_class_of_code(std::uint8_t code);
std::uint8_t canonical_triad_code(std::uint8_t code);
std::uint8_t triad_class_code(std::size_t class_index);
std::string_view triad_name(std::size_t class_index);
// Number of mutual dyads in the class (0..3).
int triad_mutual_dyads(std::size_t class_index);

// Census of all weakly connected induced triples; self-loops ignored.
TriadCensus triad_census(const Digraph& g);

}  // namespace mplex
