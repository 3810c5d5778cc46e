#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "mplex/error.hpp"
#include "mplex/graph.hpp"
#include "mplex/io.hpp"
#include "oracle.hpp"

using namespace mplex;
using testing::arcs;

namespace {

std::vector<Multiplex> parse(const std::string& text, const EdgeListOptions& options = {}) {
  std::istringstream in(text);
  return read_edge_list(in, options);
}

double weight(const Digraph& g, const std::string& a, const std::string& b) {
  return g.weight(g.universe()->index(a), g.universe()->index(b));
}

}  // namespace

TEST_SUITE("graph") {
  TEST_CASE("single row parses into one period and one edge") {
    auto periods = parse("period,layer,lender,borrower,weight\n2012,U_OVN,A,B,10.5\n");
    REQUIRE(periods.size() == 1);
    CHECK(periods[0].period() == "2012");
    const auto& g = periods[0].layer("U_OVN");
    CHECK(g.edge_count() == 1);
    CHECK(weight(g, "A", "B") == 10.5);
  }

  TEST_CASE("duplicate rows sum") {
    auto periods = parse("period,layer,lender,borrower,weight\n2012,U_OVN,A,B,1.0\n2012,U_OVN,A,B,2.0\n");
    const auto& g = periods[0].layer("U_OVN");
    CHECK(g.edge_count() == 1);
    CHECK(weight(g, "A", "B") == 3.0);
  }

  TEST_CASE("negative weight is rejected with its line") {
    try {
      parse("period,layer,lender,borrower,weight\n2012,U_OVN,A,B,1\n2012,U_OVN,A,C,-1\n");
      FAIL("no error");
    } catch (const parse_error& e) {
      CHECK(e.line() == 3);
      CHECK(std::string(e.what()).find("negative weight at line 3") != std::string::npos);
    }
  }

  TEST_CASE("malformed rows and unknown layers") {
    CHECK_THROWS_AS(parse("period,layer,lender,borrower,weight\n2012,U_OVN,A,B\n"), parse_error);
    CHECK_THROWS_AS(parse("period,layer,lender,borrower,weight\n2012,U_OVN,A,B,abc\n"), parse_error);
    CHECK_THROWS_AS(parse("lender,borrower\nA,B\n"), parse_error);
    EdgeListOptions options{default_layer_vocabulary};
    CHECK_THROWS_AS(parse("period,layer,lender,borrower,weight\n2012,X,A,B,1\n", options), parse_error);
    CHECK_NOTHROW(parse("period,layer,lender,borrower,weight\n2012,X,A,B,1\n"));
  }

  TEST_CASE("vocabulary fills absent layers and columns may be reordered") {
    EdgeListOptions options{default_layer_vocabulary};
    auto periods = parse("weight,borrower,lender,layer,period\n4,B,A,S_ST,2010\n", options);
    CHECK(periods[0].layer_names() == default_layer_vocabulary);
    CHECK(periods[0].layer("U_OVN").edge_count() == 0);
    CHECK(weight(periods[0].layer("S_ST"), "A", "B") == 4.0);
  }

  TEST_CASE("node universe is the union over layers of one period") {
    auto periods = parse(
        "period,layer,lender,borrower,weight\n2012,U_OVN,A,B,1\n2012,U_ST,C,D,1\n2013,U_OVN,A,E,1\n");
    REQUIRE(periods.size() == 2);
    CHECK(periods[0].universe()->size() == 4);
    CHECK(periods[1].universe()->size() == 2);
    CHECK(active_node_count(periods[0].layer("U_OVN")) == 2);
  }

  TEST_CASE("csv round trip is edge identical") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1000.0);
    auto universe = testing::names({"a", "b", "c", "d", "e"});
    std::vector<Multiplex> periods;
    for (int p = 0; p < 3; ++p) {
      std::vector<Layer> layers;
      for (const auto& name : {"U_OVN", "S_LT"}) {
        std::vector<Edge> edges;
        for (NodeIndex i = 0; i < 5; ++i)
          for (NodeIndex j = 0; j < 5; ++j)
            if (u(rng) < 300.0) edges.push_back({i, j, u(rng) / 7.0});
        layers.push_back({name, Digraph(universe, edges)});
      }
      periods.emplace_back(std::to_string(2008 + p), universe, std::move(layers));
    }
    std::ostringstream out;
    write_edge_list(out, periods);
    auto back = parse(out.str());
    REQUIRE(back.size() == periods.size());
    for (std::size_t p = 0; p < periods.size(); ++p)
      for (const auto& layer : periods[p].layers()) {
        const auto& g = back[p].layer(layer.name);
        std::size_t seen = 0;
        for (const auto& e : layer.graph.edges()) {
          auto a = layer.graph.universe()->name(e.source), b = layer.graph.universe()->name(e.target);
          CHECK(weight(g, a, b) == e.weight);
          ++seen;
        }
        CHECK(g.edge_count() == seen);
      }
  }

  TEST_CASE("format_number round trips") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456789.125, 0.0})
      CHECK(std::stod(format_number(v)) == v);
    CHECK(format_number(10.5) == "10.5");
  }

  TEST_CASE("consolidate turns intra-group exposures into self-loops") {
    auto universe = testing::names({"a1", "a2", "b1"});
    Multiplex m("2012", universe, {{"L", Digraph(universe, {{0, 1, 5.0}, {0, 2, 2.0}, {1, 2, 3.0}})}});
    GroupMap groups({{"a1", "A"}, {"a2", "A"}, {"b1", "B"}});
    auto c = consolidate(m, groups);
    const auto& g = c.layer("L");
    CHECK(weight(g, "A", "A") == 5.0);
    CHECK(weight(g, "A", "B") == 5.0);
    CHECK(g.self_loop_count() == 1);
    CHECK(g.total_weight() == m.layer("L").total_weight());

    GroupMap missing({{"a1", "A"}, {"a2", "A"}});
    CHECK_THROWS_WITH_AS(consolidate(m, missing), doctest::Contains("b1"), precondition_error);
  }

  TEST_CASE("identity group map gives an isomorphic graph") {
    std::mt19937_64 rng(2);
    auto d = oracle::random_dense(6, 0.4, true, true, rng);
    auto universe = testing::names({"u", "v", "w", "x", "y", "z"});
    std::vector<Edge> edges(d.digraph().edges());
    Multiplex m("p", universe, {{"L", Digraph(universe, edges)}});
    std::map<std::string, std::string> identity;
    for (const auto& n : universe->names()) identity[n] = "G" + n;
    auto c = consolidate(m, GroupMap(identity));
    const auto& g = c.layer("L");
    CHECK(g.edge_count() == m.layer("L").edge_count());
    for (const auto& e : m.layer("L").edges())
      CHECK(weight(g, "G" + universe->name(e.source), "G" + universe->name(e.target)) == e.weight);
  }

  TEST_CASE("consolidation preserves total weight on random multiplexes") {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 50; ++rep) {
      auto d = oracle::random_dense(6, 0.5, true, true, rng);
      auto universe = testing::names({"a", "b", "c", "d", "e", "f"});
      Multiplex m("p", universe, {{"L", Digraph(universe, d.digraph().edges())}});
      std::map<std::string, std::string> map;
      for (const auto& n : universe->names()) map[n] = std::to_string(rng() % 3);
      CHECK(consolidate(m, GroupMap(map)).layer("L").total_weight() == doctest::Approx(m.layer("L").total_weight()));
    }
  }

  TEST_CASE("aggregate_layers sums entrywise") {
    auto universe = testing::names({"A", "B", "C"});
    Multiplex m("p", universe,
                {{"l1", Digraph(universe, {{0, 1, 1.0}})}, {"l2", Digraph(universe, {{0, 1, 2.0}, {1, 2, 1.0}})}});
    CHECK(aggregate_layers(m, {"l1"}) == m.layer("l1"));
    auto total = aggregate_all_layers(m);
    CHECK(weight(total, "A", "B") == 3.0);
    CHECK(total.edge_count() == 2);
    CHECK_THROWS_AS(aggregate_layers(m, {"nope"}), precondition_error);

    Multiplex disjoint("p", testing::names({"a", "b", "c", "d"}), {});
    auto u4 = disjoint.universe();
    Multiplex d2("p", u4,
                 {{"x", Digraph(u4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}})},
                  {"y", Digraph(u4, {{1, 0, 1}, {2, 1, 1}, {3, 2, 1}, {0, 3, 1}})}});
    CHECK(aggregate_all_layers(d2).edge_count() == 7);
  }

  TEST_CASE("aggregate matches dense oracle on random multiplexes") {
    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 50; ++rep) {
      auto universe = NodeUniverse::anonymous(5);
      std::vector<oracle::Dense> mats;
      std::vector<Layer> layers;
      for (int l = 0; l < 3; ++l) {
        mats.push_back(oracle::random_dense(5, 0.4, true, true, rng));
        layers.push_back({"L" + std::to_string(l), Digraph(universe, mats.back().digraph().edges())});
      }
      auto total = aggregate_all_layers(Multiplex("p", universe, layers));
      for (NodeIndex i = 0; i < 5; ++i)
        for (NodeIndex j = 0; j < 5; ++j)
          CHECK(total.weight(i, j) == mats[0](i, j) + mats[1](i, j) + mats[2](i, j));
    }
  }

  TEST_CASE("project_binary") {
    auto g = testing::graph(3, {{0, 1, 10.5}, {1, 2, 0.25}, {2, 0, 3.0}});
    auto b = project_binary(g);
    CHECK(b.edge_count() == 3);
    CHECK(b.is_binary());
    CHECK(b.weight(0, 1) == 1.0);
    CHECK(project_binary(Digraph(4, {})).edge_count() == 0);
  }

  TEST_CASE("symmetrize") {
    auto s = symmetrize(arcs(3, {{0, 1}, {1, 0}, {1, 2}}));
    CHECK(s.edge_count() == 2);
    CHECK(s.has_edge(0, 1));
    CHECK(s.has_edge(2, 1));
    CHECK_FALSE(s.has_edge(0, 2));
    CHECK(symmetrize(arcs(4, {{0, 1}, {1, 0}, {2, 3}, {3, 2}})).edge_count() == 2);
    CHECK(symmetrize(Digraph(3, {})).edge_count() == 0);
    CHECK(symmetrize(arcs(2, {{0, 0}})).edge_count() == 0);
  }

  TEST_CASE("symmetrize matches pairwise enumeration") {
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 20; ++rep) {
      const std::size_t n = 5 + rng() % 46;
      auto d = oracle::random_dense(n, 0.08, true, false, rng);
      auto s = symmetrize(d.digraph());
      std::size_t pairs = 0;
      for (NodeIndex i = 0; i < n; ++i)
        for (NodeIndex j = 0; j < n; ++j) {
          const bool expect = i != j && d.a(i, j) + d.a(j, i) >= 1;
          CHECK(s.has_edge(i, j) == expect);
          pairs += expect && i < j;
        }
      CHECK(s.edge_count() == pairs);
    }
  }

  TEST_CASE("strip_self_loops") {
    auto r = strip_self_loops(testing::graph(2, {{0, 0, 5.0}, {0, 1, 1.0}}));
    CHECK(r.removed_count == 1);
    CHECK(r.removed_weight == 5.0);
    CHECK(r.graph.edge_count() == 1);
    auto plain = arcs(3, {{0, 1}, {1, 2}});
    CHECK(strip_self_loops(plain).graph == plain);
    CHECK(strip_self_loops(arcs(2, {{0, 0}, {1, 1}})).graph.edge_count() == 0);
  }

  TEST_CASE("graph invariants") {
    CHECK_THROWS_AS(testing::graph(2, {{0, 2, 1.0}}), precondition_error);
    CHECK_THROWS_AS(testing::graph(2, {{0, 1, -1.0}}), precondition_error);
    auto g = testing::graph(2, {{0, 1, 0.0}, {1, 0, 2.0}, {1, 0, 1.0}});
    CHECK(g.edge_count() == 1);
    CHECK(g.weight(1, 0) == 3.0);
    CHECK_THROWS_AS(NodeUniverse({"a", "a"}), precondition_error);
    CHECK_THROWS_AS(NodeUniverse({""}), precondition_error);
  }

  TEST_CASE("active nodes ignore self-loops") {
    auto g = testing::graph(4, {{0, 0, 1.0}, {1, 2, 1.0}});
    CHECK(active_node_count(g) == 2);
    CHECK(active_nodes(g) == std::vector<bool>{false, true, true, false});
  }

  TEST_CASE("gzip input is inflated") {
    auto universe = testing::names({"A", "B"});
    std::vector<Multiplex> periods{Multiplex("2012", universe, {{"U_OVN", Digraph(universe, {{0, 1, 1.5}})}})};
    auto path = std::filesystem::temp_directory_path() / "mplex_test_roundtrip.csv.gz";
    save_edge_list(path, periods);
    std::ifstream file(path, std::ios::binary);
    unsigned char magic[2] = {};
    file.read(reinterpret_cast<char*>(magic), 2);
    CHECK(magic[0] == 0x1f);
    CHECK(magic[1] == 0x8b);
    CHECK(read_file(path).find("U_OVN") != std::string::npos);
    auto back = load_edge_list(path);
    CHECK(weight(back[0].layer("U_OVN"), "A", "B") == 1.5);
    std::filesystem::remove(path);
  }
}
