#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "anisolay/error.hpp"
#include "anisolay/graph.hpp"
#include "oracles.hpp"

using namespace anisolay;

TEST_CASE("edge list parsing") {
  SUBCASE("minimal path") {
    const Graph g = parse_graph("0 1\n1 2", GraphFormat::edge_list);
    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 2);
    CHECK(g.unit_weights());
    CHECK(g.has_edge(1, 0));
    CHECK_FALSE(g.has_edge(0, 2));
  }
  SUBCASE("comments, blank lines and weights") {
    const Graph g = parse_graph("# header\n\n0 1 2.5  # trailing\n  1\t2 0.5\n", GraphFormat::edge_list);
    CHECK(g.edge_count() == 2);
    CHECK(g.edges()[0].weight == 2.5);
    CHECK(g.edges()[1].weight == 0.5);
    CHECK_FALSE(g.unit_weights());
  }
  SUBCASE("self-loop") { CHECK_THROWS_AS(parse_graph("0 0", GraphFormat::edge_list), DataError); }
  SUBCASE("duplicate edge in either orientation") {
    CHECK_THROWS_WITH_AS(parse_graph("0 1\n1 0\n", GraphFormat::edge_list), doctest::Contains("line 2"), ParseError);
  }
  SUBCASE("nonpositive weight") {
    CHECK_THROWS_AS(parse_graph("0 1 0\n", GraphFormat::edge_list), DataError);
    CHECK_THROWS_AS(parse_graph("0 1 -2\n", GraphFormat::edge_list), DataError);
  }
  SUBCASE("errors carry line numbers") {
    try {
      parse_graph("0 1\n1 2\n2 x\n", GraphFormat::edge_list);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_graph("0 1 1 1\n", GraphFormat::edge_list), ParseError);
    CHECK_THROWS_AS(parse_graph("0 1 abc\n", GraphFormat::edge_list), ParseError);
    CHECK_THROWS_AS(parse_graph("-1 2\n", GraphFormat::edge_list), ParseError);
    CHECK_THROWS_AS(parse_graph("# nothing\n", GraphFormat::edge_list), ParseError);
  }
}

TEST_CASE("json parsing") {
  const Graph g = parse_graph(
      R"({"nodes":[{"id":0,"label":"a","group":"x"},{"id":1,"label":"b","group":"y"},{"id":2}],
          "edges":[{"u":0,"v":1,"w":2.0},{"u":1,"v":2}]})",
      GraphFormat::json);
  CHECK(g.node_count() == 3);
  CHECK(g.edge_count() == 2);
  CHECK(g.edges()[0].weight == 2.0);
  CHECK(g.edges()[1].weight == 1.0);
  REQUIRE(g.labels().size() == 3);
  CHECK(g.labels()[0] == "a");
  CHECK(g.groups()[1] == "y");

  CHECK_THROWS_AS(parse_graph("{", GraphFormat::json), ParseError);
  CHECK_THROWS_AS(parse_graph(R"({"nodes":[]})", GraphFormat::json), ParseError);
  CHECK_THROWS_AS(parse_graph(R"({"edges":[{"u":0,"v":0}]})", GraphFormat::json), DataError);
  CHECK_THROWS_AS(parse_graph(R"({"nodes":[{"id":0},{"id":1}],"edges":[{"u":0,"v":5}]})", GraphFormat::json),
                  DataError);
}

TEST_CASE("load_graph picks the format from the extension") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto txt = dir / "anisolay_test_graph.txt";
  const auto json = dir / "anisolay_test_graph.json";
  std::ofstream(txt) << "0 1\n1 2\n2 3\n";
  std::ofstream(json) << R"({"edges":[{"u":0,"v":1},{"u":1,"v":2}]})";
  CHECK(load_graph(txt).edge_count() == 3);
  CHECK(load_graph(json).edge_count() == 2);
  std::filesystem::remove(txt);
  std::filesystem::remove(json);
  CHECK_THROWS_AS(load_graph(dir / "anisolay_missing_graph.txt"), DataError);
}

TEST_CASE("karate club") {
  const Graph g = karate_club();
  CHECK(g.node_count() == 34);
  CHECK(g.edge_count() == 78);
  CHECK(g.unit_weights());
  REQUIRE(g.groups().size() == 34);
  CHECK(g.groups()[0] == "instructor");
  CHECK(g.groups()[33] == "administrator");
  CHECK(load_builtin("karate").edge_count() == 78);
  CHECK_THROWS_AS(load_builtin("nope"), DataError);
}

TEST_CASE("edge lengths") {
  Graph g(3);
  g.add_edge(0, 1, 4.0);
  g.add_edge(1, 2, 1.0);
  const Graph inv = edge_lengths(g, LengthMode::inverse);
  CHECK(inv.edges()[0].weight == 0.25);
  CHECK(inv.edges()[1].weight == 1.0);
  const Graph direct = edge_lengths(g, LengthMode::direct);
  CHECK(direct.edges()[0].weight == 4.0);
  CHECK(direct.edges()[1].weight == 1.0);
}

TEST_CASE("shortest paths") {
  SUBCASE("path composition") {
    const DistanceMatrix d = shortest_paths(parse_graph("0 1\n1 2", GraphFormat::edge_list));
    CHECK(d(0, 2) == 2.0);
    CHECK(d(2, 0) == 2.0);
    CHECK(d(1, 1) == 0.0);
  }
  SUBCASE("single weighted edge") {
    Graph g(2);
    g.add_edge(0, 1, 3.0);
    CHECK(shortest_paths(g)(0, 1) == 3.0);
  }
  SUBCASE("disconnected input names an unreachable pair") {
    const Graph g = parse_graph("0 1\n2 3\n", GraphFormat::edge_list);
    CHECK_THROWS_WITH_AS(shortest_paths(g), doctest::Contains("unreachable pair"), DataError);
    CHECK_THROWS_AS(betweenness(g), DataError);
  }
  SUBCASE("matches exhaustive path enumeration") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      const std::size_t n = 3 + seed % 8;
      const Graph g = oracle::random_connected_graph(n, 0.3, seed, seed % 2 == 0);
      const DistanceMatrix d = shortest_paths(g);
      const auto ref = oracle::brute_force_distances(g);
      for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = 0; v < n; ++v) CHECK(d(u, v) == doctest::Approx(ref[u][v]).epsilon(1e-12));
      }
    }
  }
  SUBCASE("symmetry and triangle inequality up to n = 50") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const Graph g = oracle::random_connected_graph(50, 0.05, 100 + seed, false);
      const DistanceMatrix d = shortest_paths(g);
      bool ok = true;
      for (std::size_t u = 0; u < 50; ++u) {
        ok = ok && d(u, u) == 0.0;
        for (std::size_t v = 0; v < 50; ++v) {
          ok = ok && d(u, v) == d(v, u) && (u == v || d(u, v) > 0.0);
          for (std::size_t w = 0; w < 50; ++w) ok = ok && d(u, w) <= d(u, v) + d(v, w) + 1e-12;
        }
      }
      CHECK(ok);
    }
  }
}

TEST_CASE("betweenness") {
  SUBCASE("star") {
    const CentralityVector c = betweenness(parse_graph("0 1\n0 2\n0 3\n", GraphFormat::edge_list));
    CHECK(c.raw[0] == 3.0);
    CHECK(c.normalized[0] == 1.0);
    for (int leaf = 1; leaf <= 3; ++leaf) CHECK(c.normalized[leaf] == 0.0);
  }
  SUBCASE("path") {
    const CentralityVector c = betweenness(parse_graph("0 1\n1 2", GraphFormat::edge_list));
    CHECK(c.raw == std::vector<double>{0.0, 1.0, 0.0});
    CHECK(c.normalized == std::vector<double>{0.0, 1.0, 0.0});
  }
  SUBCASE("constant raw values normalize to one half") {
    const CentralityVector c = betweenness(parse_graph("0 1\n1 2\n2 3\n3 4\n4 0\n", GraphFormat::edge_list));
    for (double v : c.normalized) CHECK(v == 0.5);
    CHECK(normalize_centrality(std::vector<double>{2.0, 2.0}) == std::vector<double>{0.5, 0.5});
  }
  SUBCASE("split geodesics count fractionally") {
    // Square 0-1-2-3: the pair {0, 2} has two geodesics.
    const CentralityVector c = betweenness(parse_graph("0 1\n1 2\n2 3\n3 0\n", GraphFormat::edge_list));
    for (double v : c.raw) CHECK(v == doctest::Approx(0.5));
  }
  SUBCASE("karate club reference values") {
    const CentralityVector c = betweenness(karate_club());
    CHECK(c.raw[0] == doctest::Approx(231.0714285714286).epsilon(1e-12));
    CHECK(c.raw[33] == doctest::Approx(160.5515873015873).epsilon(1e-12));
    CHECK(c.raw[32] == doctest::Approx(76.69047619047619).epsilon(1e-12));
    CHECK(c.raw[2] == doctest::Approx(75.85079365079366).epsilon(1e-12));
    CHECK(c.raw[11] == 0.0);
    CHECK(c.normalized[0] == 1.0);
  }
  SUBCASE("matches exhaustive oracle") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      const std::size_t n = 3 + seed % 7;
      const Graph g = oracle::random_connected_graph(n, 0.35, 1000 + seed);
      const CentralityVector c = betweenness(g);
      const auto ref = oracle::brute_force_betweenness(g);
      for (std::size_t v = 0; v < n; ++v) CHECK(std::abs(c.raw[v] - ref[v]) < 1e-9);
    }
  }
  SUBCASE("invariant under uniform length scaling") {
    const Graph g = oracle::random_connected_graph(12, 0.3, 7, false);
    Graph scaled(g.node_count());
    for (const Edge& e : g.edges()) scaled.add_edge(e.u, e.v, 3.7 * e.weight);
    const auto a = betweenness(g).raw;
    const auto b = betweenness(scaled).raw;
    for (std::size_t v = 0; v < a.size(); ++v) CHECK(a[v] == doctest::Approx(b[v]).epsilon(1e-12));
  }
  SUBCASE("pendant nodes have zero betweenness") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      Graph g = oracle::random_connected_graph(10, 0.3, 50 + seed);
      Graph h(11);
      for (const Edge& e : g.edges()) h.add_edge(e.u, e.v, e.weight);
      h.add_edge(seed % 10, 10, 1.0);
      CHECK(betweenness(h).raw[10] == 0.0);
    }
  }
}

TEST_CASE("barabasi-albert generator") {
  SUBCASE("forced single edge") {
    const Graph g = generate_barabasi_albert(2, 1, 0);
    CHECK(g.node_count() == 2);
    CHECK(g.edge_count() == 1);
  }
  SUBCASE("m = 1 gives a tree") {
    const Graph g = generate_barabasi_albert(30, 1, 3);
    CHECK(g.edge_count() == 29);
    CHECK_NOTHROW(shortest_paths(g));
  }
  SUBCASE("m = 2 edge count and connectivity") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const Graph g = generate_barabasi_albert(30, 2, seed);
      CHECK(g.edge_count() == 57);
      CHECK_NOTHROW(shortest_paths(g));
    }
  }
  SUBCASE("deterministic per seed") {
    const Graph a = generate_barabasi_albert(40, 3, 11);
    const Graph b = generate_barabasi_albert(40, 3, 11);
    REQUIRE(a.edge_count() == b.edge_count());
    for (std::size_t i = 0; i < a.edge_count(); ++i) {
      CHECK(a.edges()[i].u == b.edges()[i].u);
      CHECK(a.edges()[i].v == b.edges()[i].v);
    }
  }
  SUBCASE("invalid parameters") {
    CHECK_THROWS_AS(generate_barabasi_albert(5, 5, 0), DataError);
    CHECK_THROWS_AS(generate_barabasi_albert(5, 0, 0), DataError);
  }
}
