// Graph loading, splitting, test-set construction, random walks, and
// direction-pair mining.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "greed/graph.hpp"

using namespace greed;

namespace {

// Self-cleaning scratch directory for file round-trip tests.
struct TempDir {
  std::filesystem::path path;

  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("greed_graph_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }

  static int& counter() {
    static int n = 0;
    return n;
  }
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::set<std::pair<NodeId, NodeId>> edge_set(const DirectedGraph& g) {
  auto es = g.edges();
  return {es.begin(), es.end()};
}

}  // namespace

TEST_CASE("graph_from_edges builds sorted dedup'd adjacency") {
  std::size_t loops = 0, dups = 0;
  auto g = graph_from_edges(5, {{3, 1}, {0, 2}, {0, 2}, {2, 2}, {1, 3}, {0, 1}},
                            &loops, &dups);
  CHECK(g.node_count() == 5);
  CHECK(g.edge_count() == 4);
  CHECK(loops == 1);
  CHECK(dups == 1);
  CHECK(g.out_adj[0] == std::vector<NodeId>{1, 2});
  CHECK(g.in_adj[2] == std::vector<NodeId>{0});
  CHECK(g.has_edge(3, 1));
  CHECK(g.has_edge(1, 3));  // reciprocal pair is two distinct directed edges
  CHECK_FALSE(g.has_edge(2, 0));
  CHECK_THROWS_AS(graph_from_edges(2, {{0, 5}}), std::invalid_argument);
}

TEST_CASE("load_edge_list remaps sparse ids and skips comments") {
  TempDir tmp;
  const auto path = tmp.file("raw.edges");
  write_text(path,
             "% konect-style header\n"
             "# another comment\n"
             "\n"
             "100 7\n"
             "7 100\n"
             "100 7\n"
             "42 42\n"
             "  100   42  \n");
  auto loaded = load_edge_list(path);

  // Internal ids are dense and assigned in sorted original-id order.
  REQUIRE(loaded.ids.original == std::vector<std::int64_t>{7, 42, 100});
  CHECK(loaded.ids.to_internal.at(7) == 0);
  CHECK(loaded.ids.to_internal.at(42) == 1);
  CHECK(loaded.ids.to_internal.at(100) == 2);

  CHECK(loaded.graph.node_count() == 3);
  CHECK(loaded.graph.edge_count() == 3);  // 100->7, 7->100, 100->42
  CHECK(loaded.graph.has_edge(2, 0));
  CHECK(loaded.graph.has_edge(0, 2));
  CHECK(loaded.graph.has_edge(2, 1));
  CHECK(loaded.stats.self_loops_dropped == 1);
  CHECK(loaded.stats.duplicate_edges_dropped == 1);
  CHECK(loaded.stats.lines_read == 8);
}

TEST_CASE("load_edge_list reports malformed lines with their number") {
  TempDir tmp;
  const auto path = tmp.file("bad.edges");

  SECTION("missing token") {
    write_text(path, "1 2\n3\n");
    CHECK_THROWS_WITH(load_edge_list(path),
                      Catch::Matchers::ContainsSubstring("line 2"));
  }
  SECTION("trailing junk") {
    write_text(path, "1 2 3\n");
    CHECK_THROWS_WITH(load_edge_list(path),
                      Catch::Matchers::ContainsSubstring("line 1"));
  }
  SECTION("non-numeric") {
    write_text(path, "1 2\n2 3\nfoo bar\n");
    CHECK_THROWS_WITH(load_edge_list(path),
                      Catch::Matchers::ContainsSubstring("line 3"));
  }
  SECTION("no usable edges") {
    write_text(path, "% nothing here\n");
    CHECK_THROWS_WITH(load_edge_list(path),
                      Catch::Matchers::ContainsSubstring("empty graph"));
  }
  SECTION("missing file") {
    CHECK_THROWS_WITH(load_edge_list(tmp.file("absent.edges")),
                      Catch::Matchers::ContainsSubstring("cannot open"));
  }
}

TEST_CASE("internal edge list round trip preserves isolated nodes") {
  TempDir tmp;
  // Node 3 is isolated: only the header keeps it alive across the round trip.
  auto g = graph_from_edges(4, {{0, 1}, {2, 0}});
  const auto path = tmp.file("train.edges");
  write_edge_list(path, g);
  auto back = read_internal_edge_list(path);
  CHECK(back.node_count() == 4);
  CHECK(edge_set(back) == edge_set(g));

  // Byte determinism: writing the same graph twice gives identical files.
  const auto path2 = tmp.file("train2.edges");
  write_edge_list(path2, g);
  CHECK(read_text(path) == read_text(path2));
}

TEST_CASE("id map round trip") {
  TempDir tmp;
  IdMap ids;
  ids.original = {-5, 0, 9000000000LL};
  for (NodeId i = 0; i < ids.original.size(); ++i)
    ids.to_internal.emplace(ids.original[i], i);
  const auto path = tmp.file("ids.txt");
  write_id_map(path, ids);
  auto back = read_id_map(path);
  CHECK(back.original == ids.original);
  CHECK(back.to_internal.at(9000000000LL) == 2);
}

TEST_CASE("pair file round trip and validation") {
  TempDir tmp;
  const auto path = tmp.file("pairs.txt");
  std::vector<LabeledPair> pairs{{0, 1, 1}, {1, 0, 0}, {2, 0, 1}};
  write_pairs(path, 3, pairs);
  auto pf = read_pairs(path);
  CHECK(pf.node_count == 3);
  CHECK(pf.pairs == pairs);

  SECTION("bad label rejected") {
    write_text(path, "# nodes 2\n0 1 7\n");
    CHECK_THROWS_WITH(read_pairs(path), Catch::Matchers::ContainsSubstring("label"));
  }
  SECTION("node out of range rejected") {
    write_text(path, "# nodes 2\n0 5 1\n");
    CHECK_THROWS(read_pairs(path));
  }
}

TEST_CASE("split_edges removes floor(frac*E) edges and partitions exactly") {
  Rng rng(derive_seed(7, "fixture"));
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId u = 0; u < 40; ++u)
    for (NodeId v = u + 1; v < std::min<NodeId>(40, u + 4); ++v)
      edges.emplace_back(u, v);
  auto g = graph_from_edges(40, edges);
  const std::size_t total = g.edge_count();

  auto split = split_edges(g, {0.25, 99});
  CHECK(split.test_pos.size() == total / 4);
  CHECK(split.train.edge_count() + split.test_pos.size() == total);
  CHECK(split.train.node_count() == g.node_count());

  // Test positives are labeled 1, come from g, and are absent from train.
  for (const auto& p : split.test_pos) {
    CHECK(p.label == 1);
    CHECK(g.has_edge(p.source, p.target));
    CHECK_FALSE(split.train.has_edge(p.source, p.target));
  }
  // Train edges are a subset of g.
  for (const auto& [u, v] : split.train.edges()) CHECK(g.has_edge(u, v));

  SECTION("deterministic per seed, different across seeds") {
    auto again = split_edges(g, {0.25, 99});
    CHECK(again.test_pos == split.test_pos);
    CHECK(edge_set(again.train) == edge_set(split.train));
    auto other = split_edges(g, {0.25, 100});
    CHECK(other.test_pos != split.test_pos);
  }
  SECTION("degenerate fractions rejected") {
    CHECK_THROWS_AS(split_edges(g, {0.0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(split_edges(g, {1.0, 1}), std::invalid_argument);
    auto tiny = graph_from_edges(3, {{0, 1}, {1, 2}});
    CHECK_THROWS_WITH(split_edges(tiny, {0.2, 1}),
                      Catch::Matchers::ContainsSubstring("zero test edges"));
  }
}

TEST_CASE("build_test_set covers the three negative schemes") {
  // Full graph holds one reciprocal pair (1<->2) so type 2 must skip its
  // reversal: 2->1 exists in the full graph and cannot be a negative.
  auto full = graph_from_edges(
      6, {{0, 1}, {1, 2}, {2, 1}, {2, 3}, {3, 4}, {4, 5}, {0, 5}});
  std::vector<LabeledPair> pos{{0, 1, 1}, {1, 2, 1}, {2, 3, 1}};

  SECTION("type 2: reversals absent from the full graph") {
    auto t2 = build_test_set(full, pos, DatasetType::type2, 5);
    std::vector<LabeledPair> want = pos;
    want.push_back({1, 0, 0});
    want.push_back({3, 2, 0});  // 2->1 skipped: the edge exists
    CHECK(t2 == want);
  }
  SECTION("type 3: uniform non-edges, exact count, no duplicates") {
    auto t3 = build_test_set(full, pos, DatasetType::type3, 5);
    REQUIRE(t3.size() == 2 * pos.size());
    std::set<std::pair<NodeId, NodeId>> seen;
    for (std::size_t i = pos.size(); i < t3.size(); ++i) {
      const auto& p = t3[i];
      CHECK(p.label == 0);
      CHECK(p.source != p.target);
      CHECK_FALSE(full.has_edge(p.source, p.target));
      CHECK(seen.emplace(p.source, p.target).second);
    }
    // Deterministic per seed.
    CHECK(build_test_set(full, pos, DatasetType::type3, 5) == t3);
  }
  SECTION("type 1: both reversal and random negatives") {
    auto t1 = build_test_set(full, pos, DatasetType::type1, 5);
    std::size_t reversals = 0, randoms = 0;
    for (const auto& p : t1) {
      if (p.label == 1) continue;
      bool is_rev = false;
      for (const auto& q : pos)
        if (p.source == q.target && p.target == q.source) is_rev = true;
      (is_rev ? reversals : randoms) += 1;
    }
    CHECK(reversals == 2);
    CHECK(randoms == pos.size());
  }
  SECTION("near-complete graph exhausts non-edge sampling") {
    // 3 nodes, every ordered pair an edge: no non-edge exists.
    auto complete =
        graph_from_edges(3, {{0, 1}, {1, 0}, {0, 2}, {2, 0}, {1, 2}, {2, 1}});
    std::vector<LabeledPair> cpos{{0, 1, 1}};
    CHECK_THROWS_AS(build_test_set(complete, cpos, DatasetType::type3, 1),
                    std::runtime_error);
  }
  SECTION("positives must be labeled 1") {
    std::vector<LabeledPair> bad{{0, 1, 0}};
    CHECK_THROWS_AS(build_test_set(full, bad, DatasetType::type2, 1),
                    std::invalid_argument);
  }
}

TEST_CASE("random walks respect direction, length, and seeding") {
  //   0 -> 1 -> 2   and 3 isolated; 2 is a sink.
  auto g = graph_from_edges(4, {{0, 1}, {1, 2}});
  WalkConfig cfg;
  cfg.num_walks_per_node = 3;
  cfg.walk_length = 10;
  cfg.rng_seed = 11;

  SECTION("directed walks stop at sinks") {
    auto walks = collect_walks(g, cfg, false);
    REQUIRE(walks.size() == 4 * 3);
    for (const auto& w : walks) {
      REQUIRE_FALSE(w.empty());
      for (std::size_t i = 0; i + 1 < w.size(); ++i)
        CHECK(g.has_edge(w[i], w[i + 1]));
    }
    // Walks starting at 0 must be exactly 0,1,2 (chain, then sink).
    CHECK(walks[0] == std::vector<NodeId>{0, 1, 2});
    // Walks from the isolated node are just the node itself.
    CHECK(walks[3 * 3] == std::vector<NodeId>{3});
  }
  SECTION("undirected walks traverse edges both ways and fill the length") {
    auto walks = collect_walks(g, cfg, true);
    for (std::size_t i = 0; i < 9; ++i)  // nodes 0..2 live on a connected path
      CHECK(walks[i].size() == 10);
    for (const auto& w : walks)
      for (std::size_t i = 0; i + 1 < w.size(); ++i)
        CHECK((g.has_edge(w[i], w[i + 1]) || g.has_edge(w[i + 1], w[i])));
  }
  SECTION("walks are node-major and each (node, walk) is independently seeded") {
    auto walks = collect_walks(g, cfg, true);
    // Re-running with more walks per node keeps the existing ones unchanged.
    WalkConfig more = cfg;
    more.num_walks_per_node = 5;
    auto walks5 = collect_walks(g, more, true);
    for (NodeId node = 0; node < 4; ++node)
      for (int w = 0; w < 3; ++w)
        CHECK(walks5[node * 5 + w] == walks[node * 3 + w]);
    // And a different seed changes them.
    WalkConfig other = cfg;
    other.rng_seed = 12;
    CHECK(collect_walks(g, other, true) != walks);
  }
  SECTION("config validation") {
    WalkConfig bad = cfg;
    bad.walk_length = 0;
    CHECK_THROWS_AS(collect_walks(g, bad, true), std::invalid_argument);
    bad = cfg;
    bad.max_hop_for_direction = 0;
    CHECK_THROWS_AS(build_direction_pairs(g, bad), std::invalid_argument);
  }
}

TEST_CASE("build_direction_pairs mirrors one-way reachable pairs") {
  // Chain 0->1->2->3->4 with max_hop 2: s reaches t for t-s in {1,2}.
  auto g = graph_from_edges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  WalkConfig cfg;
  cfg.max_hop_for_direction = 2;
  auto pairs = build_direction_pairs(g, cfg);

  std::set<std::tuple<NodeId, NodeId, int>> got;
  for (const auto& p : pairs) got.emplace(p.source, p.target, p.label);

  std::set<std::tuple<NodeId, NodeId, int>> want;
  for (NodeId s = 0; s < 5; ++s)
    for (NodeId t = s + 1; t < std::min<NodeId>(5, s + 3); ++t) {
      want.emplace(s, t, 1);
      want.emplace(t, s, 0);
    }
  CHECK(got == want);
  CHECK(pairs.size() == want.size());

  SECTION("mutually reachable pairs yield two positives and no negatives") {
    auto cyc = graph_from_edges(2, {{0, 1}, {1, 0}});
    WalkConfig ccfg;
    auto cpairs = build_direction_pairs(cyc, ccfg);
    std::set<std::tuple<NodeId, NodeId, int>> cgot;
    for (const auto& p : cpairs) cgot.emplace(p.source, p.target, p.label);
    CHECK(cgot == std::set<std::tuple<NodeId, NodeId, int>>{{0, 1, 1}, {1, 0, 1}});
  }
}

TEST_CASE("build_validation_pairs samples train edges plus matched non-edges") {
  Rng rng(derive_seed(3, "fixture"));
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId u = 0; u < 30; ++u)
    for (NodeId v = u + 1; v < std::min<NodeId>(30, u + 3); ++v)
      edges.emplace_back(u, v);
  auto g = graph_from_edges(30, edges);

  auto val = build_validation_pairs(g, 0.10, 21);
  const std::size_t take = static_cast<std::size_t>(0.10 * g.edge_count());
  REQUIRE(val.size() == 2 * take);
  for (std::size_t i = 0; i < take; ++i) {
    CHECK(val[i].label == 1);
    CHECK(g.has_edge(val[i].source, val[i].target));
  }
  std::set<std::pair<NodeId, NodeId>> seen;
  for (std::size_t i = take; i < val.size(); ++i) {
    CHECK(val[i].label == 0);
    CHECK(val[i].source != val[i].target);
    CHECK_FALSE(g.has_edge(val[i].source, val[i].target));
    CHECK(seen.emplace(val[i].source, val[i].target).second);
  }
  CHECK(build_validation_pairs(g, 0.10, 21) == val);

  SECTION("tiny graphs still yield at least one positive") {
    auto tiny = graph_from_edges(4, {{0, 1}, {1, 2}});
    auto v = build_validation_pairs(tiny, 0.10, 4);
    CHECK(v.size() == 2);
    CHECK(v[0].label == 1);
  }
  SECTION("fraction bounds enforced") {
    CHECK_THROWS_AS(build_validation_pairs(g, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(build_validation_pairs(g, 1.5, 1), std::invalid_argument);
  }
}
