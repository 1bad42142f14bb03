#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "greed/io_util.hpp"
#include "greed/rng.hpp"

namespace greed {

using NodeId = std::uint32_t;

struct LabeledPair {
  NodeId source = 0;
  NodeId target = 0;
  int label = 0;  // 1 = edge in this direction, 0 = no edge

  bool operator==(const LabeledPair&) const = default;
};

// Immutable after construction. Adjacency lists are sorted and duplicate
// free; (u,v) is in out_adj[u] iff u is in in_adj[v]; no self loops.
struct DirectedGraph {
  std::vector<std::vector<NodeId>> out_adj;
  std::vector<std::vector<NodeId>> in_adj;

  std::size_t node_count() const { return out_adj.size(); }

  std::size_t edge_count() const {
    std::size_t e = 0;
    for (const auto& a : out_adj) e += a.size();
    return e;
  }

  bool has_edge(NodeId u, NodeId v) const {
    const auto& a = out_adj[u];
    return std::binary_search(a.begin(), a.end(), v);
  }

  std::vector<std::pair<NodeId, NodeId>> edges() const {
    std::vector<std::pair<NodeId, NodeId>> es;
    es.reserve(edge_count());
    for (NodeId u = 0; u < node_count(); ++u)
      for (NodeId v : out_adj[u]) es.emplace_back(u, v);
    return es;
  }
};

// Builds the adjacency structure from (u,v) pairs. Self loops are dropped and
// duplicates collapsed; the counts are reported back through the pointers.
inline DirectedGraph graph_from_edges(std::size_t node_count,
                                      std::vector<std::pair<NodeId, NodeId>> edges,
                                      std::size_t* self_loops = nullptr,
                                      std::size_t* duplicates = nullptr) {
  std::size_t loops = 0;
  std::erase_if(edges, [&](const auto& e) {
    if (e.first == e.second) {
      ++loops;
      return true;
    }
    return false;
  });
  std::sort(edges.begin(), edges.end());
  const auto last = std::unique(edges.begin(), edges.end());
  const std::size_t dups = static_cast<std::size_t>(edges.end() - last);
  edges.erase(last, edges.end());

  DirectedGraph g;
  g.out_adj.resize(node_count);
  g.in_adj.resize(node_count);
  for (const auto& [u, v] : edges) {
    if (u >= node_count || v >= node_count)
      throw std::invalid_argument("graph_from_edges: node id out of range");
    g.out_adj[u].push_back(v);
    g.in_adj[v].push_back(u);
  }
  for (auto& a : g.in_adj) std::sort(a.begin(), a.end());
  if (self_loops) *self_loops = loops;
  if (duplicates) *duplicates = dups;
  return g;
}

// Maps the arbitrary integer ids found in an input edge list to dense
// 0-based internal ids (assigned in sorted original-id order).
struct IdMap {
  std::vector<std::int64_t> original;  // internal id -> original id
  std::unordered_map<std::int64_t, NodeId> to_internal;
};

struct LoadStats {
  std::size_t self_loops_dropped = 0;
  std::size_t duplicate_edges_dropped = 0;
  std::size_t lines_read = 0;
};

struct LoadedGraph {
  DirectedGraph graph;
  IdMap ids;
  LoadStats stats;
};

namespace detail {

inline bool is_comment_or_blank(const std::string& line) {
  for (char ch : line) {
    if (ch == ' ' || ch == '\t' || ch == '\r') continue;
    return ch == '%' || ch == '#';
  }
  return true;
}

inline std::pair<std::int64_t, std::int64_t> parse_edge_line(const std::string& line,
                                                             std::size_t line_no) {
  std::istringstream ss(line);
  std::int64_t a, b;
  std::string extra;
  if (!(ss >> a >> b) || (ss >> extra)) {
    throw std::runtime_error("malformed edge line " + std::to_string(line_no) +
                             ": expected two integer tokens, got \"" + line + "\"");
  }
  return {a, b};
}

}  // namespace detail

// Reads a Konect-style edge list ("src dst" per line, '%'/'#' comments) and
// remaps node ids to a dense 0-based range.
inline LoadedGraph load_edge_list(const std::string& path) {
  auto in = open_input(path);
  std::vector<std::pair<std::int64_t, std::int64_t>> raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::is_comment_or_blank(line)) continue;
    raw.push_back(detail::parse_edge_line(line, line_no));
  }

  LoadedGraph out;
  out.stats.lines_read = line_no;

  std::vector<std::int64_t> ids;
  ids.reserve(raw.size() * 2);
  for (const auto& [a, b] : raw) {
    ids.push_back(a);
    ids.push_back(b);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  out.ids.original = ids;
  out.ids.to_internal.reserve(ids.size());
  for (NodeId i = 0; i < ids.size(); ++i) out.ids.to_internal.emplace(ids[i], i);

  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(raw.size());
  for (const auto& [a, b] : raw)
    edges.emplace_back(out.ids.to_internal.at(a), out.ids.to_internal.at(b));

  out.graph = graph_from_edges(ids.size(), std::move(edges),
                               &out.stats.self_loops_dropped,
                               &out.stats.duplicate_edges_dropped);
  if (out.graph.edge_count() == 0)
    throw std::runtime_error("empty graph: no usable edges in " + path);
  return out;
}

// Stage files written by this pipeline already use dense internal ids and
// carry a "# nodes N" header so isolated nodes survive the round trip.
inline void write_edge_list(const std::string& path, const DirectedGraph& g) {
  auto out = open_output(path);
  out << "# nodes " << g.node_count() << "\n";
  for (NodeId u = 0; u < g.node_count(); ++u)
    for (NodeId v : g.out_adj[u]) out << u << " " << v << "\n";
}

inline DirectedGraph read_internal_edge_list(const std::string& path) {
  auto in = open_input(path);
  std::string line;
  std::size_t line_no = 0;
  std::size_t node_count = 0;
  bool have_count = false;
  std::vector<std::pair<NodeId, NodeId>> edges;
  while (std::getline(in, line)) {
    ++line_no;
    if (!have_count && line.rfind("# nodes ", 0) == 0) {
      node_count = std::stoull(line.substr(8));
      have_count = true;
      continue;
    }
    if (detail::is_comment_or_blank(line)) continue;
    const auto [a, b] = detail::parse_edge_line(line, line_no);
    if (a < 0 || b < 0)
      throw std::runtime_error("negative node id at line " + std::to_string(line_no));
    edges.emplace_back(static_cast<NodeId>(a), static_cast<NodeId>(b));
    node_count = std::max({node_count, static_cast<std::size_t>(a) + 1,
                           static_cast<std::size_t>(b) + 1});
  }
  return graph_from_edges(node_count, std::move(edges));
}

inline void write_id_map(const std::string& path, const IdMap& ids) {
  auto out = open_output(path);
  out << "# original internal\n";
  for (NodeId i = 0; i < ids.original.size(); ++i)
    out << ids.original[i] << " " << i << "\n";
}

inline IdMap read_id_map(const std::string& path) {
  auto in = open_input(path);
  IdMap ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::is_comment_or_blank(line)) continue;
    const auto [orig, internal] = detail::parse_edge_line(line, line_no);
    if (internal != static_cast<std::int64_t>(ids.original.size()))
      throw std::runtime_error("id map not in internal order at line " +
                               std::to_string(line_no));
    ids.original.push_back(orig);
    ids.to_internal.emplace(orig, static_cast<NodeId>(internal));
  }
  return ids;
}

// Labeled pair files: "# nodes N" header then "src dst label" lines.
inline void write_pairs(const std::string& path, std::size_t node_count,
                        const std::vector<LabeledPair>& pairs) {
  auto out = open_output(path);
  out << "# nodes " << node_count << "\n";
  for (const LabeledPair& p : pairs)
    out << p.source << " " << p.target << " " << p.label << "\n";
}

struct PairFile {
  std::size_t node_count = 0;
  std::vector<LabeledPair> pairs;
};

inline PairFile read_pairs(const std::string& path) {
  auto in = open_input(path);
  PairFile pf;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.rfind("# nodes ", 0) == 0) {
      pf.node_count = std::stoull(line.substr(8));
      continue;
    }
    if (detail::is_comment_or_blank(line)) continue;
    std::istringstream ss(line);
    std::int64_t s, t;
    int label;
    std::string extra;
    if (!(ss >> s >> t >> label) || (ss >> extra) || (label != 0 && label != 1))
      throw std::runtime_error("malformed pair line " + std::to_string(line_no) +
                               ": expected \"src dst label\"");
    if (s < 0 || t < 0 ||
        (pf.node_count > 0 && (static_cast<std::size_t>(s) >= pf.node_count ||
                               static_cast<std::size_t>(t) >= pf.node_count)))
      throw std::runtime_error("pair line " + std::to_string(line_no) +
                               ": node id out of range");
    pf.pairs.push_back({static_cast<NodeId>(s), static_cast<NodeId>(t), label});
  }
  return pf;
}

struct SplitSpec {
  double test_fraction = 0.20;
  std::uint64_t rng_seed = 1;
};

enum class DatasetType { type1, type2, type3 };

inline const char* dataset_type_name(DatasetType t) {
  switch (t) {
    case DatasetType::type1: return "type1";
    case DatasetType::type2: return "type2";
    case DatasetType::type3: return "type3";
  }
  return "?";
}

struct SplitResult {
  DirectedGraph train;
  std::vector<LabeledPair> test_pos;
};

// Removes floor(test_fraction * |E|) edges uniformly at random; they become
// the positive test pairs, the rest stay as the training graph (same node
// set, connectivity not preserved on purpose).
inline SplitResult split_edges(const DirectedGraph& g, const SplitSpec& spec) {
  if (g.edge_count() == 0) throw std::invalid_argument("split_edges: empty graph");
  if (!(spec.test_fraction > 0.0 && spec.test_fraction < 1.0))
    throw std::invalid_argument("split_edges: test_fraction must be in (0,1)");
  auto edges = g.edges();
  const std::size_t take =
      static_cast<std::size_t>(spec.test_fraction * static_cast<double>(edges.size()));
  if (take == 0)
    throw std::invalid_argument("split_edges: test_fraction yields zero test edges");

  Rng rng(derive_seed(spec.rng_seed, "split"));
  rng.shuffle(edges);

  SplitResult res;
  res.test_pos.reserve(take);
  for (std::size_t i = 0; i < take; ++i)
    res.test_pos.push_back({edges[i].first, edges[i].second, 1});
  std::vector<std::pair<NodeId, NodeId>> rest(edges.begin() + take, edges.end());
  res.train = graph_from_edges(g.node_count(), std::move(rest));
  return res;
}

// Assembles a labeled test set. Reverse negatives are the reversals of the
// positives that are absent from the full graph; random negatives are
// uniformly sampled non-edges, one per positive.
inline std::vector<LabeledPair> build_test_set(const DirectedGraph& g_full,
                                               const std::vector<LabeledPair>& test_pos,
                                               DatasetType type,
                                               std::uint64_t rng_seed) {
  if (test_pos.empty()) throw std::invalid_argument("build_test_set: no positive pairs");
  for (const LabeledPair& p : test_pos)
    if (p.label != 1)
      throw std::invalid_argument("build_test_set: test_pos must all be labeled 1");

  const std::size_t n = g_full.node_count();
  std::vector<LabeledPair> out = test_pos;

  auto add_reverse_negatives = [&] {
    for (const LabeledPair& p : test_pos)
      if (!g_full.has_edge(p.target, p.source)) out.push_back({p.target, p.source, 0});
  };

  auto add_random_negatives = [&] {
    const std::size_t want = test_pos.size();
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(want * 2);
    // existing negatives (type 1 builds on reverse negatives) must stay unique
    for (const LabeledPair& p : out)
      if (p.label == 0)
        seen.insert(static_cast<std::uint64_t>(p.source) * n + p.target);
    Rng rng(derive_seed(rng_seed, "random-negatives"));
    std::size_t made = 0;
    std::size_t attempts = 0;
    const std::size_t max_attempts = 100 * want + 10000;
    while (made < want) {
      if (++attempts > max_attempts)
        throw std::runtime_error(
            "build_test_set: graph too dense to sample random negatives");
      const NodeId u = static_cast<NodeId>(rng.next_below(n));
      const NodeId v = static_cast<NodeId>(rng.next_below(n));
      if (u == v || g_full.has_edge(u, v)) continue;
      if (!seen.insert(static_cast<std::uint64_t>(u) * n + v).second) continue;
      out.push_back({u, v, 0});
      ++made;
    }
  };

  switch (type) {
    case DatasetType::type2:
      add_reverse_negatives();
      break;
    case DatasetType::type3:
      add_random_negatives();
      break;
    case DatasetType::type1:
      add_reverse_negatives();
      add_random_negatives();
      break;
  }
  return out;
}

struct WalkConfig {
  int num_walks_per_node = 40;
  int walk_length = 40;
  int max_hop_for_direction = 3;
  std::uint64_t rng_seed = 1;

  void validate() const {
    if (num_walks_per_node < 1 || walk_length < 1)
      throw std::invalid_argument("WalkConfig: walk counts must be positive");
    if (max_hop_for_direction < 1)
      throw std::invalid_argument("WalkConfig: max_hop_for_direction must be >= 1");
  }
};

namespace detail {

inline std::vector<std::vector<NodeId>> undirected_adjacency(const DirectedGraph& g) {
  std::vector<std::vector<NodeId>> adj(g.node_count());
  for (NodeId u = 0; u < g.node_count(); ++u) {
    auto& a = adj[u];
    a.reserve(g.out_adj[u].size() + g.in_adj[u].size());
    std::set_union(g.out_adj[u].begin(), g.out_adj[u].end(), g.in_adj[u].begin(),
                   g.in_adj[u].end(), std::back_inserter(a));
  }
  return adj;
}

}  // namespace detail

// Uniform random walks, num_walks_per_node per start node. Each walk draws
// from its own generator seeded by (rng_seed, node, walk index), so the
// stream is reproducible under any parallel schedule. Directed walks stop at
// sinks; undirected walks step across out- and in-edges alike.
template <typename Sink>
void generate_walks(const DirectedGraph& g, const WalkConfig& cfg, bool undirected,
                    Sink&& sink) {
  cfg.validate();
  if (g.node_count() == 0) throw std::invalid_argument("generate_walks: empty graph");
  const auto undirected_adj =
      undirected ? detail::undirected_adjacency(g) : std::vector<std::vector<NodeId>>{};
  std::vector<NodeId> walk;
  walk.reserve(static_cast<std::size_t>(cfg.walk_length));
  for (NodeId node = 0; node < g.node_count(); ++node) {
    for (int w = 0; w < cfg.num_walks_per_node; ++w) {
      Rng rng(derive_seed(cfg.rng_seed, "walks", node, static_cast<std::uint64_t>(w)));
      walk.clear();
      walk.push_back(node);
      NodeId cur = node;
      for (int step = 1; step < cfg.walk_length; ++step) {
        const auto& nbrs = undirected ? undirected_adj[cur] : g.out_adj[cur];
        if (nbrs.empty()) break;
        cur = nbrs[rng.next_below(nbrs.size())];
        walk.push_back(cur);
      }
      sink(const_cast<const std::vector<NodeId>&>(walk));
    }
  }
}

inline std::vector<std::vector<NodeId>> collect_walks(const DirectedGraph& g,
                                                      const WalkConfig& cfg,
                                                      bool undirected) {
  std::vector<std::vector<NodeId>> walks;
  walks.reserve(g.node_count() * static_cast<std::size_t>(cfg.num_walks_per_node));
  generate_walks(g, cfg, undirected,
                 [&](const std::vector<NodeId>& w) { walks.push_back(w); });
  return walks;
}

namespace detail {

// Exact bounded-hop reachability, used while the frontier stays small.
// Returns false (leaving `reached` unspecified) once more than `cap` nodes
// turn up; the caller then falls back to sampled walks.
inline bool bounded_bfs(const DirectedGraph& g, NodeId source, int max_hop,
                        std::size_t cap, std::vector<NodeId>& reached,
                        std::vector<std::uint32_t>& stamp, std::uint32_t stamp_id) {
  reached.clear();
  stamp[source] = stamp_id;
  std::vector<NodeId> frontier{source};
  std::vector<NodeId> next;
  for (int hop = 0; hop < max_hop && !frontier.empty(); ++hop) {
    next.clear();
    for (NodeId u : frontier) {
      for (NodeId v : g.out_adj[u]) {
        if (stamp[v] == stamp_id) continue;
        stamp[v] = stamp_id;
        reached.push_back(v);
        next.push_back(v);
        if (reached.size() > cap) return false;
      }
    }
    std::swap(frontier, next);
  }
  std::sort(reached.begin(), reached.end());
  return true;
}

inline std::vector<NodeId> sampled_reachable(const DirectedGraph& g, NodeId source,
                                             const WalkConfig& cfg) {
  std::unordered_set<NodeId> seen;
  Rng rng(derive_seed(cfg.rng_seed, "direction-pairs", source));
  for (int w = 0; w < cfg.num_walks_per_node; ++w) {
    NodeId cur = source;
    for (int step = 0; step < cfg.max_hop_for_direction; ++step) {
      const auto& nbrs = g.out_adj[cur];
      if (nbrs.empty()) break;
      cur = nbrs[rng.next_below(nbrs.size())];
      if (cur != source) seen.insert(cur);
    }
  }
  std::vector<NodeId> reached(seen.begin(), seen.end());
  std::sort(reached.begin(), reached.end());
  return reached;
}

}  // namespace detail

// Training pairs for the direction model. (s,t) reachable within the hop
// bound gives (s,t,1); the reversal gets label 0 unless t also reaches s, in
// which case both directions are positives. Exact BFS while the neighborhood
// stays under 10k nodes per source, sampled directed walks beyond that.
inline std::vector<LabeledPair> build_direction_pairs(const DirectedGraph& g,
                                                      const WalkConfig& cfg) {
  cfg.validate();
  if (g.node_count() == 0)
    throw std::invalid_argument("build_direction_pairs: empty graph");
  constexpr std::size_t kExactCap = 10000;
  const std::size_t n = g.node_count();

  std::vector<std::vector<NodeId>> reach(n);
  std::vector<std::uint32_t> stamp(n, 0);
  std::vector<NodeId> scratch;
  for (NodeId s = 0; s < n; ++s) {
    if (detail::bounded_bfs(g, s, cfg.max_hop_for_direction, kExactCap, scratch, stamp,
                            s + 1)) {
      reach[s] = scratch;
    } else {
      reach[s] = detail::sampled_reachable(g, s, cfg);
    }
  }

  std::vector<LabeledPair> pairs;
  for (NodeId s = 0; s < n; ++s) {
    for (NodeId t : reach[s]) {
      pairs.push_back({s, t, 1});
      if (!std::binary_search(reach[t].begin(), reach[t].end(), s))
        pairs.push_back({t, s, 0});
    }
  }
  return pairs;
}

// Validation pairs for picking the proximity gate: a sample of training
// edges as positives plus an equal count of uniformly drawn non-edges.
inline std::vector<LabeledPair> build_validation_pairs(const DirectedGraph& train,
                                                       double fraction,
                                                       std::uint64_t rng_seed) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw std::invalid_argument("build_validation_pairs: fraction must be in (0,1]");
  auto edges = train.edges();
  if (edges.empty()) throw std::invalid_argument("build_validation_pairs: empty graph");
  Rng rng(derive_seed(rng_seed, "validation"));
  rng.shuffle(edges);
  std::size_t take = static_cast<std::size_t>(fraction * static_cast<double>(edges.size()));
  if (take == 0) take = 1;

  std::vector<LabeledPair> pairs;
  pairs.reserve(take * 2);
  for (std::size_t i = 0; i < take; ++i)
    pairs.push_back({edges[i].first, edges[i].second, 1});

  const std::size_t n = train.node_count();
  std::unordered_set<std::uint64_t> seen;
  std::size_t attempts = 0;
  const std::size_t max_attempts = 100 * take + 10000;
  std::size_t made = 0;
  while (made < take) {
    if (++attempts > max_attempts)
      throw std::runtime_error("build_validation_pairs: could not sample non-edges");
    const NodeId u = static_cast<NodeId>(rng.next_below(n));
    const NodeId v = static_cast<NodeId>(rng.next_below(n));
    if (u == v || train.has_edge(u, v)) continue;
    if (!seen.insert(static_cast<std::uint64_t>(u) * n + v).second) continue;
    pairs.push_back({u, v, 0});
    ++made;
  }
  return pairs;
}

}  // namespace greed
