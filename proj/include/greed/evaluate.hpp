#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "greed/crossprod.hpp"
#include "greed/direction_model.hpp"
#include "greed/embedding.hpp"
#include "greed/graph.hpp"
#include "greed/rng.hpp"

namespace greed {

struct ScoredPair {
  NodeId source = 0;
  NodeId target = 0;
  int label = 0;
  double score = 0.0;
};

// Rank-based (Mann-Whitney) AUC with average ranks on ties. The numerator is
// accumulated in integers — twice the positive rank sum — so the result is
// exactly the pairwise wins-plus-half-ties count divided by P*N.
inline double roc_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size() || scores.empty())
    throw std::invalid_argument("roc_auc: bad input sizes");
  std::vector<std::size_t> idx(scores.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  long long positives = 0, negatives = 0;
  for (int y : labels) {
    if (y != 0 && y != 1) throw std::invalid_argument("roc_auc: labels must be 0/1");
    (y == 1 ? positives : negatives) += 1;
  }
  if (positives == 0 || negatives == 0)
    throw std::invalid_argument("roc_auc: need both classes");

  long long twice_pos_rank_sum = 0;
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    long long group_pos = 0;
    while (j < idx.size() && scores[idx[j]] == scores[idx[i]]) {
      if (labels[idx[j]] == 1) ++group_pos;
      ++j;
    }
    // ranks i+1 .. j (1-based); twice the average rank is (i+1) + j
    twice_pos_rank_sum += group_pos * static_cast<long long>(i + 1 + j);
    i = j;
  }
  const long long numerator = twice_pos_rank_sum - positives * (positives + 1);
  return static_cast<double>(numerator) /
         (2.0 * static_cast<double>(positives) * static_cast<double>(negatives));
}

inline double roc_auc(const std::vector<ScoredPair>& scored) {
  std::vector<double> scores;
  std::vector<int> labels;
  scores.reserve(scored.size());
  labels.reserve(scored.size());
  for (const ScoredPair& p : scored) {
    scores.push_back(p.score);
    labels.push_back(p.label);
  }
  return roc_auc(scores, labels);
}

// Two-step scorer: the proximity gate decides whether a pair is plausibly an
// edge at all, then the direction model says which way it points. Pairs at
// or below the gate score zero.
struct TwoStepScorer {
  const EmbeddingTable* proximity = nullptr;
  double threshold = 0.5;
  const DirectionModel* model = nullptr;
  double eps = 1e-12;

  double proximity_score(NodeId s, NodeId t) const {
    return scaled_cosine_similarity(proximity->vec(s), proximity->vec(t), eps);
  }

  bool passes_gate(NodeId s, NodeId t) const {
    return proximity_score(s, t) > threshold;
  }

  double score(NodeId s, NodeId t) const {
    return passes_gate(s, t) ? model->predict(s, t) : 0.0;
  }
};

enum class ScoreMode { two_step, proximity_only };

inline std::vector<ScoredPair> score_pairs(const std::vector<LabeledPair>& pairs,
                                           const TwoStepScorer& scorer,
                                           ScoreMode mode) {
  std::vector<ScoredPair> out;
  out.reserve(pairs.size());
  for (const LabeledPair& p : pairs) {
    const double s = mode == ScoreMode::two_step
                         ? scorer.score(p.source, p.target)
                         : scorer.proximity_score(p.source, p.target);
    out.push_back({p.source, p.target, p.label, s});
  }
  return out;
}

inline std::vector<ScoredPair> score_pairs_two_step(const std::vector<LabeledPair>& pairs,
                                                    const TwoStepScorer& scorer) {
  return score_pairs(pairs, scorer, ScoreMode::two_step);
}

inline double evaluate_link_prediction(const std::vector<LabeledPair>& pairs,
                                       const TwoStepScorer& scorer, ScoreMode mode) {
  return roc_auc(score_pairs(pairs, scorer, mode));
}

// Top-k targets for one source, the paper's recommendation rule: rank every
// candidate (excluding the source and the sorted exclusion list, typically
// its train out-neighbors) by proximity descending, keep those the direction
// model classifies as outgoing edges, and pad with the highest-proximity
// rejected candidates when fewer than k survive.
inline std::vector<NodeId> recommend_topk(const EmbeddingTable& proximity,
                                          const DirectionModel& model, NodeId source,
                                          int k, const std::vector<NodeId>& exclude_sorted,
                                          double eps = 1e-12) {
  if (k < 1) throw std::invalid_argument("recommend_topk: k must be >= 1");
  if (source >= proximity.count)
    throw std::invalid_argument("recommend_topk: unknown query node");
  struct Cand {
    double prox;
    NodeId node;
  };
  std::vector<Cand> cands;
  cands.reserve(proximity.count);
  const Vec source_vec = proximity.vec(source);
  for (NodeId v = 0; v < proximity.count; ++v) {
    if (v == source) continue;
    if (std::binary_search(exclude_sorted.begin(), exclude_sorted.end(), v)) continue;
    cands.push_back({scaled_cosine_similarity(source_vec, proximity.vec(v), eps), v});
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.prox != b.prox) return a.prox > b.prox;
    return a.node < b.node;
  });

  std::vector<NodeId> survivors;
  std::vector<NodeId> rejected;
  const std::size_t want = static_cast<std::size_t>(k);
  for (const Cand& c : cands) {
    if (survivors.size() >= want) break;
    if (predict_direction(model, source, c.node) == 1)
      survivors.push_back(c.node);
    else
      rejected.push_back(c.node);
  }
  for (std::size_t i = 0; survivors.size() < want && i < rejected.size(); ++i)
    survivors.push_back(rejected[i]);
  return survivors;
}

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
  std::size_t sources_evaluated = 0;
};

using RecommendFn = std::function<std::vector<NodeId>(NodeId source, int k)>;

inline std::unordered_map<NodeId, std::vector<NodeId>> truth_by_source(
    const std::vector<LabeledPair>& test_pos) {
  std::unordered_map<NodeId, std::vector<NodeId>> truth;
  for (const LabeledPair& p : test_pos)
    if (p.label == 1) truth[p.source].push_back(p.target);
  return truth;
}

// Deterministic sample of sources owning at least one held-out edge.
inline std::vector<NodeId> sample_truth_sources(
    const std::unordered_map<NodeId, std::vector<NodeId>>& truth,
    double sample_fraction, std::uint64_t rng_seed) {
  if (!(sample_fraction > 0.0 && sample_fraction <= 1.0))
    throw std::invalid_argument("sample_fraction must be in (0, 1]");
  std::vector<NodeId> sources;
  sources.reserve(truth.size());
  for (const auto& [s, targets] : truth)
    if (!targets.empty()) sources.push_back(s);
  if (sources.empty()) throw std::invalid_argument("empty recommendation sample");
  std::sort(sources.begin(), sources.end());
  std::size_t take = static_cast<std::size_t>(
      sample_fraction * static_cast<double>(sources.size()));
  if (take == 0) take = 1;
  if (take < sources.size()) {
    Rng rng(derive_seed(rng_seed, "nr-sources"));
    rng.shuffle(sources);
    sources.resize(take);
    std::sort(sources.begin(), sources.end());
  }
  return sources;
}

// Macro-averaged precision/recall at k over the sampled sources.
inline PrecisionRecall precision_recall_at_k(
    const std::unordered_map<NodeId, std::vector<NodeId>>& truth,
    const RecommendFn& recommend, int k, double sample_fraction = 1.0,
    std::uint64_t rng_seed = 1) {
  if (k < 1) throw std::invalid_argument("precision_recall_at_k: k must be >= 1");
  const std::vector<NodeId> sources =
      sample_truth_sources(truth, sample_fraction, rng_seed);

  double precision_sum = 0.0, recall_sum = 0.0;
  for (NodeId s : sources) {
    const std::vector<NodeId>& want = truth.at(s);
    const std::vector<NodeId> got = recommend(s, k);
    std::size_t hits = 0;
    for (NodeId v : got)
      if (std::find(want.begin(), want.end(), v) != want.end()) ++hits;
    precision_sum += static_cast<double>(hits) / static_cast<double>(k);
    recall_sum += static_cast<double>(hits) / static_cast<double>(want.size());
  }
  PrecisionRecall pr;
  pr.sources_evaluated = sources.size();
  pr.precision = precision_sum / static_cast<double>(sources.size());
  pr.recall = recall_sum / static_cast<double>(sources.size());
  return pr;
}

// Precomputed-recommendations overload; evaluates every source present in
// both maps (no sampling).
inline PrecisionRecall precision_recall_at_k(
    const std::unordered_map<NodeId, std::vector<NodeId>>& truth,
    const std::unordered_map<NodeId, std::vector<NodeId>>& recommendations, int k) {
  return precision_recall_at_k(
      truth,
      [&](NodeId s, int) {
        const auto it = recommendations.find(s);
        if (it == recommendations.end())
          throw std::invalid_argument("no recommendations for source " +
                                      std::to_string(s));
        return it->second;
      },
      k);
}

struct MetricRow {
  std::string metric;
  std::string dataset_type;  // empty when not applicable
  int k = 0;                 // 0 when not applicable
  double value = 0.0;
};

struct MetricsReport {
  std::vector<MetricRow> rows;

  void add(std::string metric, std::string dataset_type, int k, double value) {
    rows.push_back({std::move(metric), std::move(dataset_type), k, value});
  }

  std::string to_csv() const {
    std::ostringstream out;
    out << "metric,dataset_type,k,value\n";
    for (const MetricRow& r : rows) {
      out << r.metric << "," << r.dataset_type << ",";
      if (r.k > 0) out << r.k;
      out << "," << fmt_g17(r.value) << "\n";
    }
    return out.str();
  }

  std::string to_table() const {
    std::ostringstream out;
    for (const MetricRow& r : rows) {
      out << r.metric;
      if (!r.dataset_type.empty()) out << " [" << r.dataset_type << "]";
      if (r.k > 0) out << " @" << r.k;
      out << " = " << fmt_g17(r.value) << "\n";
    }
    return out.str();
  }
};

// One AUC row per dataset type, in the given order.
inline MetricsReport evaluate_link_prediction(
    const std::vector<std::pair<std::string, std::vector<LabeledPair>>>& test_sets,
    const TwoStepScorer& scorer, ScoreMode mode) {
  MetricsReport report;
  for (const auto& [dtype, pairs] : test_sets)
    report.add("auc", dtype, 0, evaluate_link_prediction(pairs, scorer, mode));
  return report;
}

// Precision/recall rows for each cutoff.
inline MetricsReport precision_recall_report(
    const std::unordered_map<NodeId, std::vector<NodeId>>& truth,
    const RecommendFn& recommend, const std::vector<int>& ks,
    double sample_fraction, std::uint64_t rng_seed) {
  MetricsReport report;
  for (int k : ks) {
    const PrecisionRecall pr =
        precision_recall_at_k(truth, recommend, k, sample_fraction, rng_seed);
    report.add("precision", "", k, pr.precision);
    report.add("recall", "", k, pr.recall);
  }
  return report;
}

}  // namespace greed
