#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "greed/crossprod.hpp"
#include "greed/embedding.hpp"
#include "greed/graph.hpp"
#include "greed/rng.hpp"

namespace greed {

struct SkipGramConfig {
  int dim = 128;
  int window = 10;
  int negatives = 5;
  int epochs = 5;
  double learning_rate = 0.025;
  std::uint64_t rng_seed = 1;

  void validate() const {
    if (dim < 1) throw std::invalid_argument("SkipGramConfig: dim must be >= 1");
    if (window < 1) throw std::invalid_argument("SkipGramConfig: window must be >= 1");
    if (negatives < 1)
      throw std::invalid_argument("SkipGramConfig: negatives must be >= 1");
    if (epochs < 1) throw std::invalid_argument("SkipGramConfig: epochs must be >= 1");
    if (!(learning_rate > 0.0))
      throw std::invalid_argument("SkipGramConfig: learning_rate must be > 0");
  }
};

// Replayable walk stream: invoking the source runs the sink over every walk,
// in the same order every time. Lets epochs re-stream the corpus instead of
// holding it in memory.
using WalkSink = std::function<void(const std::vector<NodeId>&)>;
using WalkSource = std::function<void(const WalkSink&)>;

struct SkipGramStats {
  std::size_t corpus_tokens = 0;          // walk nodes per epoch
  std::size_t zero_frequency_nodes = 0;   // nodes absent from every walk
  std::vector<double> epoch_losses;       // fixed-sample corpus loss per epoch
};

namespace detail {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace detail

// Skip-gram with negative sampling over random-walk corpora. Input vectors
// hold the context word, output vectors the center word; negatives are drawn
// from the unigram distribution raised to 3/4. The learning rate decays
// linearly over all processed tokens down to 1e-4 of its start value.
class SkipGramTrainer {
 public:
  SkipGramTrainer(std::size_t node_count, WalkSource walks, const SkipGramConfig& cfg)
      : cfg_(cfg), node_count_(node_count), walks_(std::move(walks)) {
    cfg_.validate();
    if (node_count_ == 0) throw std::invalid_argument("SkipGramTrainer: no nodes");

    // frequency pass over one replay of the corpus
    std::vector<std::size_t> freq(node_count_, 0);
    std::size_t tokens = 0;
    walks_([&](const std::vector<NodeId>& w) {
      for (NodeId v : w) {
        if (v >= node_count_)
          throw std::invalid_argument("SkipGramTrainer: walk node out of range");
        ++freq[v];
      }
      tokens += w.size();
    });
    if (tokens == 0) throw std::invalid_argument("SkipGramTrainer: empty walk corpus");
    stats_.corpus_tokens = tokens;
    for (std::size_t f : freq)
      if (f == 0) ++stats_.zero_frequency_nodes;

    // cumulative table for unigram^0.75 negative sampling
    cumulative_.resize(node_count_);
    double total = 0.0;
    for (std::size_t i = 0; i < node_count_; ++i) {
      total += std::pow(static_cast<double>(freq[i]), 0.75);
      cumulative_[i] = total;
    }
    if (!(total > 0.0))
      throw std::invalid_argument("SkipGramTrainer: degenerate frequency table");

    input_ = EmbeddingTable(node_count_, cfg_.dim);
    output_ = EmbeddingTable(node_count_, cfg_.dim);
    Rng init(derive_seed(cfg_.rng_seed, "skipgram-init"));
    const double half = 0.5 / cfg_.dim;
    for (double& v : input_.data) v = init.next_uniform(-half, half);
    // output vectors start at zero

    total_tokens_all_epochs_ =
        stats_.corpus_tokens * static_cast<std::size_t>(cfg_.epochs);
    train_rng_ = Rng(derive_seed(cfg_.rng_seed, "skipgram-train"));
  }

  void run_epoch() {
    walks_([&](const std::vector<NodeId>& walk) {
      const int len = static_cast<int>(walk.size());
      for (int pos = 0; pos < len; ++pos) {
        const double frac = static_cast<double>(processed_tokens_) /
                            static_cast<double>(total_tokens_all_epochs_ + 1);
        alpha_ = std::max(cfg_.learning_rate * (1.0 - frac),
                          cfg_.learning_rate * 1e-4);
        ++processed_tokens_;
        // sampled window width in [1, window], narrower windows more often
        const int reduced =
            1 + static_cast<int>(train_rng_.next_below(
                    static_cast<std::size_t>(cfg_.window)));
        const NodeId center = walk[pos];
        for (int off = -reduced; off <= reduced; ++off) {
          if (off == 0) continue;
          const int cpos = pos + off;
          if (cpos < 0 || cpos >= len) continue;
          train_pair(walk[cpos], center, train_rng_);
        }
      }
    });
  }

  // Negative-sampling objective over the whole corpus, with window widths
  // and negative draws taken from a fixed-seed generator: the same function
  // of the parameters at every call, so successive values are comparable.
  double corpus_loss() const {
    Rng rng(derive_seed(cfg_.rng_seed, "skipgram-loss"));
    double loss = 0.0;
    walks_([&](const std::vector<NodeId>& walk) {
      const int len = static_cast<int>(walk.size());
      for (int pos = 0; pos < len; ++pos) {
        const int reduced =
            1 + static_cast<int>(rng.next_below(static_cast<std::size_t>(cfg_.window)));
        const NodeId center = walk[pos];
        for (int off = -reduced; off <= reduced; ++off) {
          if (off == 0) continue;
          const int cpos = pos + off;
          if (cpos < 0 || cpos >= len) continue;
          const NodeId context = walk[cpos];
          loss -= std::log(std::max(detail::sigmoid(dot(context, center)), 1e-300));
          for (int k = 0; k < cfg_.negatives; ++k) {
            const NodeId neg = sample_negative(center, rng);
            loss -= std::log(std::max(detail::sigmoid(-dot(context, neg)), 1e-300));
          }
        }
      }
    });
    return loss;
  }

  const EmbeddingTable& input_vectors() const { return input_; }
  const SkipGramStats& stats() const { return stats_; }
  SkipGramStats& stats() { return stats_; }

 private:
  double dot(NodeId input_node, NodeId output_node) const {
    const double* a = input_.row(input_node);
    const double* b = output_.row(output_node);
    double s = 0.0;
    for (int d = 0; d < cfg_.dim; ++d) s += a[d] * b[d];
    return s;
  }

  NodeId sample_negative(NodeId positive, Rng& rng) const {
    for (int attempt = 0; attempt < 100; ++attempt) {
      const double x = rng.next_double() * cumulative_.back();
      const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), x);
      const NodeId cand = static_cast<NodeId>(
          std::min<std::size_t>(it - cumulative_.begin(), node_count_ - 1));
      if (cand != positive) return cand;
    }
    // only one node carries sampling mass; fall back to the positive itself
    return positive;
  }

  void train_pair(NodeId context, NodeId center, Rng& rng) {
    double* in = input_.row(context);
    grad_in_.assign(static_cast<std::size_t>(cfg_.dim), 0.0);
    auto update = [&](NodeId target, double label) {
      double* out = output_.row(target);
      double s = 0.0;
      for (int d = 0; d < cfg_.dim; ++d) s += in[d] * out[d];
      const double g = (label - detail::sigmoid(s)) * alpha_;
      for (int d = 0; d < cfg_.dim; ++d) {
        grad_in_[d] += g * out[d];
        out[d] += g * in[d];
      }
    };
    update(center, 1.0);
    for (int k = 0; k < cfg_.negatives; ++k) update(sample_negative(center, rng), 0.0);
    for (int d = 0; d < cfg_.dim; ++d) in[d] += grad_in_[d];
  }

  SkipGramConfig cfg_;
  std::size_t node_count_;
  WalkSource walks_;
  EmbeddingTable input_;
  EmbeddingTable output_;
  std::vector<double> cumulative_;
  SkipGramStats stats_;
  Rng train_rng_{0};
  std::vector<double> grad_in_;
  double alpha_ = 0.0;
  std::size_t processed_tokens_ = 0;
  std::size_t total_tokens_all_epochs_ = 0;
};

// Full proximity training pass: undirected walks over the training graph,
// skip-gram for `epochs` passes, input vectors out.
inline EmbeddingTable train_skipgram(std::size_t node_count, const WalkSource& walks,
                                     const SkipGramConfig& cfg,
                                     SkipGramStats* stats_out = nullptr,
                                     bool track_loss = false) {
  SkipGramTrainer trainer(node_count, walks, cfg);
  for (int e = 0; e < cfg.epochs; ++e) {
    trainer.run_epoch();
    if (track_loss) trainer.stats().epoch_losses.push_back(trainer.corpus_loss());
  }
  if (stats_out) *stats_out = trainer.stats();
  return trainer.input_vectors();
}

inline WalkSource make_walk_source(const DirectedGraph& g, const WalkConfig& cfg,
                                   bool undirected) {
  return [&g, cfg, undirected](const WalkSink& sink) {
    generate_walks(g, cfg, undirected, sink);
  };
}

struct ThresholdPick {
  double threshold = 0.0;
  double youden_j = 0.0;  // TPR - FPR at the picked threshold
};

// Chooses the proximity gate on labeled validation scores by maximizing
// Youden's J over the observed score values, classifying "score > threshold"
// as positive. Ties resolve to the lowest qualifying threshold.
inline ThresholdPick pick_proximity_threshold(const std::vector<double>& scores,
                                              const std::vector<int>& labels) {
  if (scores.size() != labels.size() || scores.empty())
    throw std::invalid_argument("pick_proximity_threshold: bad input sizes");
  std::size_t pos = 0, neg = 0;
  for (int y : labels) {
    if (y != 0 && y != 1)
      throw std::invalid_argument("pick_proximity_threshold: labels must be 0/1");
    (y == 1 ? pos : neg) += 1;
  }
  if (pos == 0 || neg == 0)
    throw std::invalid_argument("pick_proximity_threshold: need both classes");

  std::vector<double> cands = scores;
  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

  ThresholdPick best{cands.front(), -2.0};
  for (double th : cands) {
    std::size_t tp = 0, fp = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (scores[i] > th) (labels[i] == 1 ? tp : fp) += 1;
    }
    const double j = static_cast<double>(tp) / static_cast<double>(pos) -
                     static_cast<double>(fp) / static_cast<double>(neg);
    if (j > best.youden_j) best = {th, j};
  }
  return best;
}

inline ThresholdPick pick_proximity_threshold(const EmbeddingTable& table,
                                              const std::vector<LabeledPair>& labeled,
                                              double eps = kDegenerateNorm) {
  std::vector<double> scores;
  std::vector<int> labels;
  scores.reserve(labeled.size());
  for (const LabeledPair& p : labeled) {
    if (p.source >= table.count || p.target >= table.count)
      throw std::invalid_argument("pick_proximity_threshold: node not embedded");
    scores.push_back(
        scaled_cosine_similarity(table.vec(p.source), table.vec(p.target), eps));
    labels.push_back(p.label);
  }
  return pick_proximity_threshold(scores, labels);
}

}  // namespace greed
