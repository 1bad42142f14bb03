#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "greed/crossprod.hpp"
#include "greed/embedding.hpp"
#include "greed/graph.hpp"
#include "greed/io_util.hpp"
#include "greed/matrix.hpp"
#include "greed/rng.hpp"

namespace greed {

struct ModelConfig {
  int input_dim = 64;              // per-node trainable vector size
  std::vector<int> hidden = {256, 256};
  int output_dim = 3;              // cross-product space dimension
  double margin = 0.25;            // slack for negative-pair loss
  double tau = 0.5;                // binary direction decision cut
  double learning_rate = 0.025;
  int batch_size = 512;
  int epochs = 5;
  double eps = 1e-12;              // degenerate-norm guard
  std::uint64_t rng_seed = 1;

  void validate() const {
    if (input_dim < 1) throw std::invalid_argument("ModelConfig: input_dim must be >= 1");
    if (output_dim < 3)
      throw std::invalid_argument("ModelConfig: output_dim must be >= 3");
    for (int h : hidden)
      if (h < 1) throw std::invalid_argument("ModelConfig: hidden sizes must be >= 1");
    if (!(margin > 0.0 && margin < 0.5))
      throw std::invalid_argument("ModelConfig: margin must be in (0, 0.5)");
    if (!(tau > 0.0 && tau < 1.0))
      throw std::invalid_argument("ModelConfig: tau must be in (0, 1)");
    if (!(learning_rate > 0.0))
      throw std::invalid_argument("ModelConfig: learning_rate must be > 0");
    if (batch_size < 1) throw std::invalid_argument("ModelConfig: batch_size must be >= 1");
    if (epochs < 1) throw std::invalid_argument("ModelConfig: epochs must be >= 1");
    if (!(eps > 0.0)) throw std::invalid_argument("ModelConfig: eps must be > 0");
  }
};

// Squared-error pull toward 1 for positives; squared hinge pushing below the
// margin for negatives.
inline double contrastive_loss(double yhat, int label, double margin) {
  if (label == 1) {
    const double d = 1.0 - yhat;
    return d * d;
  }
  const double d = std::max(yhat - margin, 0.0);
  return d * d;
}

inline double contrastive_loss_grad(double yhat, int label, double margin) {
  if (label == 1) return -2.0 * (1.0 - yhat);
  const double d = yhat - margin;
  return d > 0.0 ? 2.0 * d : 0.0;
}

struct TowerCache {
  std::vector<Vec> acts;  // acts[0] = node vector, acts[L] = tower output
  std::vector<Vec> pre;   // pre-activation of each layer
};

struct ForwardResult {
  TowerCache source;
  TowerCache target;
  std::vector<Vec> operands;  // [source out, target out, frame...]
  Vec cross;
  double cross_norm = 0.0;
  double yhat = 0.5;
};

struct Gradients {
  std::vector<Matrix> weights;
  std::vector<Vec> biases;
  Vec reference;
  std::unordered_map<NodeId, Vec> node_vectors;
};

struct TrainReport {
  std::vector<double> epoch_losses;  // mean pair loss per epoch
};

// Siamese direction scorer. Both pair endpoints run through the same MLP
// (ReLU hidden layers, linear output); their outputs fill the first two
// slots of a generalized cross product whose remaining operands are fixed
// frame vectors. The score is the scaled cosine between that product and a
// trainable reference vector, so swapping the endpoints flips the product's
// sign and maps the score to one minus itself.
class DirectionModel {
 public:
  ModelConfig cfg;
  EmbeddingTable node_vectors;  // dim = cfg.input_dim
  std::vector<Matrix> weights;  // hidden layers then output layer
  std::vector<Vec> biases;
  Vec reference;
  ConstantFrame frame;

  DirectionModel() = default;

  DirectionModel(const ModelConfig& config, std::size_t node_count) : cfg(config) {
    cfg.validate();
    if (node_count == 0) throw std::invalid_argument("DirectionModel: no nodes");

    node_vectors = EmbeddingTable(node_count, cfg.input_dim);
    Rng rng(derive_seed(cfg.rng_seed, "direction-init"));
    const double node_scale = 1.0 / std::sqrt(static_cast<double>(cfg.input_dim));
    for (double& v : node_vectors.data) v = rng.next_normal() * node_scale;

    std::vector<int> dims;
    dims.push_back(cfg.input_dim);
    for (int h : cfg.hidden) dims.push_back(h);
    dims.push_back(cfg.output_dim);
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
      Matrix w(dims[l + 1], dims[l]);
      const bool relu_layer = l + 2 < dims.size();
      const double scale =
          std::sqrt((relu_layer ? 2.0 : 1.0) / static_cast<double>(dims[l]));
      for (double& v : w.data) v = rng.next_normal() * scale;
      weights.push_back(std::move(w));
      biases.emplace_back(static_cast<std::size_t>(dims[l + 1]), 0.0);
    }

    reference.resize(static_cast<std::size_t>(cfg.output_dim));
    for (double& v : reference) v = rng.next_normal();
    const double rn = norm(reference);
    for (double& v : reference) v /= rn;

    frame = make_constant_frame(cfg.output_dim, derive_seed(cfg.rng_seed, "frame"));
  }

  std::size_t node_count() const { return node_vectors.count; }
  std::size_t layer_count() const { return weights.size(); }

  void run_tower(const Vec& x, TowerCache& tc) const {
    tc.acts.assign(1, x);
    tc.pre.clear();
    for (std::size_t l = 0; l < weights.size(); ++l) {
      Vec z = weights[l].apply(tc.acts.back());
      for (std::size_t i = 0; i < z.size(); ++i) z[i] += biases[l][i];
      tc.pre.push_back(z);
      if (l + 1 < weights.size())
        for (double& v : z) v = v > 0.0 ? v : 0.0;
      tc.acts.push_back(std::move(z));
    }
  }

  void forward(NodeId s, NodeId t, ForwardResult& fwd) const {
    run_tower(node_vectors.vec(s), fwd.source);
    run_tower(node_vectors.vec(t), fwd.target);
    fwd.operands.assign({fwd.source.acts.back(), fwd.target.acts.back()});
    fwd.operands.insert(fwd.operands.end(), frame.vectors.begin(),
                        frame.vectors.end());
    fwd.cross = cross_product(fwd.operands);
    fwd.cross_norm = norm(fwd.cross);
    fwd.yhat = scaled_cosine(fwd.cross, reference, cfg.eps);
  }

  double predict(NodeId s, NodeId t) const {
    ForwardResult fwd;
    forward(s, t, fwd);
    return fwd.yhat;
  }

  Gradients make_gradients() const {
    Gradients g;
    for (const Matrix& w : weights) g.weights.emplace_back(w.rows, w.cols);
    for (const Vec& b : biases) g.biases.emplace_back(b.size(), 0.0);
    g.reference.assign(reference.size(), 0.0);
    return g;
  }

  static void reset_gradients(Gradients& g) {
    for (Matrix& w : g.weights) w.fill(0.0);
    for (Vec& b : g.biases) std::fill(b.begin(), b.end(), 0.0);
    std::fill(g.reference.begin(), g.reference.end(), 0.0);
    g.node_vectors.clear();
  }

  // Accumulates parameter gradients for one pair given dL/dscore. Inside the
  // degenerate-product guard the score is locally constant, so everything
  // stays zero there.
  void backward(NodeId s, NodeId t, const ForwardResult& fwd, double dloss_dyhat,
                Gradients& grads) const {
    if (!(fwd.cross_norm > cfg.eps) || dloss_dyhat == 0.0) return;

    Vec g_cross = scaled_cosine_grad(fwd.cross, reference, cfg.eps);
    for (double& v : g_cross) v *= dloss_dyhat;
    Vec g_ref = scaled_cosine_grad(reference, fwd.cross, cfg.eps);
    for (std::size_t i = 0; i < g_ref.size(); ++i)
      grads.reference[i] += dloss_dyhat * g_ref[i];

    const Matrix j_source = cross_product_jacobian(fwd.operands, 0);
    const Matrix j_target = cross_product_jacobian(fwd.operands, 1);
    const Vec g_source_out = j_source.apply_transposed(g_cross);
    const Vec g_target_out = j_target.apply_transposed(g_cross);

    accumulate_node_grad(grads, s, tower_backward(fwd.source, g_source_out, grads));
    accumulate_node_grad(grads, t, tower_backward(fwd.target, g_target_out, grads));
  }

  double pair_loss(NodeId s, NodeId t, int label) const {
    return contrastive_loss(predict(s, t), label, cfg.margin);
  }

  double mean_loss(const std::vector<LabeledPair>& pairs) const {
    if (pairs.empty()) throw std::invalid_argument("mean_loss: no pairs");
    double total = 0.0;
    for (const LabeledPair& p : pairs) total += pair_loss(p.source, p.target, p.label);
    return total / static_cast<double>(pairs.size());
  }

  // Gradient of the mean loss over `pairs`, matching what one training batch
  // applies. Used by the finite-difference check.
  void batch_gradients(const std::vector<LabeledPair>& pairs, Gradients& grads) const {
    reset_gradients(grads);
    ForwardResult fwd;
    for (const LabeledPair& p : pairs) {
      forward(p.source, p.target, fwd);
      backward(p.source, p.target, fwd,
               contrastive_loss_grad(fwd.yhat, p.label, cfg.margin), grads);
    }
    const double inv = 1.0 / static_cast<double>(pairs.size());
    for (Matrix& w : grads.weights)
      for (double& v : w.data) v *= inv;
    for (Vec& b : grads.biases)
      for (double& v : b) v *= inv;
    for (double& v : grads.reference) v *= inv;
    for (auto& [node, g] : grads.node_vectors)
      for (double& v : g) v *= inv;
  }

  // Plain SGD over shuffled batches; each batch applies the mean gradient.
  TrainReport train(const std::vector<LabeledPair>& pairs) {
    if (pairs.empty()) throw std::invalid_argument("train: no pairs");
    for (const LabeledPair& p : pairs)
      if (p.source >= node_count() || p.target >= node_count())
        throw std::invalid_argument("train: pair node out of range");

    TrainReport report;
    std::vector<std::size_t> order(pairs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Gradients grads = make_gradients();
    ForwardResult fwd;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
      Rng shuffle_rng(derive_seed(cfg.rng_seed, "train-shuffle",
                                  static_cast<std::uint64_t>(epoch)));
      shuffle_rng.shuffle(order);

      double epoch_loss = 0.0;
      for (std::size_t start = 0; start < order.size();
           start += static_cast<std::size_t>(cfg.batch_size)) {
        const std::size_t stop =
            std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
        reset_gradients(grads);
        for (std::size_t i = start; i < stop; ++i) {
          const LabeledPair& p = pairs[order[i]];
          forward(p.source, p.target, fwd);
          epoch_loss += contrastive_loss(fwd.yhat, p.label, cfg.margin);
          backward(p.source, p.target, fwd,
                   contrastive_loss_grad(fwd.yhat, p.label, cfg.margin), grads);
        }
        apply_update(grads, cfg.learning_rate / static_cast<double>(stop - start));
      }
      epoch_loss /= static_cast<double>(pairs.size());
      if (!std::isfinite(epoch_loss))
        throw std::runtime_error("train: non-finite loss at epoch " +
                                 std::to_string(epoch) +
                                 "; lower the learning rate or check the input pairs");
      report.epoch_losses.push_back(epoch_loss);
    }
    return report;
  }

  // Tower outputs for every node: the exportable direction embeddings.
  EmbeddingTable export_outputs() const {
    EmbeddingTable out(node_count(), cfg.output_dim);
    TowerCache tc;
    for (std::size_t i = 0; i < node_count(); ++i) {
      run_tower(node_vectors.vec(i), tc);
      const Vec& u = tc.acts.back();
      std::copy(u.begin(), u.end(), out.row(i));
    }
    return out;
  }

 private:
  Vec tower_backward(const TowerCache& tc, Vec g, Gradients& grads) const {
    for (std::size_t l = weights.size(); l-- > 0;) {
      if (l + 1 < weights.size())
        for (std::size_t i = 0; i < g.size(); ++i)
          if (tc.pre[l][i] <= 0.0) g[i] = 0.0;
      grads.weights[l].add_outer(g, tc.acts[l], 1.0);
      for (std::size_t i = 0; i < g.size(); ++i) grads.biases[l][i] += g[i];
      g = weights[l].apply_transposed(g);
    }
    return g;
  }

  static void accumulate_node_grad(Gradients& grads, NodeId node, const Vec& g) {
    auto [it, inserted] = grads.node_vectors.try_emplace(node, g.size(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) it->second[i] += g[i];
  }

  void apply_update(const Gradients& grads, double step) {
    for (std::size_t l = 0; l < weights.size(); ++l) {
      weights[l].add_scaled(grads.weights[l], -step);
      for (std::size_t i = 0; i < biases[l].size(); ++i)
        biases[l][i] -= step * grads.biases[l][i];
    }
    for (std::size_t i = 0; i < reference.size(); ++i)
      reference[i] -= step * grads.reference[i];
    for (const auto& [node, g] : grads.node_vectors) {
      double* row = node_vectors.row(node);
      for (std::size_t i = 0; i < g.size(); ++i) row[i] -= step * g[i];
    }
  }
};

// Hard direction call: 1 iff the score clears tau strictly, so a pair and
// its reversal never both classify as edges (except exactly at tau).
inline int predict_direction(const DirectionModel& model, NodeId s, NodeId t,
                             double tau) {
  return model.predict(s, t) > tau ? 1 : 0;
}

inline int predict_direction(const DirectionModel& model, NodeId s, NodeId t) {
  return predict_direction(model, s, t, model.cfg.tau);
}

namespace detail {

inline void write_vec(std::ostream& out, const Vec& v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    out << (i ? " " : "") << fmt_g17(v[i]);
  out << "\n";
}

inline Vec read_vec(std::istream& in, std::size_t n, const char* what) {
  Vec v(n);
  for (double& x : v)
    if (!(in >> x)) throw std::runtime_error(std::string("model file: truncated ") + what);
  return v;
}

}  // namespace detail

inline void save_model(const std::string& path, const DirectionModel& m) {
  auto out = open_output(path);
  out << "direction-model v1\n";
  out << "input_dim " << m.cfg.input_dim << "\n";
  out << "output_dim " << m.cfg.output_dim << "\n";
  out << "hidden";
  for (int h : m.cfg.hidden) out << " " << h;
  out << "\n";
  out << "margin " << fmt_g17(m.cfg.margin) << "\n";
  out << "tau " << fmt_g17(m.cfg.tau) << "\n";
  out << "eps " << fmt_g17(m.cfg.eps) << "\n";
  out << "nodes " << m.node_count() << "\n";
  detail::write_vec(out, m.reference);
  out << "frame " << m.frame.vectors.size() << "\n";
  for (const Vec& f : m.frame.vectors) detail::write_vec(out, f);
  for (std::size_t l = 0; l < m.weights.size(); ++l) {
    const Matrix& w = m.weights[l];
    out << "layer " << w.rows << " " << w.cols << "\n";
    for (int r = 0; r < w.rows; ++r) {
      for (int c = 0; c < w.cols; ++c) out << (c ? " " : "") << fmt_g17(w.at(r, c));
      out << "\n";
    }
    detail::write_vec(out, m.biases[l]);
  }
  for (std::size_t i = 0; i < m.node_count(); ++i) {
    out << i;
    const double* r = m.node_vectors.row(i);
    for (int d = 0; d < m.cfg.input_dim; ++d) out << " " << fmt_g17(r[d]);
    out << "\n";
  }
}

inline DirectionModel load_model(const std::string& path) {
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line) || line != "direction-model v1")
    throw std::runtime_error("model file: unknown format/version in " + path);

  auto expect_key = [&](const char* key) {
    std::string k;
    if (!(in >> k) || k != key)
      throw std::runtime_error(std::string("model file: expected \"") + key + "\"");
  };

  DirectionModel m;
  std::size_t node_count = 0;
  expect_key("input_dim");
  in >> m.cfg.input_dim;
  expect_key("output_dim");
  in >> m.cfg.output_dim;
  expect_key("hidden");
  m.cfg.hidden.clear();
  {
    std::getline(in, line);
    std::istringstream hs(line);
    int h;
    while (hs >> h) m.cfg.hidden.push_back(h);
  }
  expect_key("margin");
  in >> m.cfg.margin;
  expect_key("tau");
  in >> m.cfg.tau;
  expect_key("eps");
  in >> m.cfg.eps;
  expect_key("nodes");
  in >> node_count;
  if (!in) throw std::runtime_error("model file: bad header in " + path);
  m.cfg.validate();
  if (node_count == 0) throw std::runtime_error("model file: zero nodes in " + path);

  m.reference =
      detail::read_vec(in, static_cast<std::size_t>(m.cfg.output_dim), "reference");
  expect_key("frame");
  std::size_t frame_count = 0;
  in >> frame_count;
  if (frame_count != static_cast<std::size_t>(m.cfg.output_dim - 3))
    throw std::runtime_error("model file: frame count does not match output_dim");
  for (std::size_t f = 0; f < frame_count; ++f)
    m.frame.vectors.push_back(
        detail::read_vec(in, static_cast<std::size_t>(m.cfg.output_dim), "frame"));

  std::vector<int> dims;
  dims.push_back(m.cfg.input_dim);
  for (int h : m.cfg.hidden) dims.push_back(h);
  dims.push_back(m.cfg.output_dim);
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    expect_key("layer");
    int rows = 0, cols = 0;
    in >> rows >> cols;
    if (rows != dims[l + 1] || cols != dims[l])
      throw std::runtime_error("model file: layer shape mismatch");
    Matrix w(rows, cols);
    for (double& v : w.data)
      if (!(in >> v)) throw std::runtime_error("model file: truncated layer");
    m.weights.push_back(std::move(w));
    m.biases.push_back(detail::read_vec(in, static_cast<std::size_t>(rows), "bias"));
  }

  m.node_vectors = EmbeddingTable(node_count, m.cfg.input_dim);
  for (std::size_t i = 0; i < node_count; ++i) {
    std::size_t idx;
    if (!(in >> idx) || idx != i)
      throw std::runtime_error("model file: node vectors out of order");
    double* r = m.node_vectors.row(i);
    for (int d = 0; d < m.cfg.input_dim; ++d)
      if (!(in >> r[d])) throw std::runtime_error("model file: truncated node vector");
  }
  return m;
}

}  // namespace greed
