#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "greed/direction_model.hpp"

namespace greed {

struct GradCheckReport {
  std::size_t checked = 0;
  std::size_t failures = 0;
  std::size_t skipped_pairs = 0;  // degenerate at the probe scale
  double max_rel_error = 0.0;
  std::string worst_param;
  double fd_step = 0.0;
  double tolerance = 0.0;

  bool passed() const { return failures == 0; }
};

// Central-difference check of the analytic batch gradient over every model
// parameter: layer weights and biases, the reference vector, and the node
// vectors touched by `pairs`. Errors are relative with an absolute floor so
// near-zero gradients compare against finite-difference noise fairly.
//
// Pairs whose cross product is degenerate (or nearly so) at the base point
// are excluded: the score sits on the flat 0.5 plateau where the analytic
// gradient is a correct zero, but a finite-difference step can hop off the
// plateau and measure the cliff instead of a derivative. The same applies
// just above the guard, where the cosine is too ill-conditioned for the
// probe step. Such pairs are counted in `skipped_pairs`.
// The floor must sit above the central-difference roundoff noise: the
// difference of the two probed losses carries a few ulps of the loss
// magnitude, so with losses up to O(1) the quotient is noisy at around
// eps_machine / (2 * fd_step) ~ 1e-10. Parameters with a true zero gradient
// (dead ReLU paths) would otherwise flag spurious relative errors of
// noise / floor. 1e-4 keeps that ratio an order of magnitude under the
// tolerance while still requiring near-zero gradients to agree within 1e-9
// absolute -- far below any real backprop defect.
inline GradCheckReport check_gradients(DirectionModel& model,
                                       const std::vector<LabeledPair>& pairs,
                                       double fd_step = 1e-6,
                                       double tolerance = 1e-5,
                                       double abs_floor = 1e-4) {
  GradCheckReport report;
  report.fd_step = fd_step;
  report.tolerance = tolerance;

  std::vector<LabeledPair> usable;
  usable.reserve(pairs.size());
  {
    ForwardResult fwd;
    for (const LabeledPair& p : pairs) {
      model.forward(p.source, p.target, fwd);
      if (fwd.cross_norm > std::max(model.cfg.eps, fd_step))
        usable.push_back(p);
      else
        ++report.skipped_pairs;
    }
  }
  if (usable.empty()) return report;

  Gradients grads = model.make_gradients();
  model.batch_gradients(usable, grads);

  auto probe = [&](double* slot, double analytic, const std::string& name) {
    const double saved = *slot;
    *slot = saved + fd_step;
    const double up = model.mean_loss(usable);
    *slot = saved - fd_step;
    const double down = model.mean_loss(usable);
    *slot = saved;
    const double fd = (up - down) / (2.0 * fd_step);
    const double scale = std::max({std::abs(fd), std::abs(analytic), abs_floor});
    const double rel = std::abs(fd - analytic) / scale;
    ++report.checked;
    if (rel > report.max_rel_error) {
      report.max_rel_error = rel;
      report.worst_param = name;
    }
    if (rel > tolerance) ++report.failures;
  };

  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    Matrix& w = model.weights[l];
    for (int r = 0; r < w.rows; ++r)
      for (int c = 0; c < w.cols; ++c)
        probe(&w.at(r, c), grads.weights[l].at(r, c),
              "weight[" + std::to_string(l) + "](" + std::to_string(r) + "," +
                  std::to_string(c) + ")");
    for (std::size_t i = 0; i < model.biases[l].size(); ++i)
      probe(&model.biases[l][i], grads.biases[l][i],
            "bias[" + std::to_string(l) + "][" + std::to_string(i) + "]");
  }
  for (std::size_t i = 0; i < model.reference.size(); ++i)
    probe(&model.reference[i], grads.reference[i],
          "reference[" + std::to_string(i) + "]");

  std::vector<NodeId> touched;
  for (const LabeledPair& p : usable) {
    touched.push_back(p.source);
    touched.push_back(p.target);
  }
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
  Vec zero(static_cast<std::size_t>(model.cfg.input_dim), 0.0);
  for (NodeId node : touched) {
    const auto it = grads.node_vectors.find(node);
    const Vec& g = it == grads.node_vectors.end() ? zero : it->second;
    double* row = model.node_vectors.row(node);
    for (int d = 0; d < model.cfg.input_dim; ++d)
      probe(&row[d], g[static_cast<std::size_t>(d)],
            "node[" + std::to_string(node) + "][" + std::to_string(d) + "]");
  }
  return report;
}

}  // namespace greed
